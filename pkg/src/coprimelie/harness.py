"""Scenario configuration and execution.

A config is a JSON object with a ``kind`` and kind-specific fields, or a
batch ``{"scenarios": [...]}``.  Every scenario is a pure function of its
config (and any files it names), so identical configs give identical
report bytes.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import instances as I
from .actions import ActionSetup, fixed_points, load_setup, verify_coprime_facts
from .catalog import FIVE_GROUPS, ORDER16, SMALL_CATALOG, construct_catalog_group
from .errors import AlgebraError, ConfigError, HypothesisFail, MixedExponentLayer, NotFound, TooLarge
from .graded import (
    action_invariant_violations,
    criterion_report,
    fixed_point_span_T,
    frobenius_generation_check,
    grading_violations,
    omega_identities,
    verify_L0_decomposition,
    verify_L0_lemma,
    verify_metabelian_lemma,
)
from .groups import (
    ENUMERATION_CAP,
    FiniteGroup,
    Subgroup,
    exponent,
    fitting_subgroup,
    gamma_infinity,
    is_elementary_abelian,
    is_nilpotent,
    is_normal,
    nilpotency_class,
    prime_power,
)
from .lie import lie_class
from .report import ABSTAIN, FAIL, PASS, SKIP, ScenarioReport
from .structure import (
    check_frobenius,
    check_no_noncyclic_char_abelian,
    check_regularity_identity,
    find_exponent_q_cube,
    find_normal_rank2,
    frobenius_from_parts,
    is_metacyclic,
    is_supersolvable,
    order16_search,
)

KINDS = (
    "coprime_facts",
    "lemma_metacyclic",
    "lemma_regularity",
    "lemma_q_cube",
    "lemma_submet",
    "frobenius_generation",
    "grading_criterion",
    "decomposition_L0",
    "theorem_main1_hypotheses",
    "theorem_main2_pipeline",
    "order16_search",
)

# named group lists usable wherever a "groups" field is accepted
GROUP_LISTS = {
    "small_catalog": SMALL_CATALOG,
    "five_groups": FIVE_GROUPS,
    "order16": ORDER16,
    "submet": I.SUBMET_SPECS,
}


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    name: str = ""
    cap: int | None = None
    base: Path = Path(".")  # for relative file paths

    @classmethod
    def from_dict(cls, doc: dict, base: Path | str = ".") -> "ScenarioConfig":
        if not isinstance(doc, dict):
            raise ConfigError("a scenario must be a JSON object")
        kind = doc.get("kind")
        if kind not in KINDS:
            raise ConfigError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        params = {k: v for k, v in doc.items() if k not in ("kind", "name", "cap")}
        cap = doc.get("cap")
        if cap is not None and (not isinstance(cap, int) or isinstance(cap, bool) or cap < 1):
            raise ConfigError("cap must be a positive integer")
        cfg = cls(kind, params, str(doc.get("name", kind)), cap, Path(base))
        _REQUIRED[kind](cfg)
        return cfg

    def echo(self) -> dict:
        out = {"kind": self.kind, "name": self.name, **self.params}
        if self.cap is not None:
            out["cap"] = self.cap
        return out

    def with_cap(self, cap: int | None) -> "ScenarioConfig":
        if cap is None:
            return self
        return ScenarioConfig(self.kind, self.params, self.name, cap, self.base)

    def path(self, key: str) -> Path:
        p = Path(self.params[key])
        return p if p.is_absolute() else self.base / p


def _need_one(*keys):
    def check(cfg: ScenarioConfig):
        if not any(k in cfg.params for k in keys):
            raise ConfigError(f"{cfg.kind} needs one of: {', '.join(keys)}")
    return check


def _need_all(*keys):
    def check(cfg: ScenarioConfig):
        missing = [k for k in keys if k not in cfg.params]
        if missing:
            raise ConfigError(f"{cfg.kind} is missing: {', '.join(missing)}")
    return check


def _no_fields(cfg):
    return None


_REQUIRED: dict[str, Callable[[ScenarioConfig], None]] = {
    "coprime_facts": _need_one("setup", "setups", "setup_file"),
    "lemma_metacyclic": _need_one("groups"),
    "lemma_regularity": _need_all("groups", "q"),
    "lemma_q_cube": _need_all("groups", "q"),
    "lemma_submet": _need_one("groups"),
    "frobenius_generation": _need_one("instance"),
    "grading_criterion": _need_one("instances"),
    "decomposition_L0": _need_one("instances"),
    "theorem_main1_hypotheses": _need_one("setup", "setup_file"),
    "theorem_main2_pipeline": _need_one("pipeline", "setup_file"),
    "order16_search": _no_fields,
}


def load_config(path: str | Path) -> list[ScenarioConfig]:
    """Parse a config file holding one scenario or a batch."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(doc, path.parent)


def parse_config(doc, base: Path | str = ".") -> list[ScenarioConfig]:
    if isinstance(doc, dict) and "scenarios" in doc:
        items = doc["scenarios"]
        if not isinstance(items, list):
            raise ConfigError("'scenarios' must be a list")
    else:
        items = [doc]
    return [ScenarioConfig.from_dict(d, base) for d in items]


# ---------------------------------------------------------------------------
# helpers

def _groups(cfg: ScenarioConfig) -> list[str]:
    g = cfg.params["groups"]
    if isinstance(g, str):
        if g not in GROUP_LISTS:
            raise ConfigError(f"unknown group list {g!r}")
        return list(GROUP_LISTS[g])
    if not isinstance(g, list) or not all(isinstance(s, str) for s in g):
        raise ConfigError("groups must be a list of catalog specs or a list name")
    return g


def _build(spec: str) -> FiniteGroup:
    try:
        return construct_catalog_group(spec)
    except AlgebraError as exc:
        raise ConfigError(f"cannot build {spec!r}: {exc}") from exc


def _names(cfg: ScenarioConfig, key: str, registry: dict) -> list[str]:
    val = cfg.params[key]
    names = list(registry) if val == "all" else ([val] if isinstance(val, str) else val)
    unknown = [n for n in names if n not in registry]
    if unknown:
        raise ConfigError(f"unknown {key}: {', '.join(unknown)}")
    return names


def _enum_cap(cfg: ScenarioConfig) -> int:
    return cfg.cap or ENUMERATION_CAP


# ---------------------------------------------------------------------------
# kinds

def _coprime_facts(cfg: ScenarioConfig, rep: ScenarioReport) -> None:
    setups: list[tuple[str, ActionSetup]] = []
    if "setup_file" in cfg.params:
        setups.append((str(cfg.params["setup_file"]), load_setup(cfg.path("setup_file"))))
    for key in ("setup", "setups"):
        if key in cfg.params:
            setups += [(n, I.coprime_setup(n)) for n in _names(cfg, key, I.COPRIME_SETUPS)]
    for name, s in setups:
        rep.extend(verify_coprime_facts(s, _enum_cap(cfg)), prefix=f"{name}:")


def _lemma_metacyclic(cfg, rep):
    q = cfg.params.get("q")
    for spec in _groups(cfg):
        G = _build(spec)
        v = is_metacyclic(G)
        obs = {"order": G.order, "metacyclic": v.metacyclic, "index_test": v.index_test}
        if v.metacyclic:
            obs["cyclic_normal"] = list(v.kernel.gens)
            obs["top"] = v.top
        pp = prime_power(G.order)
        if q is not None and (pp is None or pp[0] != q) and G.order > 1:
            rep.add(f"{spec}", SKIP, observed=obs, note=f"not a {q}-group")
        elif v.index_test is None:
            rep.add(f"{spec}", PASS, observed=obs, note="index test applies to odd q-groups only")
        else:
            rep.check(f"{spec}", v.index_test == v.metacyclic, {"disagreement": [v.metacyclic, v.index_test]},
                      observed=obs)


def _lemma_regularity(cfg, rep):
    q = int(cfg.params["q"])
    for spec in _groups(cfg):
        G = _build(spec)
        try:
            sub = check_regularity_identity(G, q)
        except TooLarge as exc:
            rep.add(spec, SKIP, note=str(exc))
            continue
        rep.extend(sub, prefix=f"{spec}:")


def _lemma_q_cube(cfg, rep):
    q = int(cfg.params["q"])
    for spec in _groups(cfg):
        G = _build(spec)
        meta = bool(is_metacyclic(G))
        try:
            S = find_exponent_q_cube(G, q)
        except NotFound:
            S = None
        obs = {"order": G.order, "metacyclic": meta, "found": S is not None}
        if S is not None:
            H, _ = S.as_group()
            obs["witness_gens"] = list(S.gens)
            ok_w = S.order == q ** 3 and exponent(H) == q
            rep.check(f"{spec}:witness", ok_w, {"order": S.order, "exponent": exponent(H)}, observed=obs)
        expected = (not meta) and G.order >= q ** 3
        if q > 3:
            rep.check(f"{spec}:pattern", (S is not None) == expected,
                      {"expected_found": expected, "found": S is not None}, observed=obs)
        elif S is not None:
            # a metacyclic group has no such subgroup, whatever q is
            rep.check(f"{spec}:pattern", not meta, {"metacyclic": meta}, observed=obs)
        else:
            rep.add(f"{spec}:pattern", SKIP, observed=obs, note=f"no guarantee for q = {q}")


def _lemma_submet(cfg, rep):
    """Frobenius groups: validate, then the rank-2 normal subgroup in a
    non-metacyclic kernel; also the characteristic-abelian predicate on
    q-group kernels small enough for full automorphism enumeration."""
    for spec in _groups(cfg):
        G = _build(spec)
        try:
            fs = frobenius_from_parts(G)
        except (AlgebraError, ValueError) as exc:
            rep.add(f"{spec}:frobenius", FAIL, witnesses={"error": str(exc)})
            continue
        rep.add(f"{spec}:frobenius", PASS, observed={"kernel": fs.kernel.order, "complement": fs.complement.order})
        Fg, emb = fs.kernel.as_group()
        meta = bool(is_metacyclic(Fg))
        if meta:
            rep.add(f"{spec}:normal_rank2", SKIP, observed={"kernel_metacyclic": True},
                    note="kernel metacyclic; no claim")
        else:
            try:
                E = find_normal_rank2(Fg)
            except NotFound:
                rep.add(f"{spec}:normal_rank2", FAIL, witnesses={"kernel": Fg.name},
                        note="no normal elementary abelian rank-2 subgroup")
            else:
                pp = prime_power(E.order)
                ok = pp is not None and pp[1] == 2 and is_elementary_abelian(E, pp[0]) and is_normal(Fg, E)
                rep.check(f"{spec}:normal_rank2", ok, {"witness": list(E.sorted)},
                          observed={"order": E.order, "gens_in_FH": [emb[x] for x in E.gens]})
        pp = prime_power(Fg.order)
        if pp and pp[0] % 2 and Fg.order <= 256:
            sub = check_no_noncyclic_char_abelian(Fg, pp[0])
            if sub["hypothesis"].status == PASS:
                rep.extend(sub, prefix=f"{spec}:kernel:")
            else:
                rep.add(f"{spec}:kernel:central_product_decomposition", SKIP,
                        observed={"characteristic_abelian": sub["hypothesis"].witnesses["characteristic_abelian"][:8]},
                        note="kernel has a noncyclic characteristic abelian subgroup; predicate not applicable")


def _frobenius_generation(cfg, rep):
    gi = I.generation_instance(_names(cfg, "instance", I.GENERATION_INSTANCES)[0])
    try:
        sub = frobenius_generation_check(gi.N, gi.KB, gi.setup)
    except HypothesisFail as exc:
        K = gi.KB.kernel
        C = fixed_points(gi.setup, K.sorted)
        rep.add("C_N(K)_trivial", FAIL, role="hypothesis", witnesses={"fixed": list(C.sorted[1:2])},
                note=str(exc))
        rep.add("generated_equals_N", SKIP, role="conclusion", note="hypothesis failed")
        return
    for rec in sub.checks:
        rec.role = "hypothesis" if rec.name == "C_N(K)_trivial" else "conclusion"
    rep.extend(sub)


def _grading_criterion(cfg, rep):
    for name in _names(cfg, "instances", I.GRADINGS):
        g = I.grading(name)
        bad = grading_violations(g)
        rep.check(f"{name}:grading_invariants", not bad, {"violations": bad[:3]}, observed={"dims": g.dims})
        rep.check(f"{name}:omega_identities", omega_identities(g.ring.field, g.omega, g.p),
                  {"omega": g.omega}, observed={"omega": g.omega, "field": repr(g.ring.field)})
        rep.extend(criterion_report(g, cfg.cap), prefix=f"{name}:")


def _lie_actions_for(cfg):
    out = []
    for name in _names(cfg, "instances", {**I.LIE_ACTIONS, **I.GROUP_PIPELINES}):
        if name in I.LIE_ACTIONS:
            out.append((name, I.lie_action(name)))
        else:
            out.append((name, I.pipeline_lie_action(I.group_pipeline(name))[1]))
    return out


def _decomposition_checks(name, fa, rep, cap=None, role="check"):
    bad = action_invariant_violations(fa)
    rep.check(f"{name}:H_permutes_components", not bad, {"violations": bad[:3]},
              observed={"r": fa.r, "|H|": fa.qH, "p": fa.p, "dims": fa.grading.dims}, role=role)
    for sub in (verify_L0_decomposition(fa), verify_L0_lemma(fa), verify_metabelian_lemma(fa)):
        for rec in sub.checks:
            rec.role = role
        rep.extend(sub, prefix=f"{name}:")
    T = fixed_point_span_T(fa, 1)
    rep.add(f"{name}:T_fixed_by_H", PASS, observed={"dim_T": T.dim}, role=role)


def _decomposition_L0(cfg, rep):
    for name, fa in _lie_actions_for(cfg):
        _decomposition_checks(name, fa, rep, cfg.cap)


def _skip_all(rep, names, why="a hypothesis failed"):
    for n in names:
        rep.add(n, SKIP, role="conclusion", note=why)


def _theorem_main1(cfg, rep):
    if "setup_file" in cfg.params:
        s = load_setup(cfg.path("setup_file"))
    else:
        s = I.theorem1_setup(_names(cfg, "setup", I.THEOREM1_SETUPS)[0])
    A, G = s.actor, s.target
    rep.config.update({"actor": A.name, "target": G.name})
    pp = prime_power(A.order)
    q = pp[0] if pp else None
    base_ok = []
    base_ok.append(rep.check("A_is_q_group", pp is not None and A.order > 1, {"order": A.order},
                             role="hypothesis", observed={"q": q}).status == PASS)
    base_ok.append(rep.check("q_greater_than_3", q is not None and q > 3, {"q": q}, role="hypothesis").status == PASS)
    mv = is_metacyclic(A)
    base_ok.append(rep.check("A_non_metacyclic", not mv.metacyclic,
                             {"cyclic_normal": list(mv.kernel.gens) if mv.kernel else []},
                             role="hypothesis").status == PASS)
    base_ok.append(rep.check("coprime", math.gcd(A.order, G.order) == 1, {"gcd": math.gcd(A.order, G.order)},
                             role="hypothesis").status == PASS)
    cls, gam, fit, bad = [], [], [], None
    cap = _enum_cap(cfg)
    for a in range(1, A.order):
        C = fixed_points(s, [a])
        H, _ = C.as_group()
        c = nilpotency_class(H)
        cls.append(c)
        gam.append(gamma_infinity(H).order)
        fo = _fitting_order(H, cap)
        fit.append(None if fo is None else H.order // fo)
        if c is None and bad is None:
            bad = a
    nil_ok = rep.check("centralizers_nilpotent", bad is None, {"actor_element": bad},
                       role="hypothesis", observed={"max_class_c": max([c for c in cls if c is not None], default=0)}
                       ).status == PASS
    if not (all(base_ok) and nil_ok):
        # one failed hypothesis withholds every conclusion
        _skip_all(rep, ["i_G_nilpotent", "exponent_q_cube_in_A",
                        "ii_gamma_infinity_observed", "iii_fitting_index_observed"])
        return
    G_cls = nilpotency_class(G)
    rep.check("i_G_nilpotent", G_cls is not None, {"gamma_infinity_order": gamma_infinity(G).order},
              role="conclusion", observed={"class": G_cls, "c": max(cls)})
    S = find_exponent_q_cube(A, q)
    Hs, _ = S.as_group()
    rep.check("exponent_q_cube_in_A", S.order == q ** 3 and exponent(Hs) == q,
              {"order": S.order}, role="conclusion", observed={"gens": list(S.gens)})
    rep.add("ii_gamma_infinity_observed", PASS, role="conclusion",
            observed={"max_centralizer_gamma_infinity": max(gam), "G_gamma_infinity": gamma_infinity(G).order},
            note="bound function not constructive; values recorded only")
    f2 = _fitting_order(G, cap, 2)
    if f2 is None or None in fit:
        rep.add("iii_fitting_index_observed", ABSTAIN, role="conclusion",
                note=f"Fitting subgroups need |G| <= cap {cap}")
    else:
        rep.add("iii_fitting_index_observed", PASS, role="conclusion",
                observed={"max_centralizer_fitting_index": max(fit), "G_second_fitting_index": G.order // f2},
                note="bound function not constructive; values recorded only")


def _fitting_order(H: FiniteGroup, cap: int, level: int = 1) -> int | None:
    if is_nilpotent(H):
        return H.order
    try:
        return fitting_subgroup(H, level, cap).order
    except TooLarge:
        return None


def _pipeline_setup(cfg) -> tuple[str, "I.GroupPipeline"]:
    if "setup_file" in cfg.params:
        s = load_setup(cfg.path("setup_file"))
        try:
            kern, comp = cfg.params["kernel"], cfg.params["complement"]
        except KeyError:
            raise ConfigError("setup_file pipelines need 'kernel' and 'complement' index lists") from None
        fs = check_frobenius(s.actor, Subgroup(s.actor, kern), Subgroup(s.actor, comp))
        return str(cfg.params["setup_file"]), I.GroupPipeline(str(cfg.params["setup_file"]), fs, s)
    name = _names(cfg, "pipeline", I.GROUP_PIPELINES)[0]
    return name, I.group_pipeline(name)


def _theorem_main2(cfg, rep):
    name, gp = _pipeline_setup(cfg)
    s, fs, G = gp.setup, gp.fs, gp.G
    FH = fs.whole
    if s.is_trivial():
        raise ConfigError("FH acts trivially on G; the pipeline needs a nontrivial action")
    rep.config.update({"FH": FH.name, "G": G.name})
    ok = []
    ss, _ = is_supersolvable(FH, max(FH.order, _enum_cap(cfg)))
    ok.append(rep.check("FH_supersolvable", ss, {"FH": FH.name}, role="hypothesis").status == PASS)
    mv = is_metacyclic(FH)
    ok.append(rep.check("FH_non_metacyclic", not mv.metacyclic,
                        {"cyclic_normal": list(mv.kernel.gens) if mv.kernel else []}, role="hypothesis").status == PASS)
    ok.append(rep.check("coprime", s.coprime, {"gcd": math.gcd(FH.order, G.order)}, role="hypothesis").status == PASS)
    CH = fixed_points(s, fs.complement.sorted)
    cH = nilpotency_class(CH.as_group()[0])
    cx, bad = [], None
    for x in fs.kernel.sorted[1:]:
        c = nilpotency_class(fixed_points(s, [x]).as_group()[0])
        cx.append(c)
        if c is None and bad is None:
            bad = x
    ok.append(rep.check("centralizers_nilpotent", cH is not None and bad is None,
                        {"kernel_element": bad, "C_G(H)_class": cH}, role="hypothesis",
                        observed={"C_G(H)_class": cH, "max_C_G(x)_class": max([c for c in cx if c], default=0),
                                  "|C_G(H)|": CH.order}).status == PASS)
    concl = ["G_nilpotent", "assoc_lie_class_matches", "grading", "decomposition"]
    if not all(ok):
        _skip_all(rep, concl)
        return
    G_cls = nilpotency_class(G)
    rep.check("G_nilpotent", G_cls is not None, {"gamma_infinity_order": gamma_infinity(G).order},
              role="conclusion", observed={"class": G_cls})
    try:
        A, fa = I.pipeline_lie_action(gp)
    except MixedExponentLayer as exc:
        rep.add("assoc_lie_class_matches", SKIP, role="conclusion", note=f"outside layer restriction: {exc}")
        return
    L_cls = lie_class(A.ring)
    rep.check("assoc_lie_class_matches", L_cls == G_cls, {"lie_class": L_cls, "group_class": G_cls},
              role="conclusion", observed={"layer_dims": A.dims, "field": repr(fa.ring.field), "omega": fa.grading.omega,
                                           "Z": list(fa.Z.sorted)})
    sub = criterion_report(fa.grading, cfg.cap)
    for rec in sub.checks:
        rec.role = "conclusion"
    rep.extend(sub, prefix="grading:")
    _decomposition_checks("decomposition", fa, rep, cfg.cap, role="conclusion")


def _order16(cfg, rep):
    specs = _groups(cfg) if "groups" in cfg.params else list(ORDER16)
    rep.extend(order16_search(specs))


_RUNNERS: dict[str, Callable[[ScenarioConfig, ScenarioReport], None]] = {
    "coprime_facts": _coprime_facts,
    "lemma_metacyclic": _lemma_metacyclic,
    "lemma_regularity": _lemma_regularity,
    "lemma_q_cube": _lemma_q_cube,
    "lemma_submet": _lemma_submet,
    "frobenius_generation": _frobenius_generation,
    "grading_criterion": _grading_criterion,
    "decomposition_L0": _decomposition_L0,
    "theorem_main1_hypotheses": _theorem_main1,
    "theorem_main2_pipeline": _theorem_main2,
    "order16_search": _order16,
}


def run_scenario(cfg: ScenarioConfig) -> ScenarioReport:
    """Run one scenario.  Module errors propagate except where a kind turns
    them into recorded checks; ConfigError signals a bad config."""
    rep = ScenarioReport(cfg.name, cfg.echo())
    t0 = time.perf_counter()
    _RUNNERS[cfg.kind](cfg, rep)
    rep.wall_time = time.perf_counter() - t0
    return rep


def run_batch(configs: list[ScenarioConfig], workers: int = 1) -> list[ScenarioReport]:
    """Reports come back in config order whatever the completion order."""
    if workers <= 1:
        return [run_scenario(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_scenario, configs))


# ---------------------------------------------------------------------------
# built-in scenarios, addressed by lemma id on the command line

LEMMAS: dict[str, dict] = {
    "coprime-facts": {"kind": "coprime_facts", "setups": "all"},
    "metacyclic": {"kind": "lemma_metacyclic", "groups": "five_groups", "q": 5},
    "regularity": {"kind": "lemma_regularity", "groups": "five_groups", "q": 5},
    "q-cube": {"kind": "lemma_q_cube", "groups": "five_groups", "q": 5},
    "normal-rank2": {"kind": "lemma_submet", "groups": "submet"},
    "frobenius-generation": {"kind": "frobenius_generation", "instance": "s3_on_c7sq"},
    "grading-criterion": {"kind": "grading_criterion", "instances": "all"},
    "decomposition-L0": {"kind": "decomposition_L0", "instances": "all"},
    "main1": {"scenarios": [{"kind": "theorem_main1_hypotheses", "setup": n, "name": f"main1:{n}"}
                            for n in I.THEOREM1_SETUPS if n in I.THEOREM1_POSITIVE]},
    "main2": {"scenarios": [{"kind": "theorem_main2_pipeline", "pipeline": n, "name": f"main2:{n}"}
                            for n in I.GROUP_PIPELINES]},
    "order16": {"kind": "order16_search"},
}


def lemma_configs(lemma_id: str) -> list[ScenarioConfig]:
    if lemma_id not in LEMMAS:
        raise ConfigError(f"unknown lemma id {lemma_id!r}; expected one of {', '.join(LEMMAS)}")
    doc = LEMMAS[lemma_id]
    if "scenarios" not in doc:
        doc = {**doc, "name": lemma_id}
    return parse_config(doc)
