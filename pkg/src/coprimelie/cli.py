"""Command-line interface.

Exit codes: 0 all checks pass, 1 some check fails, 2 abstentions only,
3 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import instances as I
from .catalog import construct_catalog_group
from .errors import AlgebraError, ConfigError, InvalidSpec, MixedExponentLayer, NotFound, TooLarge
from .figures import render_report_figures
from .graded import criterion_report, eigenspace_grading, grading_violations, omega_identities
from .groups import (
    ENUMERATION_CAP,
    FiniteGroup,
    Subgroup,
    center,
    derived_series,
    dumps_cayley,
    exponent,
    fitting_subgroup,
    gamma_infinity,
    load_cayley,
    loads_cayley,
    lower_central_series,
    nilpotency_class,
    prime_factors,
    prime_power,
    sylow_subgroup,
)
from .harness import lemma_configs, load_config, run_batch
from .lie import associated_lie_ring, dumps_lie, lie_class, load_lie, loads_lie, save_lie
from .report import FAIL, PASS, SKIP, ScenarioReport, emit_report, exit_code
from .structure import (
    FrobeniusStructure,
    check_frobenius,
    choose_Z,
    find_normal_rank2,
    frobenius_from_parts,
    is_metacyclic,
    is_supersolvable,
)

USAGE_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _group_arg(text: str) -> FiniteGroup:
    """A catalog spec, or a path to a Cayley-table file."""
    p = Path(text)
    if p.is_file():
        try:
            return load_cayley(p)
        except (ValueError, AlgebraError) as exc:
            raise ConfigError(f"cannot load {p}: {exc}") from exc
    return construct_catalog_group(text)


# ---------------------------------------------------------------------------
# subcommands; each returns a list of reports

def cmd_validate(args) -> list[ScenarioReport]:
    path = Path(args.path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    rep = ScenarioReport("validate", {"path": str(path)})
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    if first.lstrip().startswith(("{", "[")):
        docs = load_config(path)
        rep.add("config_schema", PASS, observed={"scenarios": [c.name for c in docs]})
        return [rep]
    fields = first.split()
    try:
        if len(fields) == 1:
            G = loads_cayley(text)
            rep.add("group_axioms", PASS, observed={"order": G.order, "name": G.name})
            same = dumps_cayley(G).split("\n#")[0] == text.split("\n#")[0]
            rep.check("round_trip", same, {"note": "re-serialised table differs"})
        elif len(fields) == 3:
            L = loads_lie(text)
            rep.add("lie_axioms", PASS, observed={"dim": L.dim, "field": repr(L.field)})
            rep.check("round_trip", dumps_lie(L) == text, {"note": "re-serialised constants differ"})
        else:
            raise ConfigError(f"{path}: unrecognised file format")
    except AlgebraError as exc:
        rep.add("axioms", FAIL, witnesses={"error": type(exc).__name__,
                                           "witness": getattr(exc, "witness", None) or str(exc)})
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return [rep]


def cmd_analyze_group(args) -> list[ScenarioReport]:
    G = _group_arg(args.group)
    cap = args.cap or ENUMERATION_CAP
    rep = ScenarioReport("analyze-group", {"group": G.name or args.group})
    series = lower_central_series(G)
    cls = nilpotency_class(G)
    obs = {
        "order": G.order,
        "exponent": exponent(G),
        "abelian": G.is_abelian,
        "nilpotent": cls is not None,
        "class": cls,
        "series_orders": [S.order for S in series],
        "gamma_infinity": gamma_infinity(G).order,
        "center": center(G).order,
        "derived_length": len(derived_series(G)) - 1 if derived_series(G)[-1].order == 1 else None,
        "sylow_orders": {p: sylow_subgroup(G, p).order for p in prime_factors(G.order)},
    }
    rep.add("structure", PASS, observed=obs)
    if G.order <= cap:
        rep.add("metacyclic", PASS, observed={"metacyclic": bool(is_metacyclic(G))})
        F1, F2 = fitting_subgroup(G, 1, cap), fitting_subgroup(G, 2, cap)
        rep.add("fitting", PASS, observed={"F": F1.order, "F2": F2.order})
        ss, chain = is_supersolvable(G, cap)
        rep.add("supersolvable", PASS, observed={"supersolvable": ss, "chain_orders": [S.order for S in chain]})
    else:
        for name in ("metacyclic", "fitting", "supersolvable"):
            rep.add(name, SKIP, note=f"|G| = {G.order} exceeds cap {cap}")
    return [rep]


def _indices(text: str | None):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad index list {text!r}") from exc


def cmd_check_frobenius(args) -> list[ScenarioReport]:
    G = _group_arg(args.group)
    rep = ScenarioReport("check-frobenius", {"group": G.name or args.group})
    kern, comp = _indices(args.kernel), _indices(args.complement)
    try:
        if kern is None or comp is None:
            fs = frobenius_from_parts(G)
        else:
            fs = check_frobenius(G, Subgroup(G, kern), Subgroup(G, comp))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    except AlgebraError as exc:
        rep.add("frobenius", FAIL, witnesses={"error": type(exc).__name__,
                                              "witness": getattr(exc, "witness", None) or str(exc)})
        return [rep]
    rep.add("frobenius", PASS, observed={"kernel": fs.kernel.order, "complement": fs.complement.order})
    cap = max(args.cap or ENUMERATION_CAP, G.order)
    ss, chain = is_supersolvable(G, cap)
    rep.add("supersolvable", PASS, observed={"supersolvable": ss, "chain_orders": [S.order for S in chain]})
    _kernel_checks(fs, rep)
    return [rep]


def _kernel_checks(fs: FrobeniusStructure, rep: ScenarioReport) -> None:
    Fg, emb = fs.kernel.as_group()
    meta = bool(is_metacyclic(Fg))
    rep.add("kernel_metacyclic", PASS, observed={"metacyclic": meta, "whole_metacyclic": bool(is_metacyclic(fs.whole))})
    if not meta:
        try:
            E = find_normal_rank2(Fg)
            rep.add("normal_rank2", PASS, observed={"elements_in_FH": sorted(emb[x] for x in E.elements)})
        except NotFound:
            rep.add("normal_rank2", FAIL, witnesses={"kernel": Fg.name}, note="none found")
    pp = prime_power(fs.kernel.order)
    if pp:
        try:
            Z = choose_Z(fs, pp[0])
            rep.add("choose_Z", PASS, observed={"Z": list(Z.sorted)})
        except NotFound as exc:
            rep.add("choose_Z", SKIP, note=str(exc))


def cmd_assoc_lie(args) -> list[ScenarioReport]:
    G = _group_arg(args.group)
    rep = ScenarioReport("assoc-lie", {"group": G.name or args.group})
    try:
        A = associated_lie_ring(G)
    except MixedExponentLayer as exc:
        rep.add("layer_restriction", SKIP, note=f"MixedExponentLayer: {exc}")
        return [rep]
    except AlgebraError as exc:
        rep.add("associated_lie_ring", FAIL, witnesses={"error": type(exc).__name__, "message": str(exc)})
        return [rep]
    L = A.ring
    rep.add("jacobi_antisymmetry", PASS, observed={"dim": L.dim, "field": repr(L.field), "layer_dims": A.dims})
    gc, lc = nilpotency_class(G), lie_class(L)
    rep.check("class_matches_group", gc == lc, {"group_class": gc, "lie_class": lc},
              observed={"class": lc, "series_orders": [S.order for S in A.series]})
    if args.save_lie:
        save_lie(L, args.save_lie)
    return [rep]


def cmd_grade(args) -> list[ScenarioReport]:
    if args.lie:
        if args.phi is None or args.p is None:
            raise ConfigError("--lie needs --phi and --p")
        L = load_lie(args.lie)
        try:
            phi = json.loads(args.phi)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--phi must be a JSON matrix: {exc}") from exc
        g = eigenspace_grading(L, phi, args.p)
        name = str(args.lie)
    else:
        if args.instance is None:
            raise ConfigError("give an instance name or --lie FILE")
        if args.instance not in I.GRADINGS:
            raise ConfigError(f"unknown grading instance {args.instance!r}; known: {', '.join(I.GRADINGS)}")
        g, name = I.grading(args.instance), args.instance
    rep = ScenarioReport("grade", {"instance": name})
    bad = grading_violations(g)
    rep.check("grading_invariants", not bad, {"violations": bad[:3]}, observed={"dims": g.dims, "omega": g.omega})
    rep.check("omega_identities", omega_identities(g.ring.field, g.omega, g.p), {"omega": g.omega})
    rep.extend(criterion_report(g, args.cap))
    if args.save_grading:
        Path(args.save_grading).write_text(g.to_json())
    return [rep]


def cmd_verify(args) -> list[ScenarioReport]:
    return run_batch([c.with_cap(args.cap) for c in lemma_configs(args.lemma_id)], args.jobs)


def cmd_run(args) -> list[ScenarioReport]:
    return run_batch([c.with_cap(args.cap) for c in load_config(args.config)], args.jobs)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="enumeration / scan cap")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    common.add_argument("--figures", type=Path, default=None, metavar="DIR", help="write PNG figures to DIR")
    common.add_argument("--timing", action="store_true", help="include wall times (output no longer byte-stable)")

    parser = _Parser(prog="coprimelie", description="Coprime actions, Frobenius groups and graded Lie rings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="validate a Cayley table, structure constants or config")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze-group", parents=[common], help="series, Fitting subgroups and friends")
    p.add_argument("group", help="catalog spec or Cayley-table file")
    p.set_defaults(func=cmd_analyze_group)

    p = sub.add_parser("check-frobenius", parents=[common], help="Frobenius structure of a semidirect product")
    p.add_argument("group")
    p.add_argument("--kernel", help="comma-separated kernel element indices")
    p.add_argument("--complement", help="comma-separated complement element indices")
    p.set_defaults(func=cmd_check_frobenius)

    p = sub.add_parser("assoc-lie", parents=[common], help="associated Lie ring of a nilpotent group")
    p.add_argument("group")
    p.add_argument("--save-lie", type=Path, default=None, help="write structure constants here")
    p.set_defaults(func=cmd_assoc_lie)

    p = sub.add_parser("grade", parents=[common], help="eigenspace grading and the nilpotency criterion")
    p.add_argument("instance", nargs="?", help=f"built-in instance ({', '.join(I.GRADINGS)})")
    p.add_argument("--lie", type=Path, help="structure-constant file")
    p.add_argument("--phi", help="automorphism matrix as JSON (columns are images of basis vectors)")
    p.add_argument("--p", type=int)
    p.add_argument("--save-grading", type=Path, default=None)
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("verify", parents=[common], help="run a built-in lemma scenario")
    p.add_argument("lemma_id")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", parents=[common], help="run scenarios from a JSON config")
    p.add_argument("config", type=Path)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is not None and args.cap < 1:
        parser.error("--cap must be positive")
    try:
        reports = args.func(args)
    except (ConfigError, InvalidSpec, TooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except AlgebraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    data = emit_report(reports, args.format, include_timing=args.timing)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if args.figures:
        for path in render_report_figures(reports, args.figures):
            print(f"figure: {path}", file=sys.stderr)
    return exit_code(reports)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
