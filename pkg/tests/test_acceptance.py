"""Acceptance criteria, one check each.

Run under pytest (one test per criterion, summary lines printed at the end
of the session) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import random
import sys
import tempfile
import time
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from coprimelie import instances as I  # noqa: E402
from coprimelie.actions import verify_coprime_facts  # noqa: E402
from coprimelie.catalog import FIVE_GROUPS, ORDER16, SMALL_CATALOG, _construct, construct_catalog_group as C  # noqa: E402
from coprimelie.cli import main as cli_main  # noqa: E402
from coprimelie.errors import FixedPointWitness, MixedExponentLayer, NotFound, SingularSystem  # noqa: E402
from coprimelie.gf import Subspace, field  # noqa: E402
from coprimelie.graded import (  # noqa: E402
    check_condition_1,
    criterion_report,
    eigenspace_grading,
    frobenius_generation_check,
    minimal_u,
    minimal_v,
    omega_identities,
    vandermonde_recover,
    verify_L0_decomposition,
)
from coprimelie.groups import (  # noqa: E402
    dumps_cayley,
    exponent,
    gamma_infinity,
    is_elementary_abelian,
    is_nilpotent,
    loads_cayley,
    nilpotency_class,
    prime_power,
    subgroup_generated,
)
from coprimelie.lie import associated_lie_ring, dumps_lie, lie_ring_from_brackets, loads_lie  # noqa: E402
from coprimelie.structure import (  # noqa: E402
    check_frobenius,
    find_exponent_q_cube,
    find_normal_rank2,
    frobenius_from_parts,
    is_metacyclic,
    is_supersolvable,
)

CRITERIA: dict[int, tuple[str, callable]] = {}
RESULTS: dict[int, tuple[bool, str]] = {}


def criterion(n: int, title: str):
    def wrap(fn):
        CRITERIA[n] = (title, fn)
        return fn
    return wrap


def _specs(max_order: int, pool) -> list[str]:
    return sorted({s for s in pool if C(s).order <= max_order}, key=lambda s: (C(s).order, s))


CATALOG = SMALL_CATALOG + FIVE_GROUPS + ORDER16
FIVE_SMALL = _specs(5 ** 4, FIVE_GROUPS)


def _agemo_oracle(G, q):
    return oracles.subgroup_closure(G.rows, {G.power(x, q) for x in range(G.order)})


def _omega1_oracle(G, q):
    return oracles.subgroup_closure(G.rows, [x for x in range(G.order) if G.power(x, q) == 0])


# ---------------------------------------------------------------------------

@criterion(1, "group axioms and series vs brute-force oracle, under 60 s")
def c1():
    _construct.cache_clear()  # time construction too, not just the series
    t0 = time.perf_counter()
    specs = _specs(128, CATALOG)
    for s in specs:
        G = C(s)
        cls, _ = oracles.nilpotency_class(G.rows)
        assert nilpotency_class(G) == cls, f"{s}: {nilpotency_class(G)} != {cls}"
    named = {"dihedral(4)": 2, "quaternion(8)": 2, "extraspecial_exponent_q(5)": 2, "symmetric(3)": None}
    for s, cls in named.items():
        assert nilpotency_class(C(s)) == cls, s
    S3 = C("symmetric(3)")
    A3 = subgroup_generated(S3, [S3.index_of((1, 2, 0))])
    assert gamma_infinity(S3) == A3
    dt = time.perf_counter() - t0
    assert dt < 60, f"{dt:.1f} s"
    return f"{len(specs)} groups in {dt:.1f} s"


@criterion(2, "coprime action facts (i)-(v) on generated setups")
def c2():
    names = list(I.COPRIME_SETUPS)
    assert len(names) >= 20
    v_cases = 0
    for n in names:
        s = I.coprime_setup(n)
        rep = verify_coprime_facts(s)
        for key in ("i_centralizer_times_commutator", "ii_commutator_stable",
                    "iii_invariant_sylow", "iv_quotient_centralizers"):
            assert rep[key].status == "pass", f"{n}: {key}"
        A = s.actor
        applies = is_nilpotent(s.target) and A.is_abelian and max(A.element_orders) < A.order
        want = "pass" if applies else "skip"
        assert rep["v_product_of_centralizers"].status == want, f"{n}: (v)"
        v_cases += applies
    return f"{len(names)} setups, (v) applicable on {v_cases}"


@criterion(3, "metacyclic: definition agrees with [G:G^5] <= 25")
def c3():
    for s in FIVE_SMALL:
        G = C(s)
        index = G.order // len(_agemo_oracle(G, 5))
        assert bool(is_metacyclic(G)) == (index <= 25), s
    return f"{len(FIVE_SMALL)} groups"


@criterion(4, "regularity: |G/G^5| = |Omega_1(G)|")
def c4():
    for s in FIVE_SMALL:
        G = C(s)
        assert G.order // len(_agemo_oracle(G, 5)) == len(_omega1_oracle(G, 5)), s
    return f"{len(FIVE_SMALL)} groups"


@criterion(5, "exponent-5 subgroups of order 125")
def c5():
    hits = 0
    for s in FIVE_SMALL:
        G = C(s)
        if G.order < 125 or is_metacyclic(G):
            continue
        S = find_exponent_q_cube(G, 5)
        assert oracles.subgroup_closure(G.rows, S.gens) == S.elements, s
        assert len(S.elements) == 125 and exponent(S.as_group()[0]) == 5, s
        hits += 1
    for s in ("cyclic(125)", "abelian(25, 5)"):
        with pytest.raises(NotFound):
            find_exponent_q_cube(C(s), 5)
    assert hits > 0
    return f"{hits} witnesses, 2 refusals"


@criterion(6, "normal elementary abelian 5^2 subgroups")
def c6():
    kernels = [C("extraspecial_exponent_q(5)"), C("elementary_abelian(5, 2)"),
               frobenius_from_parts(C(I.frobenius_spec(5, 2))).kernel.as_group()[0]]
    for F in kernels:
        S = find_normal_rank2(F)
        assert S.order == 25 and is_elementary_abelian(S, 5)
        assert all(F.conj(x, g) in S.elements for x in S.elements for g in range(F.order))
    return "extraspecial(5), C5xC5, Frobenius kernel"


@criterion(7, "Frobenius validation")
def c7():
    G = C(I.frobenius_spec(5, 4))
    frobenius_from_parts(G)
    assert is_supersolvable(G)[0]
    C6 = C("cyclic(6)")
    with pytest.raises(FixedPointWitness):
        check_frobenius(C6, subgroup_generated(C6, [2]), subgroup_generated(C6, [3]))
    return "(C5xC5):C4 accepted, C6 rejected"


def _jacobi_antisymmetry_oracle(Cst, q) -> bool:
    n = len(Cst)
    for i in range(n):
        for j in range(n):
            if any((Cst[i][j][k] + Cst[j][i][k]) % q for k in range(n)):
                return False
    e = [[int(a == b) for b in range(n)] for a in range(n)]
    for i, j, k in combinations(range(n), 3):
        t1 = oracles.bracket(Cst, oracles.bracket(Cst, e[i], e[j], q), e[k], q)
        t2 = oracles.bracket(Cst, oracles.bracket(Cst, e[j], e[k], q), e[i], q)
        t3 = oracles.bracket(Cst, oracles.bracket(Cst, e[k], e[i], q), e[j], q)
        if any((a + b + c) % q for a, b, c in zip(t1, t2, t3)):
            return False
    return True


@criterion(8, "associated Lie ring class equals group class")
def c8():
    count = 0
    for s in _specs(64, CATALOG):
        G = C(s)
        if G.order == 1 or prime_power(G.order) is None or not is_nilpotent(G):
            continue
        try:
            A = associated_lie_ring(G)
        except MixedExponentLayer:
            continue
        q = A.ring.field.q
        Cst = A.ring.constants.tolist()
        assert _jacobi_antisymmetry_oracle(Cst, q), s
        assert oracles.lie_class(Cst, q) == nilpotency_class(G), s
        count += 1
    return f"{count} groups"


@criterion(9, "eigenspace gradings over GF(11) and GF(16)")
def c9():
    fields = set()
    for name in I.GRADINGS:
        g = I.grading(name)
        L, F = g.ring, g.ring.field
        fields.add((F.q, F.d))
        total = Subspace.span(F, L.dim, [b for c in g.components for b in c.basis])
        assert sum(g.dims) == L.dim == total.dim, name
        for i in range(g.p):
            for x in g[i].basis:
                for j in range(g.p):
                    for y in g[j].basis:
                        assert tuple(L.bracket(x, y)) in g[i + j], name
        assert omega_identities(F, g.omega, g.p)
    assert len(I.GRADINGS) >= 10 and {(11, 1), (2, 4)} <= fields
    return f"{len(I.GRADINGS)} instances"


@criterion(10, "Vandermonde recovery over GF(11), omega = 3")
def c10():
    F = field(11)
    alpha = [[3, 0, 0], [0, 9, 0], [0, 0, 5]]
    comps = [(1, [4, 0, 0]), (2, [0, 7, 0]), (3, [0, 0, 2])]
    for m in (1, 2, 3):
        cert = vandermonde_recover(comps[:m], alpha, 3, F)
        assert cert.exact and cert.recovered == [y for _, y in comps[:m]]
    with pytest.raises(SingularSystem):
        vandermonde_recover([(1, [4, 0, 0]), (6, [1, 0, 0])], alpha, 3, F)
    return "m = 1, 2, 3 exact"


def _random_grading(rng, n):
    if rng.random() < 0.5:
        lams = [rng.choice([0, rng.randrange(1, 11)]) for _ in range(n - 1)]
        br = {(0, i): {i: lams[i - 1]} for i in range(1, n) if lams[i - 1]}
        ks = [0] + [rng.randrange(5) for _ in range(n - 1)]
    else:
        cs = [rng.choice([0, rng.randrange(1, 11)]) for _ in range(n - 2)]
        br = {(0, i): {i + 1: cs[i - 1]} for i in range(1, n - 1) if cs[i - 1]}
        k0, k1 = rng.randrange(5), rng.randrange(5)
        ks = [k0] + [(k1 + (i - 1) * k0) % 5 for i in range(1, n)]
    L = lie_ring_from_brackets(field(11), n, br)
    phi = [[pow(3, ks[i], 11) if i == j else 0 for j in range(n)] for i in range(n)]
    comps = [[[int(j == i) for j in range(n)] for i in range(n) if ks[i] % 5 == r] for r in range(5)]
    return eigenspace_grading(L, phi, 5), comps


@criterion(11, "nilpotency criterion vs iterated-bracket oracle")
def c11():
    checked = 0
    for name in I.GRADINGS:
        g = I.grading(name)
        q, Cst = g.ring.field.q, g.ring.constants
        assert int(Cst.max(initial=0)) < q  # prime-field constants, so the oracle applies
        rep = criterion_report(g)
        if minimal_u(g, 2 * g.ring.dim + 2) is not None and minimal_v(g, 2 * g.ring.dim + 2) is not None:
            assert oracles.lie_class(Cst.tolist(), q) is not None, name
            assert rep["criterion_implies_nilpotent"].status == "pass", name
            checked += 1
    g = I.grading("nonnilpotent_gf11")
    cap = 2 * g.ring.dim + 2
    assert not any(check_condition_1(g, u) for u in range(cap + 1))
    rng = random.Random(20240611)
    for _ in range(300):
        g, comps = _random_grading(rng, rng.randint(2, 6))
        Cst, cap = g.ring.constants.tolist(), 2 * g.ring.dim + 2
        u, v = minimal_u(g, cap), minimal_v(g, cap)
        assert u == oracles.minimal_u(Cst, comps, 11, cap)
        assert v == oracles.minimal_v(Cst, comps, 11, cap)
        if u is not None and v is not None:
            assert oracles.lie_class(Cst, 11) is not None
    return f"{checked} named instances, 300 random"


@criterion(12, "generation lemma on S3 acting on C7^2")
def c12():
    inst = I.generation_instance("s3_on_c7sq")
    rep = frobenius_generation_check(inst.N, inst.KB, inst.setup)
    assert rep.status == "pass"
    det = rep["generated_equals_N"].observed["spanning_determinant"]
    assert det == 4, det
    return "determinant 4 mod 7"


@criterion(13, "L_0 = C_L(F) + sum V_f on every pipeline instance")
def c13():
    names = []
    for n in I.LIE_ACTIONS:
        assert verify_L0_decomposition(I.lie_action(n)).status == "pass", n
        names.append(n)
    for n in I.GROUP_PIPELINES:
        _, fa = I.pipeline_lie_action(I.group_pipeline(n))
        assert verify_L0_decomposition(fa).status == "pass", n
        names.append(n)
    return f"{len(names)} instances"


@criterion(14, "byte-identical round trips and reports")
def c14():
    for s in _specs(128, CATALOG):
        text = dumps_cayley(C(s))
        assert dumps_cayley(loads_cayley(text)) == text, s
    for name in I.GRADINGS:
        text = dumps_lie(I.grading(name).ring)
        assert dumps_lie(loads_lie(text)) == text, name
    with tempfile.TemporaryDirectory() as d:
        cfg = Path(d) / "c.json"
        cfg.write_text(json.dumps({"scenarios": [
            {"kind": "lemma_q_cube", "groups": "five_groups", "q": 5},
            {"kind": "grading_criterion", "instances": ["heisenberg_gf16", "free_class3_rank2_gf11"]},
        ]}))
        outs = []
        for k in range(2):
            out = Path(d) / f"r{k}.json"
            assert cli_main(["run", str(cfg), "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
    return "Cayley, structure constants, reports"


# ---------------------------------------------------------------------------

def evaluate(n: int) -> tuple[bool, str]:
    title, fn = CRITERIA[n]
    try:
        detail = fn() or ""
        RESULTS[n] = (True, detail)
    except Exception as exc:  # a failing criterion is reported, not hidden
        RESULTS[n] = (False, f"{type(exc).__name__}: {exc}")
    return RESULTS[n]


def summary_lines() -> list[str]:
    out = []
    for n in sorted(CRITERIA):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            out.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {CRITERIA[n][0]}  [{detail}]")
    return out


@pytest.mark.parametrize("n", range(1, 15))
def test_criterion(n):
    ok, detail = evaluate(n)
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        evaluate(n)
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
