import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coprimelie import instances as I
from coprimelie.errors import HypothesisFail, NoRootOfUnity, OrderMismatch, SingularSystem, ZeroResidue
from coprimelie.gf import field
from coprimelie.graded import (
    action_invariant_violations,
    check_condition_1,
    check_condition_2,
    criterion_report,
    eigenspace_grading,
    fixed_point_span_T,
    frobenius_generation_check,
    grading_from_json,
    grading_violations,
    minimal_u,
    minimal_v,
    vandermonde_recover,
    verify_CF_vanishing,
    verify_L0_decomposition,
    verify_L0_lemma,
    verify_metabelian_lemma,
)
from coprimelie.lie import lie_ring_from_brackets

import oracles

F11 = field(11)
OMEGA = 3  # order 5 in GF(11)


def diag_grading(n, brackets, ks):
    L = lie_ring_from_brackets(F11, n, brackets)
    phi = [[pow(OMEGA, ks[i], 11) if i == j else 0 for j in range(n)] for i in range(n)]
    return L, eigenspace_grading(L, phi, 5)


def coordinate_components(ks, n):
    """Eigenspaces of a diagonal map, computed without any linear algebra."""
    return [[[int(j == i) for j in range(n)] for i in range(n) if ks[i] % 5 == r] for r in range(5)]


def test_heisenberg_example():
    L, g = diag_grading(3, {(0, 1): {2: 1}}, [1, 2, 3])
    assert g.dims == [0, 1, 1, 1, 0]
    assert grading_violations(g) == []
    assert minimal_u(g, 10) == 1  # L_0 = 0, so one bracket kills L
    rep = criterion_report(g)
    assert rep.status == "pass" and rep["criterion_implies_nilpotent"].observed["class"] == 2


def test_identity_grading_puts_everything_in_L0():
    L, g = diag_grading(3, {(0, 1): {2: 1}}, [0, 0, 0])
    assert g.dims == [3, 0, 0, 0, 0]
    assert minimal_u(g, 10) == 2 and minimal_v(g, 10) == 1


def test_nonnilpotent_abstains():
    g = I.grading("nonnilpotent_gf11")
    rep = criterion_report(g, cap=6)
    assert rep.status == "abstain"
    assert rep["criterion_implies_nilpotent"].status == "skip"


def test_grading_refusals():
    L = lie_ring_from_brackets(F11, 2, {})
    with pytest.raises(OrderMismatch):
        eigenspace_grading(L, [[2, 0], [0, 1]], 5)
    with pytest.raises(NoRootOfUnity):
        eigenspace_grading(lie_ring_from_brackets(field(7), 1, {}), [[1]], 5)


@pytest.mark.parametrize("name", list(I.GRADINGS))
def test_registered_gradings(name):
    g = I.grading(name)
    assert grading_violations(g) == []
    rep = criterion_report(g)
    if rep["criterion_implies_nilpotent"].status != "skip":
        assert rep["criterion_implies_nilpotent"].status == "pass"
    assert grading_from_json(g.to_json(), g.ring).components == g.components


@pytest.mark.parametrize("name", [n for n in I.GRADINGS if n.endswith("gf11")])
def test_monotone_in_u_and_v(name):
    g = I.grading(name)
    u, v = minimal_u(g, 12), minimal_v(g, 12)
    if u is not None:
        assert not (u and check_condition_1(g, u - 1))
        assert all(check_condition_1(g, k) for k in range(u, u + 3))
    if v is not None:
        assert all(check_condition_2(g, k) for k in range(v, v + 3))


def _solvable_family(rng, n):
    lams = [rng.choice([0, 0, rng.randrange(1, 11)]) for _ in range(n - 1)]
    brackets = {(0, i): {i: lams[i - 1]} for i in range(1, n) if lams[i - 1]}
    ks = [0] + [rng.randrange(5) for _ in range(n - 1)]
    return brackets, ks


def _shift_family(rng, n):
    cs = [rng.choice([0, rng.randrange(1, 11)]) for _ in range(n - 2)]
    brackets = {(0, i): {i + 1: cs[i - 1]} for i in range(1, n - 1) if cs[i - 1]}
    k0, k1 = rng.randrange(5), rng.randrange(5)
    ks = [k0] + [(k1 + (i - 1) * k0) % 5 for i in range(1, n)]
    return brackets, ks


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 6), st.booleans())
def test_criterion_against_brute_force(seed, n, solvable):
    rng = random.Random(seed)
    brackets, ks = (_solvable_family if solvable else _shift_family)(rng, n)
    L, g = diag_grading(n, brackets, ks)
    comps = coordinate_components(ks, n)
    assert [len(c) for c in comps] == g.dims
    C = L.constants.tolist()
    cap = 2 * n + 2
    assert minimal_u(g, cap) == oracles.minimal_u(C, comps, 11, cap)
    assert minimal_v(g, cap) == oracles.minimal_v(C, comps, 11, cap)
    nilpotent = oracles.lie_class(C, 11) is not None
    rep = criterion_report(g, cap)
    if rep["criterion_implies_nilpotent"].status == "pass":
        assert nilpotent
    assert rep.status in ("pass", "abstain")


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=4))
def test_eigenspaces_match_brute_force(ks):
    n = len(ks)
    L, g = diag_grading(n, {}, ks)
    phi = g.phi
    for r in range(5):
        assert len(oracles.eigenspace(phi, pow(OMEGA, r, 11), 11)) == g.dims[r]


ALPHA = [[3, 0, 0], [0, 9, 0], [0, 0, 5]]  # omega, omega^2, omega^3


@pytest.mark.parametrize("m", [1, 2, 3])
def test_vandermonde_recovery(m):
    ys = [(1, [4, 0, 0]), (2, [0, 7, 0]), (3, [0, 0, 2])][:m]
    cert = vandermonde_recover(ys, ALPHA, OMEGA, F11)
    assert cert.exact and cert.recovered == [y for _, y in ys]
    assert cert.residues == [t for t, _ in ys]


def test_vandermonde_duplicate_residue():
    with pytest.raises(SingularSystem):
        vandermonde_recover([(1, [4, 0, 0]), (6, [1, 0, 0])], ALPHA, OMEGA, F11)


def test_vandermonde_rejects_non_eigenvector():
    with pytest.raises(ValueError):
        vandermonde_recover([(2, [4, 0, 0])], ALPHA, OMEGA, F11)


@pytest.mark.parametrize("name", list(I.LIE_ACTIONS))
def test_lie_actions(name):
    fa = I.lie_action(name)
    assert action_invariant_violations(fa) == []
    assert verify_L0_decomposition(fa).status == "pass"
    assert verify_L0_lemma(fa).status == "pass"
    assert verify_CF_vanishing(fa)
    assert verify_metabelian_lemma(fa).status in ("pass", "skip")
    for a in range(1, fa.p):
        T = fixed_point_span_T(fa, a)
        assert T <= fa.centralizer([fa.h])
    with pytest.raises(ZeroResidue):
        fixed_point_span_T(fa, 0)


def test_CF_vanishing_rejects_small_d():
    fa = I.lie_action("free2_rank4_c5sq_c2_gf11")
    with pytest.raises(HypothesisFail):
        verify_CF_vanishing(fa, 0)


def test_generation_determinant():
    inst = I.generation_instance("s3_on_c7sq")
    rep = frobenius_generation_check(inst.N, inst.KB, inst.setup)
    assert rep.status == "pass"
    assert rep["generated_equals_N"].observed["spanning_determinant"] == 4


def test_generation_hypothesis():
    with pytest.raises(HypothesisFail):
        inst = I.generation_instance("s3_on_c7sq_trivial_kernel")
        frobenius_generation_check(inst.N, inst.KB, inst.setup)
