import numpy as np
import pytest

from coprimelie.catalog import FIVE_GROUPS, ORDER16, SMALL_CATALOG, construct_catalog_group as C, power_map
from coprimelie.errors import (
    AntisymmetryFail,
    JacobiFail,
    MixedExponentLayer,
    NotAnAutomorphism,
    NotASubalgebra,
    NotCoprime,
    NotNilpotent,
)
from coprimelie.gf import Subspace, field
from coprimelie.groups import nilpotency_class, prime_power
from coprimelie.lie import (
    LieAutomorphism,
    LieRing,
    associated_lie_ring,
    check_subalgebra,
    derived_length,
    dumps_lie,
    extend_scalars,
    free_nilpotent_lie,
    induced_lie_automorphism,
    lie_class,
    lie_fixed_points,
    lie_ring_from_brackets,
    load_lie,
    loads_lie,
    save_lie,
    subalgebra_class,
)
from coprimelie.structure import automorphism_group

import oracles

F11 = field(11)


def heis(F=F11):
    return lie_ring_from_brackets(F, 3, {(0, 1): {2: 1}})


def test_bracket_examples():
    L = heis()
    assert L.bracket([1, 0, 0], [0, 1, 0]) == [0, 0, 1]
    assert L.bracket([0, 1, 0], [1, 0, 0]) == [0, 0, 10]
    assert lie_class(L) == 2
    assert lie_class(lie_ring_from_brackets(F11, 2, {})) == 1
    assert lie_class(LieRing(F11, np.zeros((0, 0, 0)))) == 0


def test_antisymmetry_violation():
    Cst = np.zeros((2, 2, 2), dtype=int)
    Cst[0, 1, 1] = 1
    with pytest.raises(AntisymmetryFail):
        LieRing(F11, Cst)


def test_jacobi_violation():
    # [e0,e1]=e2, [e1,e2]=e0, [e0,e2]=e0 breaks Jacobi over GF(11)
    with pytest.raises(JacobiFail):
        lie_ring_from_brackets(F11, 3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})


def test_not_nilpotent():
    L = lie_ring_from_brackets(F11, 2, {(0, 1): {1: 1}})
    with pytest.raises(NotNilpotent):
        lie_class(L)
    assert derived_length(L) == 2


def test_subalgebras():
    L = heis()
    S = Subspace.span(F11, 3, [[0, 1, 0], [0, 0, 1]])
    assert subalgebra_class(L, S) == 1
    with pytest.raises(NotASubalgebra):
        check_subalgebra(L, Subspace.span(F11, 3, [[1, 0, 0], [0, 1, 0]]))


@pytest.mark.parametrize("spec,dims", [
    ("dihedral(4)", [2, 1]), ("quaternion(8)", [2, 1]), ("extraspecial_exponent_q(5)", [2, 1]),
    ("elementary_abelian(3, 2)", [2]), ("cyclic(1)", []), ("dihedral(8)", [2, 1, 1]),
])
def test_associated_ring_examples(spec, dims):
    A = associated_lie_ring(C(spec))
    assert A.dims == dims


def test_associated_ring_refusals():
    with pytest.raises(MixedExponentLayer):
        associated_lie_ring(C("cyclic(4)"))
    with pytest.raises(NotNilpotent):
        associated_lie_ring(C("symmetric(3)"))


def _layerable(spec):
    G = C(spec)
    if G.order == 1 or G.order > 256 or prime_power(G.order) is None:
        return False
    try:
        associated_lie_ring(G)
        return True
    except MixedExponentLayer:
        return False


QGROUPS = sorted({s for s in SMALL_CATALOG + FIVE_GROUPS + ORDER16 if _layerable(s)})


@pytest.mark.parametrize("spec", QGROUPS)
def test_associated_class_equals_group_class(spec):
    G = C(spec)
    A = associated_lie_ring(G)
    q = A.ring.field.q
    assert oracles.lie_class(A.ring.constants.tolist(), q) == nilpotency_class(G)
    assert lie_class(A.ring) == nilpotency_class(G)
    assert sum(A.dims) == len(A.weights)


def test_induced_automorphisms():
    A = associated_lie_ring(C("cyclic(5)"))
    assert induced_lie_automorphism(A, list(range(5))).matrix == [[1]]
    assert induced_lie_automorphism(A, power_map(C("cyclic(5)"), -1)).matrix == [[4]]


@pytest.mark.parametrize("spec", ["dihedral(4)", "quaternion(8)", "extraspecial_exponent_q(3)"])
def test_induced_is_a_homomorphism(spec):
    G = C(spec)
    A = associated_lie_ring(G)
    auts = automorphism_group(G)[:12]
    for a in auts:
        for b in auts[:4]:
            ab = [int(a.perm[int(b.perm[x])]) for x in range(G.order)]
            lhs = induced_lie_automorphism(A, ab)
            rhs = induced_lie_automorphism(A, a.perm) @ induced_lie_automorphism(A, b.perm)
            assert lhs == rhs


def test_lie_automorphism_validation():
    L = heis()
    assert LieAutomorphism(L, [[2, 0, 0], [0, 3, 0], [0, 0, 6]]).order() == 10
    with pytest.raises(NotAnAutomorphism):
        LieAutomorphism(L, [[2, 0, 0], [0, 3, 0], [0, 0, 1]])
    with pytest.raises(NotAnAutomorphism):
        LieAutomorphism(L, [[0, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_lie_fixed_points():
    L = heis()
    phi = LieAutomorphism(L, [[1, 0, 0], [0, 10, 0], [0, 0, 10]])
    S = lie_fixed_points(L, [phi])
    assert S.dim == 1 and (1, 0, 0) in S


@pytest.mark.parametrize("q,p,d,omega", [(11, 5, 1, 3), (2, 5, 4, 8), (7, 3, 1, 2), (2, 3, 2, 2)])
def test_extend_scalars(q, p, d, omega):
    L = heis(field(q))
    Lt, w = extend_scalars(L, p)
    assert Lt.field.d == d and w == omega
    assert np.array_equal(Lt.constants, L.constants)


def test_extend_scalars_same_characteristic():
    with pytest.raises(NotCoprime):
        extend_scalars(heis(), 11)


def test_file_round_trip(tmp_path):
    L = free_nilpotent_lie(11, 2, 3).ring
    text = dumps_lie(L)
    assert loads_lie(text).constants.tolist() == L.constants.tolist()
    save_lie(L, tmp_path / "l.lie")
    assert dumps_lie(load_lie(tmp_path / "l.lie")) == text


@pytest.mark.parametrize("q,k,c", [(11, 2, 3), (11, 3, 2), (11, 2, 4), (7, 3, 3), (2, 2, 5), (5, 4, 2)])
def test_free_nilpotent_dimensions(q, k, c):
    fn = free_nilpotent_lie(q, k, c)
    for deg in range(1, c + 1):
        assert fn.degrees.count(deg) == oracles.witt_dimension(k, deg)
    assert lie_class(fn.ring) == c


def test_free_nilpotent_diagonal_matches_induced():
    fn = free_nilpotent_lie(11, 2, 3)
    D = fn.diagonal(field(11), [3, 9])
    assert fn.induced([[3, 0], [0, 9]]).matrix == D
    assert [D[i][i] for i in range(5)] == [3, 9, 5, 4, 1]
