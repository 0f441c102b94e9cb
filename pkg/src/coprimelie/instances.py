"""Built-in instances used by the harness, the tests and the CLI.

Builders are deterministic and cached.  Registries map a short name to a
zero-argument builder so configs can refer to instances by name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .actions import ActionSetup
from .catalog import construct_catalog_group, matrix_map, power_map
from .errors import ConfigError
from .gf import field, mat_mul
from .graded import FrobeniusLieAction, Grading, eigenspace_grading, frobenius_lie_action
from .groups import FiniteGroup
from .lie import (
    AssociatedLie,
    LieRing,
    associated_lie_ring,
    free_nilpotent_lie,
    induced_lie_automorphism,
    lie_ring_from_brackets,
)
from .structure import FrobeniusStructure, _extend_partial, frobenius_from_parts


def G_(spec: str) -> FiniteGroup:
    return construct_catalog_group(spec)


def label_map(G: FiniteGroup, fn: Callable) -> list[int]:
    """Permutation of G induced by a function on labels."""
    return [G.index_of(fn(lab)) for lab in G.labels]


def heisenberg_gl2_perm(G: FiniteGroup, q: int, A: Sequence[Sequence[int]]) -> list[int]:
    """Automorphism of UT(3, q) lifting ``A`` in GL(2, q), q odd.

    ``(a, b) -> A (a, b)^T`` and ``c -> det(A)(c - ab/2) + a'b'/2``; in the
    coordinates ``c - ab/2`` the commutator form is symplectic, so this is
    the standard lift.
    """
    half = pow(2, -1, q)
    dt = (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % q

    def fn(lab):
        a, b, c = lab
        a2 = (A[0][0] * a + A[0][1] * b) % q
        b2 = (A[1][0] * a + A[1][1] * b) % q
        c2 = (dt * (c - a * b * half) + a2 * b2 * half) % q
        return (a2, b2, c2)

    return label_map(G, fn)


def _setup(actor: str, target: str, images: Callable[[FiniteGroup, FiniteGroup], dict]) -> ActionSetup:
    A, G = G_(actor), G_(target)
    return ActionSetup.from_generators(A, G, images(A, G))


def _by_label(A: FiniteGroup, table: dict) -> dict:
    return {A.index_of(lab): perm for lab, perm in table.items()}


# ---------------------------------------------------------------------------
# coprime action setups

EA = "elementary_abelian"


def _companion_order(q: int, M, target: int) -> bool:
    F = field(q)
    P, k = M, 1
    I = [[int(i == j) for j in range(len(M))] for i in range(len(M))]
    while P != I:
        P = mat_mul(F, P, M)
        k += 1
    return k == target


def _singer_c13():
    # first companion matrix over GF(3) whose square has order 13
    for a in range(1, 3):
        for b in range(3):
            for c in range(3):
                M = [[0, 1, 0], [0, 0, 1], [a, b, c]]
                M2 = mat_mul(field(3), M, M)
                if _companion_order(3, M2, 13):
                    return M2
    raise AssertionError("no element of order 13 found")  # pragma: no cover


def _semidirect_negation(G: FiniteGroup, m: int, k: int = -1) -> list[int]:
    return label_map(G, lambda lab: ((k * lab[0]) % m, lab[1]))


COPRIME_SETUPS: dict[str, Callable[[], ActionSetup]] = {
    "c5_by_c2_inversion": lambda: _setup("cyclic(2)", "cyclic(5)", lambda A, G: {1: power_map(G, -1)}),
    "c5sq_by_v4_signs": lambda: _setup(f"{EA}(2, 2)", f"{EA}(5, 2)", lambda A, G: _by_label(A, {
        (1, 0): matrix_map(G, [[-1, 0], [0, 1]]), (0, 1): matrix_map(G, [[1, 0], [0, -1]])})),
    "c7_by_c3": lambda: _setup("cyclic(3)", "cyclic(7)", lambda A, G: {1: power_map(G, 2)}),
    "c7_by_c2": lambda: _setup("cyclic(2)", "cyclic(7)", lambda A, G: {1: power_map(G, -1)}),
    "c7_by_c6": lambda: _setup("cyclic(6)", "cyclic(7)", lambda A, G: {1: power_map(G, 3)}),
    "c7sq_by_s3": lambda: _setup("symmetric(3)", f"{EA}(7, 2)", lambda A, G: _by_label(A, {
        (1, 2, 0): matrix_map(G, [[0, -1], [1, -1]]), (1, 0, 2): matrix_map(G, [[0, 1], [1, 0]])})),
    "c3sq_by_c2": lambda: _setup("cyclic(2)", f"{EA}(3, 2)", lambda A, G: {1: matrix_map(G, [[-1, 0], [0, -1]])}),
    "c3sq_by_c4": lambda: _setup("cyclic(4)", f"{EA}(3, 2)", lambda A, G: {1: matrix_map(G, [[0, -1], [1, 0]])}),
    "c3sq_by_q8": lambda: _setup("quaternion(8)", f"{EA}(3, 2)", lambda A, G: _by_label(A, {
        (1, 0): matrix_map(G, [[0, -1], [1, 0]]), (0, 1): matrix_map(G, [[1, 1], [1, -1]])})),
    "c2cube_by_c7": lambda: _setup("cyclic(7)", f"{EA}(2, 3)", lambda A, G: {
        1: matrix_map(G, [[0, 1, 0], [0, 0, 1], [1, 1, 0]])}),
    "c2four_by_c15": lambda: _setup("cyclic(15)", f"{EA}(2, 4)", lambda A, G: {
        1: matrix_map(G, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]])}),
    "c2four_by_c5": lambda: _setup("cyclic(5)", f"{EA}(2, 4)", lambda A, G: {
        1: matrix_map(G, mat_mul(field(2), [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]],
                                 mat_mul(field(2), [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]],
                                         [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]])))}),
    "c2sq_by_c3": lambda: _setup("cyclic(3)", f"{EA}(2, 2)", lambda A, G: {1: matrix_map(G, [[0, 1], [1, 1]])}),
    "c3cube_by_c13": lambda: _setup("cyclic(13)", f"{EA}(3, 3)", lambda A, G: {1: matrix_map(G, _singer_c13())}),
    "c3cube_by_c2cube_signs": lambda: _setup(f"{EA}(2, 3)", f"{EA}(3, 3)", lambda A, G: _by_label(A, {
        (1, 0, 0): matrix_map(G, [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        (0, 1, 0): matrix_map(G, [[1, 0, 0], [0, -1, 0], [0, 0, 1]]),
        (0, 0, 1): matrix_map(G, [[1, 0, 0], [0, 1, 0], [0, 0, -1]])})),
    "c35_by_v4": lambda: _setup(f"{EA}(2, 2)", "cyclic(35)", lambda A, G: _by_label(A, {
        (1, 0): power_map(G, 6), (0, 1): power_map(G, 29)})),
    "q8_by_c3": lambda: _setup("cyclic(3)", "quaternion(8)", lambda A, G: {1: _q8_order3(G)}),
    "he3_by_c2": lambda: _setup("cyclic(2)", "extraspecial_exponent_q(3)", lambda A, G: {
        1: heisenberg_gl2_perm(G, 3, [[-1, 0], [0, -1]])}),
    "he3_by_v4_torus": lambda: _setup(f"{EA}(2, 2)", "extraspecial_exponent_q(3)", lambda A, G: _by_label(A, {
        (1, 0): heisenberg_gl2_perm(G, 3, [[-1, 0], [0, 1]]),
        (0, 1): heisenberg_gl2_perm(G, 3, [[1, 0], [0, -1]])})),
    "he3_by_q8": lambda: _setup("quaternion(8)", "extraspecial_exponent_q(3)", lambda A, G: _by_label(A, {
        (1, 0): heisenberg_gl2_perm(G, 3, [[0, -1], [1, 0]]),
        (0, 1): heisenberg_gl2_perm(G, 3, [[1, 1], [1, -1]])})),
    "he5_by_c2": lambda: _setup("cyclic(2)", "extraspecial_exponent_q(5)", lambda A, G: {
        1: heisenberg_gl2_perm(G, 5, [[-1, 0], [0, -1]])}),
    "he5_by_c4_torus": lambda: _setup("cyclic(4)", "extraspecial_exponent_q(5)", lambda A, G: {
        1: heisenberg_gl2_perm(G, 5, [[2, 0], [0, 2]])}),
    "he5_by_v4_torus": lambda: _setup(f"{EA}(2, 2)", "extraspecial_exponent_q(5)", lambda A, G: _by_label(A, {
        (1, 0): heisenberg_gl2_perm(G, 5, [[-1, 0], [0, 1]]),
        (0, 1): heisenberg_gl2_perm(G, 5, [[1, 0], [0, -1]])})),
    "he5_by_c3": lambda: _setup("cyclic(3)", "extraspecial_exponent_q(5)", lambda A, G: {
        1: heisenberg_gl2_perm(G, 5, [[0, -1], [1, -1]])}),
    "he7_by_c3_scalar": lambda: _setup("cyclic(3)", "extraspecial_exponent_q(7)", lambda A, G: {
        1: heisenberg_gl2_perm(G, 7, [[2, 0], [0, 2]])}),
    "he7_by_c3sq_torus": lambda: _setup(f"{EA}(3, 2)", "extraspecial_exponent_q(7)", lambda A, G: _by_label(A, {
        (1, 0): heisenberg_gl2_perm(G, 7, [[2, 0], [0, 1]]),
        (0, 1): heisenberg_gl2_perm(G, 7, [[1, 0], [0, 2]])})),
    "c7_c3_by_c2": lambda: _setup("cyclic(2)", "semidirect_product(cyclic(7), cyclic(3), power(2))",
                                  lambda A, G: {1: _semidirect_negation(G, 7)}),
    "c11_c5_by_c2": lambda: _setup("cyclic(2)", "semidirect_product(cyclic(11), cyclic(5), power(3))",
                                   lambda A, G: {1: _semidirect_negation(G, 11)}),
    "c13_c3_by_c4": lambda: _setup("cyclic(4)", "semidirect_product(cyclic(13), cyclic(3), power(3))",
                                   lambda A, G: {1: _semidirect_negation(G, 13, 5)}),
    "s3_by_c5_trivial": lambda: _setup("cyclic(5)", "symmetric(3)", lambda A, G: {1: list(range(G.order))}),
}


def _q8_order3(G: FiniteGroup) -> list[int]:
    x, y = G.index_of((1, 0)), G.index_of((0, 1))
    img = _extend_partial(G, [x, y], [y, G.mul(x, y)])
    if img is None:  # pragma: no cover
        raise AssertionError("x -> y -> xy does not extend")
    return [img[g] for g in range(G.order)]


@lru_cache(maxsize=None)
def coprime_setup(name: str) -> ActionSetup:
    try:
        return COPRIME_SETUPS[name]()
    except KeyError:
        raise ConfigError(f"unknown coprime setup {name!r}") from None


# ---------------------------------------------------------------------------
# gradings

def _gf11_heisenberg() -> LieRing:
    return lie_ring_from_brackets(field(11), 3, {(0, 1): {2: 1}}, ["x", "y", "z"])


def _diag(vals):
    n = len(vals)
    return [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _g16():
    F = field(2, 4)
    return F, F.root_of_unity(5)


def _free_diag(q: int, k: int, c: int, eigs, F=None) -> tuple[LieRing, list[list[int]]]:
    fn = free_nilpotent_lie(q, k, c)
    if F is None:
        return fn.ring, fn.diagonal(fn.ring.field, eigs)
    return LieRing(F, fn.ring.constants, fn.ring.labels, fn.ring.weights, check=False), fn.diagonal(F, eigs)


def _grading_abelian_gf11():
    L = lie_ring_from_brackets(field(11), 2, {})
    return eigenspace_grading(L, _diag([3, 9]), 5)


def _grading_heis_gf11():
    return eigenspace_grading(_gf11_heisenberg(), _diag([3, 9, 5]), 5)


def _grading_heis_identity():
    return eigenspace_grading(_gf11_heisenberg(), _diag([1, 1, 1]), 5)


def _grading_free3_gf11():
    L, M = _free_diag(11, 2, 3, [3, 9])
    return eigenspace_grading(L, M, 5)


def _grading_free2_k3_gf11():
    L, M = _free_diag(11, 3, 2, [3, 3, 9])
    return eigenspace_grading(L, M, 5)


def _grading_free2_k4_gf11():
    L, M = _free_diag(11, 4, 2, [3, 9, 4, 5])
    return eigenspace_grading(L, M, 5)


def _grading_free4_gf11():
    L, M = _free_diag(11, 2, 4, [3, 4])
    return eigenspace_grading(L, M, 5)


def _grading_nonnilpotent_gf11():
    # [e1, e0] = e1 with e0 in L_0
    L = lie_ring_from_brackets(field(11), 2, {(0, 1): {1: -1}}, ["e0", "e1"])
    return eigenspace_grading(L, _diag([1, 3]), 5)


def _grading_sl2_gf11():
    # basis e, f, h with [e, f] = h, [h, e] = 2e, [h, f] = -2f
    L = lie_ring_from_brackets(field(11), 3, {(0, 1): {2: 1}, (0, 2): {0: -2}, (1, 2): {1: 2}}, ["e", "f", "h"])
    return eigenspace_grading(L, _diag([3, 4, 1]), 5)


def _grading_abelian3_identity():
    L = lie_ring_from_brackets(field(11), 3, {})
    return eigenspace_grading(L, _diag([1, 1, 1]), 5)


def _grading_heis_gf16():
    F, w = _g16()
    L = lie_ring_from_brackets(F, 3, {(0, 1): {2: 1}}, ["x", "y", "z"])
    return eigenspace_grading(L, _diag([w, F.pow(w, 2), F.pow(w, 3)]), 5)


def _grading_abelian_gf16():
    F, w = _g16()
    L = lie_ring_from_brackets(F, 2, {})
    return eigenspace_grading(L, _diag([w, F.pow(w, 4)]), 5)


def _grading_free3_gf16():
    F, w = _g16()
    L, M = _free_diag(2, 2, 3, [w, F.pow(w, 2)], F)
    return eigenspace_grading(L, M, 5)


def _grading_nonnilpotent_gf16():
    F, w = _g16()
    L = lie_ring_from_brackets(F, 2, {(0, 1): {1: 1}}, ["e0", "e1"])
    return eigenspace_grading(L, _diag([1, w]), 5)


GRADINGS: dict[str, Callable[[], Grading]] = {
    "abelian2_gf11": _grading_abelian_gf11,
    "heisenberg_gf11": _grading_heis_gf11,
    "heisenberg_identity_gf11": _grading_heis_identity,
    "free_class3_rank2_gf11": _grading_free3_gf11,
    "free_class2_rank3_gf11": _grading_free2_k3_gf11,
    "free_class2_rank4_gf11": _grading_free2_k4_gf11,
    "free_class4_rank2_gf11": _grading_free4_gf11,
    "nonnilpotent_gf11": _grading_nonnilpotent_gf11,
    "sl2_gf11": _grading_sl2_gf11,
    "abelian3_identity_gf11": _grading_abelian3_identity,
    "heisenberg_gf16": _grading_heis_gf16,
    "abelian2_gf16": _grading_abelian_gf16,
    "free_class3_rank2_gf16": _grading_free3_gf16,
    "nonnilpotent_gf16": _grading_nonnilpotent_gf16,
}


@lru_cache(maxsize=None)
def grading(name: str) -> Grading:
    try:
        return GRADINGS[name]()
    except KeyError:
        raise ConfigError(f"unknown grading instance {name!r}") from None


# ---------------------------------------------------------------------------
# Frobenius groups FH with F = C_p x C_p and scalar complement action

def frobenius_spec(p: int, m: int) -> str:
    """``(C_p x C_p) x| C_m`` with the generator acting as the scalar of
    order m (inversion when m = 2)."""
    r = _scalar_of_order(p, m)
    act = "inversion()" if m == 2 else f"matrix([[{r}, 0], [0, {r}]])"
    return f"semidirect_product(elementary_abelian({p}, 2), cyclic({m}), {act})"


def _scalar_of_order(p: int, m: int) -> int:
    for r in range(2, p):
        k, x = 1, r
        while x != 1:
            x = x * r % p
            k += 1
        if k == m:
            return r
    raise ConfigError(f"no element of order {m} mod {p}")


def frobenius_group(p: int, m: int) -> FrobeniusStructure:
    return frobenius_from_parts(G_(frobenius_spec(p, m)))


def monomial_matrices(fs: FrobeniusStructure, q: int, chars: Sequence[tuple[int, int]]) -> list[list[list[int]]]:
    """Induced monomial representation of FH over GF(q), one block per
    character chi of F = C_p^2 (``f -> omega^{chi . f}``).

    Element ``(f, j) = f h^j`` acts by ``D(f) P^j``, where P cycles the block
    basis and ``D(f)`` has entries ``chi(c^i f)`` with c the inverse of the
    scalar by which h acts.
    """
    G = fs.whole
    m = fs.complement.order
    p = _kernel_prime(fs)
    F = field(q)
    omega = F.root_of_unity(p)
    c = pow(_complement_scalar(fs, p), -1, p)
    n = m * len(chars)
    mats = []
    for (x1, x2), j in G.labels:
        M = [[0] * n for _ in range(n)]
        for b, (a1, a2) in enumerate(chars):
            for i in range(m):
                # D(f) P^j sends basis vector (b, i) to a multiple of (b, i + j)
                tgt = (i + j) % m
                M[b * m + tgt][b * m + i] = F.pow(omega, (a1 * x1 + a2 * x2) * pow(c, tgt, p))
        mats.append(M)
    return mats


def _kernel_prime(fs: FrobeniusStructure) -> int:
    return fs.whole.element_orders[fs.kernel.sorted[1]]


def _complement_scalar(fs: FrobeniusStructure, p: int) -> int:
    G = fs.whole
    h = fs.complement_generator
    f = G.index_of(((1, 0), 0))
    img = G.labels[G.mul(G.mul(h, f), G.inv(h))][0]
    return img[0] % p


@dataclass
class LieActionInstance:
    name: str
    action: FrobeniusLieAction
    chars: tuple
    cls: int


def _lie_action(p: int, m: int, q: int, chars, cls: int) -> FrobeniusLieAction:
    fs = frobenius_group(p, m)
    V = monomial_matrices(fs, q, chars)
    fn = free_nilpotent_lie(q, len(V[0]), cls)
    rep = [fn.induced(M).matrix for M in V]
    return frobenius_lie_action(fs, fn.ring, rep)


LIE_ACTIONS: dict[str, Callable[[], FrobeniusLieAction]] = {
    "free1_rank4_c5sq_c2_gf11": lambda: _lie_action(5, 2, 11, [(1, 0), (0, 1)], 1),
    "free2_rank4_c5sq_c2_gf11": lambda: _lie_action(5, 2, 11, [(1, 0), (0, 1)], 2),
    "free3_rank2_c5sq_c2_gf11": lambda: _lie_action(5, 2, 11, [(1, 1)], 3),
    "free2_rank4_c5sq_c4_gf11": lambda: _lie_action(5, 4, 11, [(1, 1)], 2),
    "free3_rank2_c3sq_c2_gf7": lambda: _lie_action(3, 2, 7, [(1, 1)], 3),
    "free3_rank4_c5sq_c2_gf11": lambda: _lie_action(5, 2, 11, [(1, 0), (0, 1)], 3),
}


@lru_cache(maxsize=None)
def lie_action(name: str) -> FrobeniusLieAction:
    try:
        return LIE_ACTIONS[name]()
    except KeyError:
        raise ConfigError(f"unknown Lie-level action {name!r}") from None


# ---------------------------------------------------------------------------
# group-level pipelines: FH acting on a nilpotent group G

@dataclass
class GroupPipeline:
    name: str
    fs: FrobeniusStructure
    setup: ActionSetup  # FH acting on G

    @property
    def G(self) -> FiniteGroup:
        return self.setup.target


def _heisenberg_pipeline(name: str, ell: int, p: int) -> GroupPipeline:
    """UT(3, ell) with (C_p^2) x| C_2: f = (x1, x2) acts as the torus
    diag(w^{x2}, w^{-x2}) and h swaps a and b."""
    fs = frobenius_group(p, 2)
    FH, G = fs.whole, G_(f"extraspecial_exponent_q({ell})")
    w = field(ell).root_of_unity(p)
    swap = heisenberg_gl2_perm(G, ell, [[0, 1], [1, 0]])
    images = {}
    for g in FH.generators:
        (x1, x2), j = FH.labels[g]
        lam = pow(w, x2, ell)
        T = heisenberg_gl2_perm(G, ell, [[lam, 0], [0, pow(lam, -1, ell)]])
        images[g] = [T[swap[x]] for x in range(G.order)] if j else T
    return GroupPipeline(name, fs, ActionSetup.from_generators(FH, G, images))


def _abelian_pipeline(name: str, ell: int, p: int) -> GroupPipeline:
    fs = frobenius_group(p, 2)
    FH, G = fs.whole, G_(f"elementary_abelian({ell}, 2)")
    w = field(ell).root_of_unity(p)
    images = {}
    for g in FH.generators:
        (x1, x2), j = FH.labels[g]
        lam = pow(w, x2, ell)
        D = [[lam, 0], [0, pow(lam, -1, ell)]]
        M = [[0, D[1][1]], [D[0][0], 0]] if j else D
        images[g] = matrix_map(G, M)
    return GroupPipeline(name, fs, ActionSetup.from_generators(FH, G, images))


GROUP_PIPELINES: dict[str, Callable[[], GroupPipeline]] = {
    "ut3_11_by_c5sq_c2": lambda: _heisenberg_pipeline("ut3_11_by_c5sq_c2", 11, 5),
    "ut3_7_by_c3sq_c2": lambda: _heisenberg_pipeline("ut3_7_by_c3sq_c2", 7, 3),
    "c11sq_by_c5sq_c2": lambda: _abelian_pipeline("c11sq_by_c5sq_c2", 11, 5),
}


@lru_cache(maxsize=None)
def group_pipeline(name: str) -> GroupPipeline:
    try:
        return GROUP_PIPELINES[name]()
    except KeyError:
        raise ConfigError(f"unknown group pipeline {name!r}") from None


def pipeline_lie_action(gp: GroupPipeline) -> tuple[AssociatedLie, FrobeniusLieAction]:
    """L(G) with the induced FH-action, graded by a normal Z of order p."""
    A = associated_lie_ring(gp.G)
    rep = [induced_lie_automorphism(A, gp.setup.perms[a]).matrix for a in range(gp.fs.whole.order)]
    return A, frobenius_lie_action(gp.fs, A.ring, rep)


# ---------------------------------------------------------------------------
# generation lemma instances

@dataclass
class GenerationInstance:
    N: FiniteGroup
    KB: FrobeniusStructure
    setup: ActionSetup


def _s3_on_c7sq(trivial_kernel: bool = False) -> GenerationInstance:
    KB = frobenius_from_parts(G_("semidirect_product(cyclic(3), cyclic(2), inversion())"))
    N = G_("elementary_abelian(7, 2)")
    k = KB.kernel.gens[0]
    b = KB.complement_generator
    K_img = list(range(N.order)) if trivial_kernel else matrix_map(N, [[0, -1], [1, -1]])
    setup = ActionSetup.from_generators(KB.whole, N, {k: K_img, b: matrix_map(N, [[0, 1], [1, 0]])})
    return GenerationInstance(N, KB, setup)


GENERATION_INSTANCES: dict[str, Callable[[], GenerationInstance]] = {
    "s3_on_c7sq": _s3_on_c7sq,
    "s3_on_c7sq_trivial_kernel": lambda: _s3_on_c7sq(True),
}


@lru_cache(maxsize=None)
def generation_instance(name: str) -> GenerationInstance:
    try:
        return GENERATION_INSTANCES[name]()
    except KeyError:
        raise ConfigError(f"unknown generation instance {name!r}") from None


# ---------------------------------------------------------------------------
# q-groups acting on q'-groups (first main theorem)

def _diag_action(A: FiniteGroup, G: FiniteGroup, ell: int, p: int, coords: Sequence[int | None]) -> dict:
    """Generator images for A (vector labels) acting on C_ell^k diagonally:
    coordinate i scaled by ``w^{x[coords[i]]}`` (None means trivial)."""
    w = field(ell).root_of_unity(p)
    out = {}
    for g in A.generators:
        x = A.labels[g]
        D = [[0] * len(coords) for _ in coords]
        for i, c in enumerate(coords):
            D[i][i] = 1 if c is None else pow(w, x[c], ell)
        out[g] = matrix_map(G, D)
    return out


def _theorem1_torus_ut3() -> ActionSetup:
    A, G = G_("elementary_abelian(5, 3)"), G_("extraspecial_exponent_q(11)")
    w = field(11).root_of_unity(5)
    images = {}
    for g in A.generators:
        x = A.labels[g]
        images[g] = heisenberg_gl2_perm(G, 11, [[pow(w, x[0], 11), 0], [0, pow(w, x[1], 11)]])
    return ActionSetup.from_generators(A, G, images)


THEOREM1_SETUPS: dict[str, Callable[[], ActionSetup]] = {
    "c5cube_on_c11cube": lambda: _setup("elementary_abelian(5, 3)", "elementary_abelian(11, 3)",
                                        lambda A, G: _diag_action(A, G, 11, 5, [0, 1, 2])),
    "c5cube_on_ut3_11": _theorem1_torus_ut3,
    "c5cube_on_s3_trivial": lambda: _setup("elementary_abelian(5, 3)", "symmetric(3)",
                                           lambda A, G: {g: list(range(G.order)) for g in A.generators}),
    "c25xc5_on_c11sq": lambda: _setup("abelian(25, 5)", "elementary_abelian(11, 2)",
                                      lambda A, G: _diag_action(A, G, 11, 5, [0, 1])),
}


# instances meeting every hypothesis; the others are controls
THEOREM1_POSITIVE = ("c5cube_on_c11cube", "c5cube_on_ut3_11")


@lru_cache(maxsize=None)
def theorem1_setup(name: str) -> ActionSetup:
    try:
        return THEOREM1_SETUPS[name]()
    except KeyError:
        raise ConfigError(f"unknown theorem-1 setup {name!r}") from None


# ---------------------------------------------------------------------------
# Frobenius groups for the rank-2 kernel lemma

SUBMET_SPECS = [
    frobenius_spec(5, 2),
    frobenius_spec(5, 4),
    frobenius_spec(3, 2),
    frobenius_spec(7, 3),
    "semidirect_product(extraspecial_exponent_q(7), cyclic(3), matrix([[2, 0, 0], [0, 2, 0], [0, 0, 4]]))",
]
