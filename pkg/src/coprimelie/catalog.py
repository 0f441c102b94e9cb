"""Catalog groups, built from short spec strings.

A spec is a nested call expression such as::

    semidirect_product(elementary_abelian(5, 2), cyclic(4), power(2))

Elements are ordered lexicographically in the natural coordinates of each
construction (so the identity lands at index 0), and every table passes
through :func:`validate_group`.
"""

from __future__ import annotations

import ast
import itertools
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ActionNotAutomorphic, InvalidSpec
from .groups import DEFAULT_CAP, FiniteGroup, is_prime, validate_group


def _check_size(n: int, cap: int = DEFAULT_CAP) -> None:
    if n > cap:
        raise InvalidSpec(f"order {n} exceeds the size cap {cap}")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidSpec("cyclic(n) needs n >= 1")
    _check_size(n)
    a = np.arange(n)
    return validate_group((a[:, None] + a[None, :]) % n, f"cyclic({n})", list(range(n)))


def abelian(*moduli: int) -> FiniteGroup:
    """Direct product of cyclic groups with tuple labels ``(x1, ..., xk)``."""
    if not moduli or any(m < 1 for m in moduli):
        raise InvalidSpec("abelian() needs positive moduli")
    n = int(np.prod(moduli))
    _check_size(n)
    coords = np.array(list(itertools.product(*[range(m) for m in moduli])), dtype=np.int64)
    mods = np.array(moduli)
    weights = np.array([int(np.prod(moduli[i + 1:])) for i in range(len(moduli))])
    summed = (coords[:, None, :] + coords[None, :, :]) % mods
    table = summed @ weights
    name = f"abelian({', '.join(map(str, moduli))})"
    return validate_group(table, name, [tuple(int(v) for v in c) for c in coords])


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    if not is_prime(p) or k < 1:
        raise InvalidSpec("elementary_abelian(p, k) needs a prime p and k >= 1")
    G = abelian(*([p] * k))
    G.name = f"elementary_abelian({p}, {k})"
    return G


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; label ``(i, j)`` is ``r^i s^j``."""
    if n < 1:
        raise InvalidSpec("dihedral(n) needs n >= 1")
    els = [(i, j) for i in range(n) for j in range(2)]

    def mul(x, y):
        a, b = x
        c, d = y
        return ((a + (c if b == 0 else -c)) % n, (b + d) % 2)

    return _from_mul(els, mul, f"dihedral({n})")


def quaternion(m: int = 8) -> FiniteGroup:
    """Generalised quaternion group of order ``m`` (a power of 2, m >= 8).

    Label ``(i, j)`` is ``x^i y^j`` with ``y^2 = x^(m/4)`` and ``x^y = x^-1``.
    """
    if m < 8 or m & (m - 1):
        raise InvalidSpec("quaternion(m) needs m a power of 2, m >= 8")
    half = m // 2
    els = [(i, j) for i in range(half) for j in range(2)]

    def mul(x, y):
        a, b = x
        c, d = y
        if b == 0:
            return ((a + c) % half, d)
        if d == 0:
            return ((a - c) % half, 1)
        return ((a - c + half // 2) % half, 0)

    return _from_mul(els, mul, f"quaternion({m})")


def extraspecial_exponent_q(q: int) -> FiniteGroup:
    """Unitriangular 3x3 matrices over GF(q); label ``(a, b, c)`` is the
    matrix with ``a`` at (1,2), ``b`` at (2,3) and ``c`` at (1,3)."""
    if not is_prime(q):
        raise InvalidSpec("extraspecial_exponent_q(q) needs a prime q")
    _check_size(q ** 3)
    coords = np.array(list(itertools.product(range(q), repeat=3)), dtype=np.int64)
    a, b, c = coords[:, 0], coords[:, 1], coords[:, 2]
    na = (a[:, None] + a[None, :]) % q
    nb = (b[:, None] + b[None, :]) % q
    nc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % q
    table = na * q * q + nb * q + nc
    return validate_group(table, f"extraspecial_exponent_q({q})", [tuple(int(v) for v in t) for t in coords])


def symmetric(n: int) -> FiniteGroup:
    els = list(itertools.permutations(range(n)))
    return _from_mul(els, lambda s, t: tuple(t[s[i]] for i in range(n)), f"symmetric({n})")


def _parity(p) -> int:
    p = list(p)
    sign = 0
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign ^= 1
    return sign


def alternating(n: int) -> FiniteGroup:
    els = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return _from_mul(els, lambda s, t: tuple(t[s[i]] for i in range(n)), f"alternating({n})")


def pauli() -> FiniteGroup:
    """The order-16 Pauli group; label ``(k, a, b)`` is ``i^k X^a Z^b``."""
    els = list(itertools.product(range(4), range(2), range(2)))

    def mul(x, y):
        k, a, b = x
        k2, c, d = y
        return ((k + k2 + 2 * b * c) % 4, (a + c) % 2, (b + d) % 2)

    return _from_mul(els, mul, "pauli()")


def _from_mul(els: Sequence, mul: Callable, name: str) -> FiniteGroup:
    _check_size(len(els))
    pos = {e: i for i, e in enumerate(els)}
    table = [[pos[mul(x, y)] for y in els] for x in els]
    return validate_group(table, name, list(els))


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    if len(factors) == 1:
        return factors[0]
    G, H = factors[0], direct_product(*factors[1:]) if len(factors) > 2 else factors[1]
    m, n = G.order, H.order
    _check_size(m * n)
    g = np.arange(m * n) // n
    h = np.arange(m * n) % n
    table = G.table[g[:, None], g[None, :]] * n + H.table[h[:, None], h[None, :]]
    labels = None
    if G.labels is not None and H.labels is not None:
        labels = [(G.labels[int(x)], H.labels[int(y)]) for x, y in zip(g, h)]
    name = f"direct_product({', '.join(f.name for f in factors)})"
    return validate_group(table, name, labels)


# ---------------------------------------------------------------------------
# semidirect products

def check_automorphism(G: FiniteGroup, perm: Sequence[int]) -> None:
    """Raise ActionNotAutomorphic unless ``perm`` is an automorphism of G."""
    p = np.asarray(perm, dtype=np.int64)
    if p.shape != (G.order,) or sorted(p.tolist()) != list(range(G.order)):
        raise ActionNotAutomorphic("image list is not a permutation of the elements")
    bad = np.argwhere(p[G.table] != G.table[p[:, None], p[None, :]])
    if len(bad):
        x, y = (int(v) for v in bad[0])
        raise ActionNotAutomorphic(f"product of {x} and {y} not preserved", (x, y))


def extend_to_hom(H: FiniteGroup, gen_images: dict[int, Sequence[int]], degree: int) -> np.ndarray:
    """Extend generator images in a permutation group to a homomorphism.

    Returns an ``|H| x degree`` array ``theta`` with
    ``theta[a*b] = theta[a] o theta[b]``; inconsistent images raise
    ActionNotAutomorphic with the offending pair as witness.
    """
    theta = np.full((H.order, degree), -1, dtype=np.int64)
    theta[0] = np.arange(degree)
    imgs = {g: np.asarray(v, dtype=np.int64) for g, v in gen_images.items()}
    queue = [0]
    done = {0}
    for x in queue:
        for g, img in imgs.items():
            y = H.rows[x][g]
            val = theta[x][img]
            if y in done:
                if not np.array_equal(theta[y], val):
                    raise ActionNotAutomorphic(
                        f"generator images violate a relation at ({x}, {g})", (x, g)
                    )
            else:
                theta[y] = val
                done.add(y)
                queue.append(y)
    if len(done) != H.order:
        raise ActionNotAutomorphic("images given for a non-generating set")
    return theta


def semidirect_product(N: FiniteGroup, H: FiniteGroup, theta, name: str | None = None) -> FiniteGroup:
    """``N x| H`` with ``(n1, h1)(n2, h2) = (n1 theta_{h1}(n2), h1 h2)``.

    ``theta`` is either a full ``|H| x |N|`` array of automorphisms (a
    homomorphism ``H -> Aut(N)``) or a dict of generator images.
    Index of ``(n, h)`` is ``n*|H| + h``.
    """
    if isinstance(theta, dict):
        for img in theta.values():
            check_automorphism(N, img)
        theta = extend_to_hom(H, theta, N.order)
    theta = np.asarray(theta, dtype=np.int64)
    for h in range(H.order):
        check_automorphism(N, theta[h])
    comp = theta[H.table]  # comp[a, b] should equal theta[a] o theta[b]
    for a in range(H.order):
        expect = theta[a][theta]
        bad = np.nonzero((comp[a] != expect).any(axis=1))[0]
        if len(bad):
            raise ActionNotAutomorphic("theta is not a homomorphism", (a, int(bad[0])))
    m, k = N.order, H.order
    _check_size(m * k)
    idx = np.arange(m * k)
    n_, h_ = idx // k, idx % k
    acted = theta[h_[:, None], n_[None, :]]  # theta_{h1}(n2)
    new_n = N.table[n_[:, None], acted]
    new_h = H.table[h_[:, None], h_[None, :]]
    table = new_n * k + new_h
    labels = None
    if N.labels is not None and H.labels is not None:
        labels = [(N.labels[int(a)], H.labels[int(b)]) for a, b in zip(n_, h_)]
    G = validate_group(table, name or f"semidirect_product({N.name}, {H.name})", labels)
    G.parts = {"kernel": [int(i) for i in idx if i % k == 0], "complement": list(range(k))}
    return G


def power_map(N: FiniteGroup, k: int) -> list[int]:
    return [N.power(x, k) for x in range(N.order)]


def matrix_map(N: FiniteGroup, M: Sequence[Sequence[int]]) -> list[int]:
    """``v -> v M`` on an abelian group with integer-vector labels.

    Coordinate ``i`` is reduced modulo its own range, so ``abelian(25, 5)``
    accepts e.g. the shear ``[[1, 0], [5, 1]]``.
    """
    if N.labels is None or not isinstance(N.labels[0], tuple):
        raise InvalidSpec("matrix action needs vector-labelled elements")
    labs = np.array(N.labels, dtype=np.int64)
    mods = labs.max(axis=0) + 1
    Ma = np.array(M, dtype=np.int64)
    if Ma.shape != (labs.shape[1], labs.shape[1]):
        raise InvalidSpec("matrix shape does not match the label length")
    imgs = (labs @ Ma) % mods
    try:
        return [N.index_of(tuple(int(x) for x in v)) for v in imgs]
    except KeyError as exc:
        raise InvalidSpec("matrix does not map labels to labels") from exc


# ---------------------------------------------------------------------------
# spec strings

_GROUP_BUILDERS = {
    "cyclic": cyclic,
    "abelian": abelian,
    "elementary_abelian": elementary_abelian,
    "dihedral": dihedral,
    "quaternion": quaternion,
    "extraspecial_exponent_q": extraspecial_exponent_q,
    "heisenberg": extraspecial_exponent_q,
    "symmetric": symmetric,
    "alternating": alternating,
    "pauli": pauli,
}
_ACTIONS = ("power", "matrix", "perm", "inversion")


def _literal(node):
    try:
        return ast.literal_eval(node)
    except ValueError as exc:
        raise InvalidSpec(f"expected a literal, got {ast.unparse(node)!r}") from exc


def _action_perm(N: FiniteGroup, node) -> list[int]:
    if not (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _ACTIONS):
        raise InvalidSpec(f"unknown action {ast.unparse(node)!r}")
    kind = node.func.id
    args = [_literal(a) for a in node.args]
    if kind == "power":
        return power_map(N, int(args[0]))
    if kind == "inversion":
        return power_map(N, -1)
    if kind == "matrix":
        return matrix_map(N, args[0])
    return [int(v) for v in args[0]]


def _build(node) -> FiniteGroup:
    if not (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)):
        raise InvalidSpec(f"cannot parse {ast.unparse(node)!r}")
    fname = node.func.id
    if fname in _GROUP_BUILDERS:
        args = [_literal(a) for a in node.args]
        try:
            return _GROUP_BUILDERS[fname](*args)
        except TypeError as exc:
            raise InvalidSpec(str(exc)) from exc
    if fname == "direct_product":
        return direct_product(*[_build(a) for a in node.args])
    if fname == "semidirect_product":
        if len(node.args) != 3:
            raise InvalidSpec("semidirect_product(N, H, action) takes three arguments")
        N = _build(node.args[0])
        H = _build(node.args[1])
        acts = node.args[2]
        acts = acts.elts if isinstance(acts, (ast.List, ast.Tuple)) else [acts]
        gens = H.generators
        if len(acts) != len(gens):
            raise InvalidSpec(f"{H.name} has {len(gens)} generators but {len(acts)} actions were given")
        images = {g: _action_perm(N, a) for g, a in zip(gens, acts)}
        return semidirect_product(N, H, images)
    raise InvalidSpec(f"unknown constructor {fname!r}")


def normalize_spec(spec: str) -> str:
    try:
        return ast.unparse(ast.parse(spec.strip(), mode="eval"))
    except SyntaxError as exc:
        raise InvalidSpec(f"cannot parse {spec!r}") from exc


@lru_cache(maxsize=256)
def _construct(norm: str) -> FiniteGroup:
    G = _build(ast.parse(norm, mode="eval").body)
    G.name = norm
    return G


def construct_catalog_group(spec: str) -> FiniteGroup:
    """Build (and cache) the group described by ``spec``."""
    return _construct(normalize_spec(spec))


# ---------------------------------------------------------------------------
# named catalog lists

SMALL_CATALOG = [
    "cyclic(1)", "cyclic(2)", "cyclic(4)", "cyclic(6)", "cyclic(8)", "cyclic(12)",
    "cyclic(27)", "cyclic(64)", "cyclic(128)",
    "elementary_abelian(2, 2)", "elementary_abelian(2, 3)", "elementary_abelian(2, 5)",
    "elementary_abelian(2, 7)", "elementary_abelian(3, 2)", "elementary_abelian(3, 4)",
    "abelian(4, 2)", "abelian(4, 4)", "abelian(8, 4, 2)",
    "dihedral(3)", "dihedral(4)", "dihedral(5)", "dihedral(6)", "dihedral(8)",
    "dihedral(16)", "dihedral(32)", "dihedral(64)",
    "quaternion(8)", "quaternion(16)", "quaternion(32)", "quaternion(64)",
    "extraspecial_exponent_q(3)", "pauli()",
    "symmetric(3)", "symmetric(4)", "alternating(4)", "alternating(5)",
    "direct_product(dihedral(4), cyclic(2))", "direct_product(quaternion(8), cyclic(2))",
    "direct_product(symmetric(3), cyclic(5))", "direct_product(dihedral(4), cyclic(3))",
    "direct_product(extraspecial_exponent_q(3), cyclic(3))",
    "direct_product(dihedral(4), dihedral(4))",
    "semidirect_product(cyclic(7), cyclic(3), power(2))",
    "semidirect_product(elementary_abelian(3, 2), cyclic(2), inversion())",
    "semidirect_product(elementary_abelian(5, 2), cyclic(4), power(2))",
    "semidirect_product(cyclic(8), cyclic(2), power(5))",
    "semidirect_product(cyclic(16), cyclic(2), power(7))",
    "semidirect_product(cyclic(4), cyclic(4), power(3))",
    "semidirect_product(elementary_abelian(2, 2), cyclic(4), matrix([[0, 1], [1, 0]]))",
    "semidirect_product(elementary_abelian(2, 2), cyclic(3), matrix([[0, 1], [1, 1]]))",
    "semidirect_product(elementary_abelian(2, 3), cyclic(2), matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))",
]

FIVE_GROUPS = [
    "cyclic(5)",
    "cyclic(25)",
    "elementary_abelian(5, 2)",
    "cyclic(125)",
    "abelian(25, 5)",
    "elementary_abelian(5, 3)",
    "extraspecial_exponent_q(5)",
    "semidirect_product(cyclic(25), cyclic(5), power(6))",
    "cyclic(625)",
    "abelian(125, 5)",
    "abelian(25, 25)",
    "abelian(25, 5, 5)",
    "elementary_abelian(5, 4)",
    "direct_product(extraspecial_exponent_q(5), cyclic(5))",
    "direct_product(semidirect_product(cyclic(25), cyclic(5), power(6)), cyclic(5))",
    "semidirect_product(cyclic(125), cyclic(5), power(26))",
    "semidirect_product(cyclic(25), cyclic(25), power(6))",
    "semidirect_product(elementary_abelian(5, 3), cyclic(5), matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]]))",
    "semidirect_product(abelian(25, 5), cyclic(5), matrix([[1, 0], [5, 1]]))",
]

ORDER16 = [
    "cyclic(16)",
    "abelian(8, 2)",
    "abelian(4, 4)",
    "abelian(4, 2, 2)",
    "elementary_abelian(2, 4)",
    "dihedral(8)",
    "quaternion(16)",
    "semidirect_product(cyclic(8), cyclic(2), power(3))",
    "semidirect_product(cyclic(8), cyclic(2), power(5))",
    "semidirect_product(cyclic(4), cyclic(4), power(3))",
    "semidirect_product(elementary_abelian(2, 2), cyclic(4), matrix([[0, 1], [1, 0]]))",
    "direct_product(dihedral(4), cyclic(2))",
    "direct_product(quaternion(8), cyclic(2))",
    "pauli()",
]

