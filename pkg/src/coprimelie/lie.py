"""Lie rings over finite fields given by structure constants.

Vectors are lists of field codes in the basis ``e_0 .. e_{n-1}``.  A linear
map is a square matrix acting on column vectors, so column ``j`` of an
automorphism holds the image of ``e_j``.  Over prime fields the heavy
operations run through numpy with reduction mod q; over extension fields
they fall back to table arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AntisymmetryFail,
    JacobiFail,
    MixedExponentLayer,
    NotAnAutomorphism,
    NotASubalgebra,
    NotCoprime,
    NotNilpotent,
)
from .gf import (
    GF,
    Subspace,
    rref_prime,
    det,
    field,
    fixed_space,
    identity,
    mat_mul,
    mat_pow,
    mat_vec,
    multiplicative_order_mod,
)
from .groups import FiniteGroup, Subgroup, is_nilpotent, lower_central_series, prime_power


class LieRing:
    """Structure constants ``c[i][j][k]`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k``."""

    def __init__(self, F: GF, constants, labels: Sequence[str] | None = None,
                 weights: Sequence[int] | None = None, check: bool = True):
        C = np.asarray(constants, dtype=np.int64)
        if C.ndim != 3 or C.shape[0] != C.shape[1] or C.shape[1] != C.shape[2]:
            if C.size == 0:
                C = np.zeros((0, 0, 0), dtype=np.int64)
            else:
                raise ValueError("structure constants must be n x n x n")
        if C.size and (C.min() < 0 or C.max() >= F.size):
            raise ValueError("structure constants must be field codes")
        C.flags.writeable = False
        self.field = F
        self.dim = C.shape[0]
        self.constants = C
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(self.dim)]
        self.weights = list(weights) if weights is not None else None
        self._sparse = [[[(int(k), int(C[i, j, k])) for k in np.nonzero(C[i, j])[0]]
                         for j in range(self.dim)] for i in range(self.dim)]
        if check:
            self._check_antisymmetry()
            self._check_jacobi()

    def __repr__(self):
        return f"LieRing(dim={self.dim}, field={self.field})"

    def __eq__(self, other):
        return (isinstance(other, LieRing) and self.field == other.field
                and np.array_equal(self.constants, other.constants))

    @property
    def prime_field(self) -> bool:
        return self.field.d == 1

    # -- validation --------------------------------------------------------
    def _check_antisymmetry(self):
        F, C = self.field, self.constants
        for i in range(self.dim):
            if C[i, i].any():
                raise AntisymmetryFail(i, i)
            for j in range(i + 1, self.dim):
                if any(int(a) != F.neg(int(b)) for a, b in zip(C[i, j], C[j, i])):
                    raise AntisymmetryFail(i, j)

    def _check_jacobi(self):
        n = self.dim
        if self.prime_field:
            q, C = self.field.q, self.constants
            for i in range(n):
                J = (np.einsum("jm,mkl->jkl", C[i], C)
                     + np.einsum("jkm,ml->jkl", C, C[:, i, :])
                     + np.einsum("km,mjl->jkl", C[:, i, :], C)) % q
                bad = np.argwhere(J.any(axis=2))
                if len(bad):
                    j, k = (int(x) for x in bad[0])
                    raise JacobiFail(i, j, k)
            return
        basis = identity(n)
        for i, j, k in itertools.combinations(range(n), 3):
            x, y, z = basis[i], basis[j], basis[k]
            s = self.add(self.add(self.bracket(self.bracket(x, y), z),
                                  self.bracket(self.bracket(y, z), x)),
                         self.bracket(self.bracket(z, x), y))
            if any(s):
                raise JacobiFail(i, j, k)

    # -- arithmetic --------------------------------------------------------
    def add(self, x, y) -> list[int]:
        a = self.field._add
        return [a[u][v] for u, v in zip(x, y)]

    def bracket(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        if self.prime_field:
            v = np.einsum("i,j,ijk->k", np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64),
                          self.constants) % self.field.q
            return v.tolist()
        add, mul = self.field._add, self.field._mul
        out = [0] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                s = mul[xi][yj]
                for k, c in self._sparse[i][j]:
                    out[k] = add[out[k]][mul[s][c]]
        return out

    def brackets(self, X: Sequence[Sequence[int]], Y: Sequence[Sequence[int]]) -> list[list[int]]:
        """All ``[x, y]`` for x in X, y in Y."""
        if not X or not Y:
            return []
        if self.prime_field:
            q = self.field.q
            Xa = np.asarray(X, dtype=np.int64)
            Ya = np.asarray(Y, dtype=np.int64)
            T = np.einsum("ai,ijk->ajk", Xa, self.constants) % q
            R = np.einsum("ajk,bj->abk", T, Ya) % q
            return R.reshape(-1, self.dim).tolist()
        return [self.bracket(x, y) for x in X for y in Y]

    def span_bracket(self, X: Subspace, Y: Subspace) -> Subspace:
        """The subspace ``[X, Y]`` spanned by brackets of basis vectors."""
        return Subspace.span(self.field, self.dim, self.brackets(X.basis, Y.basis))

    def full(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def zero(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def span(self, vectors) -> Subspace:
        return Subspace.span(self.field, self.dim, vectors)

    def is_abelian(self) -> bool:
        return not self.constants.any()


def validate_lie_ring(F: GF, constants, labels=None) -> LieRing:
    return LieRing(F, constants, labels)


def lie_ring_from_brackets(F: GF, n: int, brackets: dict, labels=None, check: bool = True) -> LieRing:
    """Build from ``{(i, j): {k: value}}`` giving ``[e_i, e_j]`` for i < j."""
    C = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), out in brackets.items():
        for k, v in out.items():
            v = v % F.size if F.d == 1 else v
            C[i, j, k] = v
            C[j, i, k] = F.neg(v)
    return LieRing(F, C, labels, check=check)


# ---------------------------------------------------------------------------
# series and classes

def iterated_bracket(L: LieRing, X: Subspace, *Ys: Subspace) -> Subspace:
    """Left-normed ``[X, Y_1, ..., Y_k]``."""
    for Y in Ys:
        if X.is_zero():
            return X
        X = L.span_bracket(X, Y)
    return X


def lie_lower_central_series(L: LieRing) -> list[Subspace]:
    """``L^1 = L``, ``L^{i+1} = [L^i, L]``, stopping at zero or when stable."""
    full = L.full()
    series = [full]
    while not series[-1].is_zero():
        nxt = L.span_bracket(series[-1], full)
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def lie_class(L: LieRing) -> int:
    series = lie_lower_central_series(L)
    if not series[-1].is_zero():
        raise NotNilpotent(f"lower central series stabilises at dimension {series[-1].dim}")
    return len(series) - 1


def is_lie_nilpotent(L: LieRing) -> bool:
    return lie_lower_central_series(L)[-1].is_zero()


def check_subalgebra(L: LieRing, S: Subspace) -> None:
    if not L.span_bracket(S, S) <= S:
        raise NotASubalgebra("subspace is not closed under the bracket")


def subalgebra_class(L: LieRing, S: Subspace) -> int:
    """Nilpotency class of a subalgebra; NotNilpotent if it has none."""
    check_subalgebra(L, S)
    cur, k = S, 0
    while not cur.is_zero():
        nxt = L.span_bracket(cur, S)
        if nxt == cur:
            raise NotNilpotent("subalgebra is not nilpotent")
        cur, k = nxt, k + 1
    return k


def derived_length(L: LieRing, S: Subspace | None = None) -> int:
    cur = S if S is not None else L.full()
    k = 0
    while not cur.is_zero():
        nxt = L.span_bracket(cur, cur)
        if nxt == cur:
            raise NotNilpotent("derived series does not reach zero")
        cur, k = nxt, k + 1
    return k


# ---------------------------------------------------------------------------
# automorphisms

class LieAutomorphism:
    """An invertible bracket-preserving matrix (acting on column vectors)."""

    def __init__(self, ring: LieRing, matrix, check: bool = True):
        self.ring = ring
        self.matrix = [list(map(int, r)) for r in matrix]
        n = ring.dim
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ValueError(f"automorphism matrix must be {n} x {n}")
        if check:
            self._check()

    def _check(self):
        L, F, n = self.ring, self.ring.field, self.ring.dim
        if n and det(F, self.matrix) == 0:
            raise NotAnAutomorphism("matrix is singular")
        cols = [list(c) for c in zip(*self.matrix)] if n else []
        if L.prime_field and n:
            q = F.q
            M = np.asarray(self.matrix, dtype=np.int64)
            lhs = np.einsum("kl,ijl->ijk", M, L.constants) % q
            rhs = np.einsum("ai,bj,abk->ijk", M, M, L.constants) % q
            bad = np.argwhere((lhs != rhs).any(axis=2))
            if len(bad):
                i, j = (int(x) for x in bad[0])
                raise NotAnAutomorphism(f"bracket not preserved on (e{i}, e{j})", (i, j))
            return
        for i in range(n):
            for j in range(i + 1, n):
                lhs = mat_vec(F, self.matrix, L.constants[i, j].tolist())
                if lhs != L.bracket(cols[i], cols[j]):
                    raise NotAnAutomorphism(f"bracket not preserved on (e{i}, e{j})", (i, j))

    def __call__(self, v):
        return mat_vec(self.ring.field, self.matrix, v)

    def __eq__(self, other):
        return isinstance(other, LieAutomorphism) and self.matrix == other.matrix

    def __hash__(self):
        return hash(tuple(map(tuple, self.matrix)))

    def __matmul__(self, other: "LieAutomorphism") -> "LieAutomorphism":
        return LieAutomorphism(self.ring, mat_mul(self.ring.field, self.matrix, other.matrix), check=False)

    def power(self, k: int) -> "LieAutomorphism":
        return LieAutomorphism(self.ring, mat_pow(self.ring.field, self.matrix, k), check=False)

    def order(self, cap: int = 10_000) -> int:
        I = identity(self.ring.dim)
        cur, k = self.matrix, 1
        while cur != I:
            cur = mat_mul(self.ring.field, cur, self.matrix)
            k += 1
            if k > cap:
                raise ValueError("automorphism order exceeds cap")
        return k

    def image(self, S: Subspace) -> Subspace:
        return S.image(self.matrix)


def lie_fixed_points(L: LieRing, autos: Iterable) -> Subspace:
    """Common fixed space of the given automorphisms; checked to be a subalgebra."""
    mats = [a.matrix if isinstance(a, LieAutomorphism) else a for a in autos]
    S = fixed_space(L.field, mats, L.dim)
    check_subalgebra(L, S)
    return S


# ---------------------------------------------------------------------------
# scalar extension

def extend_scalars(L: LieRing, p: int) -> tuple[LieRing, int]:
    """Adjoin a primitive p-th root of unity; returns the new ring and omega.

    The codes of the prime field are unchanged inside GF(q^d), so the
    structure constants carry over verbatim.
    """
    F = L.field
    if F.q == p:
        raise NotCoprime(f"characteristic {F.q} equals p = {p}")
    if (F.size - 1) % p == 0:
        return L, F.root_of_unity(p)
    if F.d != 1:
        raise ValueError("scalar extension is only implemented from a prime field")
    d = multiplicative_order_mod(F.q, p)
    E = field(F.q, d)
    Lt = LieRing(E, L.constants, L.labels, L.weights, check=False)
    return Lt, E.root_of_unity(p)


def extend_matrix(M) -> list[list[int]]:
    """Prime-field matrices keep their codes in any extension."""
    return [list(r) for r in M]


# ---------------------------------------------------------------------------
# associated Lie ring of a nilpotent group

@dataclass
class AssociatedLie:
    """``L(G)`` with the bookkeeping needed to induce automorphisms."""

    group: FiniteGroup
    ring: LieRing
    weights: list[int]
    series: list[Subgroup]
    layer_elements: list[list[int]]  # group elements chosen as basis, per layer
    coords: list[dict] = dc_field(repr=False)  # per layer: element -> coordinate tuple
    offsets: list[int] = dc_field(default_factory=list)

    def __iter__(self):
        yield self.ring
        yield self.weights

    @property
    def dims(self) -> list[int]:
        return [len(b) for b in self.layer_elements]

    def vector_of(self, g: int, weight: int) -> list[int]:
        """Coordinates of the image of ``g`` in ``gamma_w / gamma_{w+1}``."""
        v = [0] * self.ring.dim
        if weight > len(self.layer_elements):
            return v
        off = self.offsets[weight - 1]
        for i, c in enumerate(self.coords[weight - 1][g]):
            v[off + i] = c
        return v


def _layer_basis(G: FiniteGroup, layer: Subgroup, below: Subgroup, q: int):
    """Greedy basis of the elementary abelian factor ``layer / below``."""
    chosen: list[int] = []
    span = set(below.elements)
    for x in layer.sorted:
        if x in span:
            continue
        chosen.append(x)
        new = set(span)
        px = 0
        for _ in range(q - 1):
            px = G.mul(px, x)
            new |= {G.mul(s, px) for s in span}
        span = new
    coords = {}
    below_sorted = below.sorted
    for e in itertools.product(range(q), repeat=len(chosen)):
        g = 0
        for b, k in zip(chosen, e):
            g = G.mul(g, G.power(b, k))
        for n in below_sorted:
            coords[G.mul(g, n)] = e
    assert len(coords) == layer.order
    return chosen, coords


def associated_lie_ring(G: FiniteGroup) -> AssociatedLie:
    """``L(G) = sum gamma_i / gamma_{i+1}`` over GF(q) for a nilpotent q-group G."""
    if not is_nilpotent(G):
        raise NotNilpotent(f"{G.name or 'group'} is not nilpotent")
    series = lower_central_series(G)
    c = len(series) - 1
    if G.order == 1:
        q = 2
    else:
        pp = prime_power(G.order)
        if pp is None:
            raise MixedExponentLayer(1, "group order is not a prime power, so the layers mix primes")
        q = pp[0]
    for i in range(c):
        upper, lower = series[i], series[i + 1]
        for x in upper.gens:
            if G.power(x, q) not in lower.elements:
                raise MixedExponentLayer(i + 1, f"gamma_{i + 1}/gamma_{i + 2} has an element of order > {q}")
    F = field(q)
    layers, coords, weights, offsets = [], [], [], []
    for i in range(c):
        chosen, co = _layer_basis(G, series[i], series[i + 1], q)
        offsets.append(len(weights))
        layers.append(chosen)
        coords.append(co)
        weights.extend([i + 1] * len(chosen))
    n = len(weights)
    elems = [b for layer in layers for b in layer]
    C = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            w = weights[a] + weights[b]
            if w > c:
                continue
            k = G.comm(elems[a], elems[b])
            off = offsets[w - 1]
            for t, val in enumerate(coords[w - 1][k]):
                if val:
                    C[a, b, off + t] = val
                    C[b, a, off + t] = (-val) % q
    labels = [f"x{weights[i]}_{i - offsets[weights[i] - 1]}" for i in range(n)]
    L = LieRing(F, C, labels, weights)
    return AssociatedLie(G, L, weights, series, layers, coords, offsets)


def induced_lie_automorphism(A: AssociatedLie, perm: Sequence[int]) -> LieAutomorphism:
    """Block-diagonal matrix of a group automorphism on ``L(G)``."""
    n = A.ring.dim
    M = [[0] * n for _ in range(n)]
    elems = [b for layer in A.layer_elements for b in layer]
    for j, (b, w) in enumerate(zip(elems, A.weights)):
        col = A.vector_of(int(perm[b]), w)
        for i in range(n):
            M[i][j] = col[i]
    return LieAutomorphism(A.ring, M, check=True)


# ---------------------------------------------------------------------------
# structure-constant files

def dumps_lie(L: LieRing) -> str:
    F = L.field
    lines = [f"{F.q} {F.d} {L.dim}", " ".join(str(c) for c in F.modulus)]
    for i, j, k in np.argwhere(L.constants):
        lines.append(f"{i} {j} {k} {L.constants[i, j, k]}")
    return "\n".join(lines) + "\n"


def loads_lie(text: str) -> LieRing:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    q, d, n = (int(x) for x in rows[0])
    F = field(q, d)
    modulus = tuple(int(x) for x in rows[1])
    if modulus != F.modulus:
        raise ValueError(f"modulus {modulus} differs from the canonical {F.modulus}")
    C = np.zeros((n, n, n), dtype=np.int64)
    for r in rows[2:]:
        i, j, k, v = (int(x) for x in r)
        C[i, j, k] = v
    return LieRing(F, C)


def save_lie(L: LieRing, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_lie(L))


def load_lie(path) -> LieRing:
    with open(path) as fh:
        return loads_lie(fh.read())


# ---------------------------------------------------------------------------
# free nilpotent Lie algebras inside the truncated tensor algebra

@dataclass
class FreeNilpotent:
    """Free nilpotent Lie algebra of class c on k generators over GF(q).

    Realised as the Lie subalgebra generated by the letters inside the
    tensor algebra truncated above degree c.  Degree-i elements are arrays
    of length ``k**i`` indexed by words in base k.
    """

    ring: LieRing
    k: int
    c: int
    degrees: list[int]
    basis: list[np.ndarray]  # tensor of each basis element, by degree
    layers: list[tuple[np.ndarray, list[int]]]  # (rref rows, pivots) per degree
    multidegrees: list[tuple[int, ...]] = dc_field(default_factory=list)

    def diagonal(self, F: GF, eigenvalues: Sequence[int]) -> list[list[int]]:
        """Matrix of the automorphism scaling generator s by ``eigenvalues[s]``
        (field codes of F, which may extend the ring's field)."""
        n = self.ring.dim
        M = [[0] * n for _ in range(n)]
        for i, md in enumerate(self.multidegrees):
            lam = 1
            for s, cnt in enumerate(md):
                lam = F.mul(lam, F.pow(eigenvalues[s], cnt))
            M[i][i] = lam
        return M

    def coordinates(self, deg: int, tensor: np.ndarray) -> list[int]:
        rows, piv = self.layers[deg - 1]
        out = [0] * self.ring.dim
        off = self.degrees.index(deg)
        for t, pc in enumerate(piv):
            out[off + t] = int(tensor[pc])
        return out

    def induced(self, M) -> LieAutomorphism:
        """Extend a k x k matrix on the generators to the whole algebra."""
        q = self.ring.field.q
        Ma = np.asarray(M, dtype=np.int64) % q
        powers = [Ma]
        for _ in range(self.c - 1):
            powers.append(np.kron(powers[-1], Ma) % q)
        n = self.ring.dim
        cols = []
        for deg, b in zip(self.degrees, self.basis):
            cols.append(self.coordinates(deg, (powers[deg - 1] @ b) % q))
        return LieAutomorphism(self.ring, [[cols[j][i] for j in range(n)] for i in range(n)])


def free_nilpotent_lie(q: int, k: int, c: int) -> FreeNilpotent:
    F = field(q)
    degrees: list[int] = []
    basis: list[np.ndarray] = []
    layers = []
    gens = [np.eye(k, dtype=np.int64)[s] for s in range(k)]
    prev = gens
    for deg in range(1, c + 1):
        if deg == 1:
            cand = gens
        else:
            cand = [(np.outer(b, x).ravel() - np.outer(x, b).ravel()) % q for b in prev for x in gens]
        rows, piv = rref_prime(np.array(cand, dtype=np.int64).reshape(len(cand), k ** deg), q)
        if not rows:
            break
        layer = [np.array(r, dtype=np.int64) for r in rows]
        layers.append((layer, piv))
        degrees.extend([deg] * len(layer))
        basis.extend(layer)
        prev = layer
    n = len(basis)
    C = np.zeros((n, n, n), dtype=np.int64)
    fn = FreeNilpotent(None, k, c, degrees, basis, layers)  # type: ignore[arg-type]
    for a in range(n):
        for b in range(a + 1, n):
            w = degrees[a] + degrees[b]
            if w > c or w > len(layers):
                continue
            t = (np.outer(basis[a], basis[b]).ravel() - np.outer(basis[b], basis[a]).ravel()) % q
            coords = np.zeros(n, dtype=np.int64)
            rows, piv = layers[w - 1]
            off = degrees.index(w)
            for i, pc in enumerate(piv):
                coords[off + i] = t[pc]
            C[a, b] = coords
            C[b, a] = (-coords) % q
    for deg, b in zip(degrees, basis):
        w = int(np.nonzero(b)[0][0])
        letters = [(w // k ** e) % k for e in range(deg)]
        fn.multidegrees.append(tuple(letters.count(s) for s in range(k)))
    labels = [f"w{d}_{i - degrees.index(d)}" for i, d in enumerate(degrees)]
    fn.ring = LieRing(F, C, labels, degrees)
    return fn
