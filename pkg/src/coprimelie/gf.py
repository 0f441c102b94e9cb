"""Finite fields GF(q^d) and exact linear algebra over them.

Field elements are integers ``0 .. q^d - 1`` encoding the coefficient
vector of a polynomial of degree ``< d`` in base ``q`` (constant term as the
lowest digit).  The prime field therefore sits inside every extension with
the same codes.  Arithmetic goes through precomputed tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import NoRootOfUnity, SingularSystem
from .groups import is_prime

FIELD_CAP = 4096

Vector = list[int]
Matrix = list[list[int]]


def _poly_mod(a: list[int], m: list[int], q: int) -> list[int]:
    a = a[:]
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = a[-1]  # m is monic
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % q
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic_polys(q: int, d: int):
    """Monic degree-d polynomials (coefficients low to high) in code order."""
    for low in itertools.product(range(q), repeat=d):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: Sequence[int], q: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(poly) - 1
    for k in range(1, d // 2 + 1):
        for f in _monic_polys(q, k):
            if not _poly_mod(list(poly), f, q):
                return False
    return True


def smallest_irreducible(q: int, d: int) -> tuple[int, ...]:
    """Monic irreducible of degree d with the smallest code
    ``sum c_i q^i`` (lexicographic from the top coefficient down)."""
    for low in range(q ** d):
        coeffs = [(low // q ** i) % q for i in range(d)] + [1]
        if is_irreducible(coeffs, q):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """The field with ``q**d`` elements; use :func:`field` to get a cached one."""

    def __init__(self, q: int, d: int = 1):
        if not is_prime(q) or d < 1:
            raise ValueError("GF(q, d) needs a prime q and d >= 1")
        if q ** d > FIELD_CAP:
            raise ValueError(f"field of size {q ** d} exceeds cap {FIELD_CAP}")
        self.q = q
        self.d = d
        self.size = q ** d
        self.modulus = smallest_irreducible(q, d)
        n = self.size
        digits = [[(x // q ** i) % q for i in range(d)] for x in range(n)]

        def enc(c):
            return sum(v * q ** i for i, v in enumerate(c))

        self._add = [[enc([(a + b) % q for a, b in zip(digits[x], digits[y])]) for y in range(n)] for x in range(n)]
        self._neg = [enc([(-a) % q for a in digits[x]]) for x in range(n)]
        mul = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(x, n):
                prod = [0] * (2 * d - 1)
                for i, a in enumerate(digits[x]):
                    if a:
                        for j, b in enumerate(digits[y]):
                            prod[i + j] = (prod[i + j] + a * b) % q
                r = _poly_mod(prod, list(self.modulus), q) if d > 1 else [prod[0] % q]
                mul[x][y] = mul[y][x] = enc(r + [0] * (d - len(r)))
        self._mul = mul
        self._inv = [0] * n
        for x in range(1, n):
            row = mul[x]
            self._inv[x] = row.index(1)

    def __repr__(self):
        return f"GF({self.q}^{self.d})" if self.d > 1 else f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.q, self.d) == (other.q, other.d)

    def __hash__(self):
        return hash((self.q, self.d))

    @property
    def characteristic(self) -> int:
        return self.q

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 1
        while k:
            if k & 1:
                out = self._mul[out][a]
            a = self._mul[a][a]
            k >>= 1
        return out

    def from_int(self, n: int) -> int:
        """Image of the integer n (lands in the prime field)."""
        return n % self.q

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self._mul[x][a]
            k += 1
        return k

    def primitive_element(self) -> int:
        """Smallest multiplicative generator."""
        for g in range(2 if self.size > 2 else 1, self.size):
            if self.mult_order(g) == self.size - 1:
                return g
        raise AssertionError("no generator")  # pragma: no cover

    def root_of_unity(self, p: int) -> int:
        """Smallest element of multiplicative order exactly p."""
        if (self.size - 1) % p:
            raise NoRootOfUnity(f"{self} has no primitive {p}-th root of unity")
        for x in range(1, self.size):
            if self.mult_order(x) == p:
                return x
        raise AssertionError("unreachable")  # pragma: no cover

    def spot_check(self) -> bool:
        one = all(self._mul[x][self._inv[x]] == 1 for x in range(1, self.size))
        zero = all(self._add[x][self._neg[x]] == 0 for x in range(self.size))
        return one and zero


@lru_cache(maxsize=None)
def field(q: int, d: int = 1) -> GF:
    return GF(q, d)


def multiplicative_order_mod(q: int, p: int) -> int:
    """Order of q in (Z/pZ)^*."""
    if q % p == 0:
        raise ValueError(f"{q} is not invertible mod {p}")
    k, x = 1, q % p
    while x != 1:
        x = x * q % p
        k += 1
    return k


# ---------------------------------------------------------------------------
# vectors and matrices (lists of field codes)

def vec_add(F: GF, u: Sequence[int], v: Sequence[int]) -> Vector:
    a = F._add
    return [a[x][y] for x, y in zip(u, v)]


def vec_scale(F: GF, c: int, v: Sequence[int]) -> Vector:
    m = F._mul[c]
    return [m[x] for x in v]


def vec_sub(F: GF, u, v) -> Vector:
    a, n = F._add, F._neg
    return [a[x][n[y]] for x, y in zip(u, v)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_vec(F: GF, M: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    a, m = F._add, F._mul
    out = []
    for row in M:
        s = 0
        for x, y in zip(row, v):
            if x and y:
                s = a[s][m[x][y]]
        out.append(s)
    return out


def mat_mul(F: GF, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if F.d == 1 and len(A) and len(B):
        return ((np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % F.q).tolist()
    cols = list(zip(*B))
    return [mat_vec(F, cols, row) for row in A]


def mat_sub(F: GF, A, B) -> Matrix:
    return [vec_sub(F, r, s) for r, s in zip(A, B)]


def mat_pow(F: GF, A, k: int) -> Matrix:
    out = identity(len(A))
    base = [list(r) for r in A]
    if k < 0:
        base, k = mat_inv(F, base), -k
    while k:
        if k & 1:
            out = mat_mul(F, out, base)
        base = mat_mul(F, base, base)
        k >>= 1
    return out


def transpose(A) -> Matrix:
    return [list(c) for c in zip(*A)]


def rref_prime(M: np.ndarray, q: int) -> tuple[Matrix, list[int]]:
    M = M % q
    rows, n = M.shape
    inv = [0] + [pow(x, -1, q) for x in range(1, q)]
    pivots = []
    r = 0
    for c in range(n):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * inv[int(M[r, c])]) % q
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % q
        pivots.append(c)
        r += 1
    return M[:r].tolist(), pivots


def rref(F: GF, rows: Iterable[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    n = ncols if ncols is not None else len(M[0])
    if F.d == 1:
        return rref_prime(np.array(M, dtype=np.int64).reshape(len(M), n), F.q)
    a, mul, neg = F._add, F._mul, F._neg
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [mul[inv][x] for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = neg[M[i][c]]
                mf = mul[f]
                M[i] = [a[x][mf[y]] for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(F: GF, rows) -> int:
    return len(rref(F, rows)[0])


def nullspace(F: GF, M: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of ``{v : M v = 0}`` (column vectors of length ncols)."""
    R, piv = rref(F, M, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for row, pc in zip(R, piv):
            v[pc] = F.neg(row[fcol])
        basis.append(v)
    return basis


def mat_inv(F: GF, A) -> Matrix:
    n = len(A)
    aug = [list(r) + identity(n)[i] for i, r in enumerate(A)]
    R, piv = rref(F, aug, 2 * n)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise SingularSystem("matrix is singular")
    return [r[n:] for r in R]


def det(F: GF, A) -> int:
    M = [list(r) for r in A]
    n = len(M)
    out = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            out = F.neg(out)
        out = F.mul(out, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.mul(M[i][c], inv)
                M[i] = vec_sub(F, M[i], vec_scale(F, f, M[c]))
    return out


def solve(F: GF, A, b) -> Vector:
    """Unique solution of ``A x = b`` for square invertible ``A``."""
    return mat_vec(F, mat_inv(F, A), b)


# ---------------------------------------------------------------------------
# subspaces

@dataclass(frozen=True)
class Subspace:
    """A subspace of ``F^n`` held by its reduced echelon basis.

    Equal subspaces have identical bases, so ``==`` is exact subspace
    equality.
    """

    field: GF
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, F: GF, n: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        R, _ = rref(F, [v for v in vectors if any(v)], n)
        return cls(F, n, tuple(tuple(r) for r in R))

    @classmethod
    def zero(cls, F: GF, n: int) -> "Subspace":
        return cls(F, n, ())

    @classmethod
    def full(cls, F: GF, n: int) -> "Subspace":
        return cls(F, n, tuple(tuple(r) for r in identity(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.n, self.basis + other.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.n)
        F = self.field
        # a.U = b.W  <=>  (a, b) in the left kernel of [U; -W]
        stacked = [list(r) for r in self.basis] + [[F.neg(x) for x in r] for r in other.basis]
        coeffs = nullspace(F, transpose(stacked), len(stacked))
        k = self.dim
        vecs = []
        for c in coeffs:
            v = [0] * self.n
            for ci, row in zip(c[:k], self.basis):
                if ci:
                    v = vec_add(F, v, vec_scale(F, ci, row))
            vecs.append(v)
        return Subspace.span(F, self.n, vecs)

    def __contains__(self, v) -> bool:
        return Subspace.span(self.field, self.n, self.basis + (tuple(v),)).dim == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return (self + other).dim == other.dim

    def image(self, M) -> "Subspace":
        return Subspace.span(self.field, self.n, [mat_vec(self.field, M, b) for b in self.basis])

    def to_list(self) -> list[list[int]]:
        return [list(b) for b in self.basis]


def kernel_of(F: GF, M, n: int) -> Subspace:
    return Subspace.span(F, n, nullspace(F, M, n))


def fixed_space(F: GF, mats: Iterable, n: int) -> Subspace:
    """Common fixed vectors of the given matrices: kernel of stacked (M - I)."""
    rows = []
    I = identity(n)
    for M in mats:
        rows.extend(mat_sub(F, M, I))
    if not rows:
        return Subspace.full(F, n)
    return kernel_of(F, rows, n)
