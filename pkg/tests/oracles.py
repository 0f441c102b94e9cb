"""Independent brute-force oracles.

Nothing here imports the package's algorithms: these recompute from
Cayley tables and structure constants with plain Python so that tests can
compare two implementations.
"""

from __future__ import annotations

from itertools import product


def _closure(table, gens) -> frozenset:
    S = {0}
    frontier = list(gens)
    S.update(gens)
    while frontier:
        new = []
        for x in frontier:
            for y in list(S):
                for z in (table[x][y], table[y][x]):
                    if z not in S:
                        S.add(z)
                        new.append(z)
        frontier = new
    return frozenset(S)


def _inverse(table):
    n = len(table)
    return [next(y for y in range(n) if table[x][y] == 0) for x in range(n)]


def nilpotency_class(table) -> tuple[int | None, list[int]]:
    """(class or None, orders of the series) by full commutator closure."""
    n = len(table)
    inv = _inverse(table)

    def comm(x, y):
        return table[table[inv[x]][inv[y]]][table[x][y]]

    cur = frozenset(range(n))
    orders = [n]
    while True:
        nxt = _closure(table, {comm(x, g) for x in cur for g in range(n)})
        if nxt == cur:
            return (len(orders) - 1 if len(cur) == 1 else None), orders
        cur = nxt
        orders.append(len(cur))
        if len(cur) == 1:
            return len(orders) - 1, orders


def subgroup_closure(table, gens) -> frozenset:
    return _closure(table, set(gens))


# ---------------------------------------------------------------------------
# linear algebra over a prime field, pure Python

def rank_mod(rows, q: int) -> int:
    M = [list(r) for r in rows if any(v % q for v in r)]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] % q), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, q)
        M[r] = [v * inv % q for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] % q:
                f = M[i][c]
                M[i] = [(a - f * b) % q for a, b in zip(M[i], M[r])]
        r += 1
    return r


def basis_mod(rows, q: int) -> list[list[int]]:
    """A basis (greedy subset) of the span."""
    out: list[list[int]] = []
    for r in rows:
        if rank_mod(out + [list(r)], q) > len(out):
            out.append([v % q for v in r])
    return out


def bracket(C, x, y, q):
    n = len(x)
    return [sum(C[i][j][k] * x[i] * y[j] for i in range(n) for j in range(n)) % q for k in range(n)]


def span_bracket(C, X, Y, q):
    return basis_mod([bracket(C, x, y, q) for x in X for y in Y], q)


def lie_class(C, q, limit=64) -> int | None:
    n = len(C)
    cur = [[int(i == j) for j in range(n)] for i in range(n)]
    full = cur
    for c in range(1, limit + 1):
        nxt = span_bracket(C, cur, full, q)
        if not nxt:
            return c
        if len(nxt) == len(cur):
            return None
        cur = nxt
    return None


def eigenspace(M, lam, q):
    """Kernel of M - lam I by brute force over all vectors (tiny dims)."""
    n = len(M)
    vecs = []
    for v in product(range(q), repeat=n):
        w = [sum(M[i][j] * v[j] for j in range(n)) % q for i in range(n)]
        if all((w[i] - lam * v[i]) % q == 0 for i in range(n)):
            vecs.append(list(v))
    return basis_mod(vecs, q)


def intersect(X, Y, q):
    """Intersection via enumeration of the (small) span of X."""
    if not X or not Y:
        return []
    vecs = []
    for coeffs in product(range(q), repeat=len(X)):
        v = [sum(c * x[k] for c, x in zip(coeffs, X)) % q for k in range(len(X[0]))]
        if rank_mod(Y + [v], q) == len(Y):
            vecs.append(v)
    return basis_mod(vecs, q)


def minimal_u(C, comps, q, cap):
    """Smallest u with [L, L_0, ..., L_0] (u copies) = 0."""
    n = len(C)
    X = [[int(i == j) for j in range(n)] for i in range(n)]
    for u in range(cap + 1):
        if not X:
            return u
        X = span_bracket(C, X, comps[0], q)
    return None


def minimal_v(C, comps, q, cap):
    n = len(C)
    full = [[int(i == j) for j in range(n)] for i in range(n)]
    D = span_bracket(C, full, full, q)
    D0 = intersect(D, comps[0], q)
    best = 0
    for a in range(len(comps)):
        X, found = D0, None
        for v in range(cap + 1):
            if not X:
                found = v
                break
            X = span_bracket(C, X, comps[a], q)
        if found is None:
            return None
        best = max(best, found)
    return best


# ---------------------------------------------------------------------------
# free Lie algebra dimensions

def mobius(n: int) -> int:
    m, k, p = n, 0, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            k += 1
        p += 1
    if m > 1:
        k += 1
    return -1 if k % 2 else 1


def witt_dimension(k: int, n: int) -> int:
    """Dimension of the degree-n part of the free Lie algebra on k generators."""
    return sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


# ---------------------------------------------------------------------------
# GF(2^4) by explicit polynomial arithmetic

def gf16_mul(a: int, b: int) -> int:
    """Carry-less product reduced by x^4 + x + 1; bit i = coefficient of x^i."""
    r = 0
    for i in range(4):
        if b >> i & 1:
            r ^= a << i
    for deg in (7, 6, 5, 4):
        if r >> deg & 1:
            r ^= 0b10011 << (deg - 4)
    return r
