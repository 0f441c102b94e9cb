"""Finite groups as Cayley tables.

Elements are the integers ``0 .. n-1`` and the identity is always ``0``.
Everything here is exhaustive and exact; the size caps exist because most
searches are polynomial in the order with a large exponent.
"""

from __future__ import annotations

import math
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotNormal,
    TooLarge,
)

DEFAULT_CAP = 4096
ENUMERATION_CAP = 512


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == [n]


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k`` (k >= 1), or None."""
    ps = prime_factors(n)
    if len(ps) != 1:
        return None
    p = ps[0]
    k = 0
    while n > 1:
        n //= p
        k += 1
    return p, k


class FiniteGroup:
    """A validated group given by its Cayley table.

    ``table[i, j]`` is the index of ``i*j``.  Instances are treated as
    immutable; derived data is cached on first use.  ``labels`` optionally
    records the natural coordinates each index was built from.
    """

    identity = 0

    def __init__(self, table, name: str = "", labels: Sequence | None = None):
        arr = np.array(table, dtype=np.int64)
        arr.flags.writeable = False
        self.table = arr
        self.order = int(arr.shape[0])
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        self.rows: list[list[int]] = arr.tolist()

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    # element arithmetic -------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    @cached_property
    def inverses(self) -> list[int]:
        return [int(i) for i in np.argmin(self.table, axis=1)] if self.order else []

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, x: int, g: int) -> int:
        """``x^g = g^-1 x g``."""
        r = self.rows
        return r[r[self.inverses[g]][x]][g]

    def comm(self, x: int, y: int) -> int:
        """``[x, y] = x^-1 y^-1 x y``."""
        r = self.rows
        inv = self.inverses
        return r[r[r[inv[x]][inv[y]]][x]][y]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverses[x], -k
        out, base = 0, x
        r = self.rows
        while k:
            if k & 1:
                out = r[out][base]
            base = r[base][base]
            k >>= 1
        return out

    @cached_property
    def element_orders(self) -> list[int]:
        orders = [0] * self.order
        r = self.rows
        for x in range(self.order):
            y, k = x, 1
            while y != 0:
                y = r[y][x]
                k += 1
            orders[x] = k
        return orders

    @cached_property
    def label_index(self) -> dict:
        if self.labels is None:
            raise ValueError(f"{self!r} carries no element labels")
        return {lab: i for i, lab in enumerate(self.labels)}

    def index_of(self, label) -> int:
        return self.label_index[label]

    # whole-group views --------------------------------------------------
    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0])

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return self.whole.gens

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))


class Subgroup:
    """A subset of a parent group closed under product and inverse."""

    __slots__ = ("parent", "elements", "__dict__")

    def __init__(self, parent: FiniteGroup, elements: Iterable[int]):
        self.parent = parent
        self.elements = frozenset(int(e) for e in elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(self.sorted)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.name or self.parent.order})"

    @cached_property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))

    @cached_property
    def gens(self) -> tuple[int, ...]:
        """A deterministic, irredundant generating set."""
        G = self.parent
        chosen: list[int] = []
        current = {0}
        for x in self.sorted:
            if x not in current:
                chosen.append(x)
                current = closure(G, chosen)
                if len(current) == self.order:
                    break
        i = 0
        while i < len(chosen) and len(chosen) > 1:
            trial = chosen[:i] + chosen[i + 1:]
            if len(closure(G, trial)) == self.order:
                chosen = trial
            else:
                i += 1
        return tuple(chosen)

    @cached_property
    def is_abelian(self) -> bool:
        r = self.parent.rows
        g = self.gens
        return all(r[a][b] == r[b][a] for a in g for b in g)

    def as_group(self, name: str | None = None) -> tuple[FiniteGroup, list[int]]:
        """Relabel as a standalone group; returns it with the embedding map."""
        elems = list(self.sorted)
        pos = {e: i for i, e in enumerate(elems)}
        r = self.parent.rows
        table = [[pos[r[a][b]] for b in elems] for a in elems]
        labels = None
        if self.parent.labels is not None:
            labels = [self.parent.labels[e] for e in elems]
        H = FiniteGroup(table, name or f"sub({self.parent.name})", labels)
        return H, elems


class GroupHom:
    """A homomorphism given by its image array; checked on construction."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Sequence[int], check: bool = True):
        self.source = source
        self.target = target
        self.images = tuple(int(i) for i in images)
        if check:
            img = np.asarray(self.images)
            lhs = img[source.table]
            rhs = target.table[img[:, None], img[None, :]]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                x, y = (int(v) for v in bad[0])
                raise ValueError(f"not a homomorphism at ({x}, {y})")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, [x for x, y in enumerate(self.images) if y == 0])

    def image(self) -> Subgroup:
        return Subgroup(self.target, set(self.images))

    def preimage(self, S: Iterable[int]) -> Subgroup:
        s = set(S)
        return Subgroup(self.source, [x for x, y in enumerate(self.images) if y in s])


# ---------------------------------------------------------------------------
# construction and validation

LIGHT_THRESHOLD = 512


def _light_generators(T: np.ndarray) -> list[int]:
    """Greedy generating set for Light's associativity test.

    If ``(g x) y = g (x y)`` for all x, y and every g in a set whose
    left-normed products reach every element, the operation is associative.
    """
    n = T.shape[0]
    reached = np.zeros(n, dtype=bool)
    reached[0] = True
    gens: list[int] = []
    while not reached.all():
        g = int(np.argmin(reached))
        gens.append(g)
        frontier = np.nonzero(reached)[0]
        while len(frontier):
            nxt = T[np.ix_(frontier, gens)].ravel()
            nxt = np.unique(nxt[~reached[nxt]])
            reached[nxt] = True
            frontier = nxt
    return gens


def validate_group(table, name: str = "", labels: Sequence | None = None) -> FiniteGroup:
    """Check the group axioms exhaustively and return the group.

    The identity is moved to index 0 (swapping it with whatever was there).
    """
    T = np.array(table, dtype=np.int64)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise ValueError("table must be a non-empty square array")
    n = T.shape[0]
    if T.min() < 0 or T.max() >= n:
        raise ValueError("table entries out of range")
    ar = np.arange(n)
    e = None
    for cand in range(n):
        if np.array_equal(T[cand], ar) and np.array_equal(T[:, cand], ar):
            e = cand
            break
    if e is None:
        raise NoIdentity()
    if e != 0:
        perm = ar.copy()
        perm[0], perm[e] = e, 0
        # new index i corresponds to old index perm[i]; perm is an involution
        T = perm[T[np.ix_(perm, perm)]]
        if labels is not None:
            labels = [labels[int(perm[i])] for i in range(n)]
    for i in (range(n) if n <= LIGHT_THRESHOLD else _light_generators(T)):
        left = T[T[i]]
        right = T[i][T]
        if not np.array_equal(left, right):
            j, k = (int(v) for v in np.argwhere(left != right)[0])
            raise NotAssociative(i, j, k)
    for i in range(n):
        js = np.nonzero(T[i] == 0)[0]
        if not any(T[j, i] == 0 for j in js):
            raise NoInverse(i)
    return FiniteGroup(T, name, labels)


def from_function(elements: Sequence, mul, name: str = "") -> FiniteGroup:
    """Build a group from an element list (identity first) and a product."""
    pos = {e: i for i, e in enumerate(elements)}
    table = [[pos[mul(a, b)] for b in elements] for a in elements]
    return validate_group(table, name, list(elements))


# ---------------------------------------------------------------------------
# subgroups

def closure(G: FiniteGroup, gens: Iterable[int], limit: int | None = None) -> set[int] | None:
    """Elements of the subgroup generated by ``gens``.

    With ``limit`` set, returns None as soon as the closure exceeds it.
    """
    gens = [g for g in dict.fromkeys(gens) if g != 0]
    seen = {0}
    queue = [0]
    r = G.rows
    for x in queue:
        row = r[x]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
                if limit is not None and len(seen) > limit:
                    return None
    return seen


def subgroup_generated(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    return Subgroup(G, closure(G, S))


def join(G: FiniteGroup, *subgroups: Subgroup) -> Subgroup:
    gens: list[int] = []
    for H in subgroups:
        gens.extend(H.gens)
    return subgroup_generated(G, gens)


def set_product(G: FiniteGroup, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    r = G.rows
    B = list(B)
    return frozenset(r[a][b] for a in A for b in B)


def normality_witness(G: FiniteGroup, H: Subgroup) -> tuple[int, int] | None:
    """A pair ``(g, h)`` with ``h^g`` outside ``H``, or None if normal."""
    for g in G.generators:
        for h in H.gens:
            if G.conj(h, g) not in H.elements:
                return g, h
    return None


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    return normality_witness(G, H) is None


def invariant_closure(G: FiniteGroup, seeds: Iterable[int], maps: Sequence[Sequence[int]]) -> Subgroup:
    """Smallest subgroup containing ``seeds`` and invariant under each map."""
    gens = list(seeds)
    H = subgroup_generated(G, gens)
    while True:
        new = []
        for h in H.gens:
            for m in maps:
                y = int(m[h])
                if y not in H.elements and y not in new:
                    new.append(y)
        if not new:
            return H
        H = subgroup_generated(G, list(H.gens) + new)


def conjugation_maps(G: FiniteGroup) -> list[list[int]]:
    return [[G.conj(x, g) for x in range(G.order)] for g in G.generators]


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    return invariant_closure(G, S, conjugation_maps(G))


def centralizer(G: FiniteGroup, S: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    S = list(S)
    r = G.rows
    pool = within.sorted if within is not None else range(G.order)
    return Subgroup(G, [x for x in pool if all(r[x][s] == r[s][x] for s in S)])


def center(G: FiniteGroup) -> Subgroup:
    return centralizer(G, G.generators)


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    gens = H.gens
    return Subgroup(G, [g for g in range(G.order) if all(G.conj(h, g) in H.elements for h in gens)])


def conjugate_subgroup(G: FiniteGroup, H: Subgroup, g: int) -> Subgroup:
    return Subgroup(G, [G.conj(h, g) for h in H.elements])


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]`` for subgroups normalising each other (normal closure taken)."""
    gens = {G.comm(a, b) for a in A.gens for b in B.gens}
    return invariant_closure(
        G, gens, [[G.conj(x, g) for x in range(G.order)] for g in set(A.gens) | set(B.gens)]
    )


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    return commutator_subgroup(G, G.whole, G.whole)


def is_cyclic(H: Subgroup) -> bool:
    orders = H.parent.element_orders
    return any(orders[x] == H.order for x in H.elements)


def is_elementary_abelian(H: Subgroup, p: int) -> bool:
    orders = H.parent.element_orders
    return H.is_abelian and all(orders[x] in (1, p) for x in H.elements)


# ---------------------------------------------------------------------------
# series

def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """``[gamma_1, gamma_2, ...]`` up to the first repeated term.

    ``gamma_{i+1}`` is the normal closure of commutators of generators of
    ``gamma_i`` with generators of ``G``.
    """
    series = [G.whole]
    cmaps = conjugation_maps(G)
    while True:
        cur = series[-1]
        gens = {G.comm(x, g) for x in cur.gens for g in G.generators}
        nxt = invariant_closure(G, gens, cmaps)
        if nxt == cur:
            return series
        series.append(nxt)


def nilpotency_class(G: FiniteGroup) -> int | None:
    """Class of a nilpotent group (0 for the trivial group), else None."""
    series = lower_central_series(G)
    if series[-1].order != 1:
        return None
    return len(series) - 1


def is_nilpotent(G: FiniteGroup) -> bool:
    return lower_central_series(G)[-1].order == 1


def gamma_infinity(G: FiniteGroup) -> Subgroup:
    return lower_central_series(G)[-1]


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    series = [G.whole]
    while True:
        cur = series[-1]
        nxt = commutator_subgroup(G, cur, cur)
        if nxt == cur:
            return series
        series.append(nxt)


def upper_central_series(G: FiniteGroup) -> list[Subgroup]:
    series = [G.trivial]
    while True:
        Q, proj = quotient_group(G, series[-1])
        nxt = proj.preimage(center(Q).elements)
        if nxt == series[-1]:
            return series
        series.append(nxt)


# ---------------------------------------------------------------------------
# quotients

def quotient_group(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Cayley table on cosets of ``N`` plus the projection.

    Cosets are numbered by their smallest element, so the identity coset is 0.
    """
    w = normality_witness(G, N)
    if w is not None:
        raise NotNormal(*w)
    r = G.rows
    coset_of = [-1] * G.order
    reps: list[int] = []
    Nl = N.sorted
    for x in range(G.order):
        if coset_of[x] < 0:
            cid = len(reps)
            reps.append(x)
            for n in Nl:
                coset_of[r[x][n]] = cid
    table = [[coset_of[r[a][b]] for b in reps] for a in reps]
    Q = FiniteGroup(table, f"{G.name}/N" if G.name else "", None)
    return Q, GroupHom(G, Q, coset_of, check=False)


# ---------------------------------------------------------------------------
# orders, Sylow, Fitting

def element_order(G: FiniteGroup, x: int) -> int:
    return G.element_orders[x]


def exponent(G: FiniteGroup) -> int:
    return math.lcm(*G.element_orders)


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def sylow_subgroup(G: FiniteGroup, p: int, within: Subgroup | None = None) -> Subgroup:
    """A Sylow ``p``-subgroup of ``within`` (default: all of ``G``).

    Grows a p-subgroup one element at a time, always taking the smallest
    p-element of the normaliser that keeps the closure a p-group.  Such an
    element exists until the Sylow order is reached, so no backtracking is
    ever needed.
    """
    ambient = within if within is not None else G.whole
    target = p_part(ambient.order, p)
    orders = G.element_orders
    H = G.trivial
    pool = [x for x in ambient.sorted if x and _is_p_power(orders[x], p)]
    while H.order < target:
        for x in pool:
            if x in H.elements:
                continue
            if not all(G.conj(h, x) in H.elements for h in H.gens):
                continue
            els = closure(G, list(H.gens) + [x], limit=target)
            if els is not None and _is_p_power(len(els), p):
                H = Subgroup(G, els)
                break
        else:  # pragma: no cover - impossible by Sylow theory
            raise RuntimeError("Sylow growth stalled")
    return H


def sylow_conjugates(G: FiniteGroup, P: Subgroup) -> list[Subgroup]:
    seen: dict[frozenset, Subgroup] = {}
    for g in range(G.order):
        C = conjugate_subgroup(G, P, g)
        seen.setdefault(C.elements, C)
    return sorted(seen.values(), key=lambda S: S.sorted)


def normal_core(G: FiniteGroup, H: Subgroup) -> Subgroup:
    keep = [x for x in H.sorted if all(G.conj(x, g) in H.elements for g in range(G.order))]
    return Subgroup(G, keep)


def p_core(G: FiniteGroup, p: int) -> Subgroup:
    """``O_p(G)``: the largest normal p-subgroup."""
    if G.order % p:
        return G.trivial
    return normal_core(G, sylow_subgroup(G, p))


def fitting_subgroup(G: FiniteGroup, level: int = 1, cap: int = ENUMERATION_CAP) -> Subgroup:
    if G.order > cap:
        raise TooLarge(f"order {G.order} exceeds cap {cap}")
    if level not in (1, 2):
        raise ValueError("level must be 1 or 2")
    cores = [p_core(G, p) for p in prime_factors(G.order)]
    F1 = join(G, *cores) if cores else G.trivial
    if level == 1:
        return F1
    Q, proj = quotient_group(G, F1)
    FQ = fitting_subgroup(Q, 1, cap)
    return proj.preimage(FQ.elements)


# ---------------------------------------------------------------------------
# enumeration helpers

def cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    seen: dict[frozenset, Subgroup] = {}
    for x in range(G.order):
        H = subgroup_generated(G, [x])
        seen.setdefault(H.elements, H)
    return sorted(seen.values(), key=lambda S: (S.order, S.sorted))


def invariant_subgroups(
    G: FiniteGroup, maps: Sequence[Sequence[int]], cap: int = ENUMERATION_CAP
) -> list[Subgroup]:
    """All subgroups invariant under the given maps.

    Every such subgroup is a join of invariant closures of single elements,
    so the lattice is generated from those by repeated joins.
    """
    if G.order > cap:
        raise TooLarge(f"order {G.order} exceeds cap {cap}")
    atoms: dict[frozenset, Subgroup] = {}
    for x in range(G.order):
        H = invariant_closure(G, [x], maps)
        atoms.setdefault(H.elements, H)
    atom_list = list(atoms.values())
    found = dict(atoms)
    frontier = list(atom_list)
    while frontier:
        nxt = []
        for N in frontier:
            for B in atom_list:
                if B.elements <= N.elements:
                    continue
                J = invariant_closure(G, list(N.gens) + list(B.gens), maps)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.sorted))


def normal_subgroups(G: FiniteGroup, cap: int = ENUMERATION_CAP) -> list[Subgroup]:
    return invariant_subgroups(G, conjugation_maps(G), cap)


# ---------------------------------------------------------------------------
# Cayley table text format

def dumps_cayley(G: FiniteGroup) -> str:
    lines = [str(G.order)]
    lines.extend(" ".join(str(v) for v in row) for row in G.rows)
    if G.name:
        lines.append(f"# {G.name}")
    return "\n".join(lines) + "\n"


def loads_cayley(text: str) -> FiniteGroup:
    lines = text.splitlines()
    name = ""
    if lines and lines[-1].startswith("#"):
        name = lines.pop()[1:].strip()
    n = int(lines[0])
    rows = [[int(v) for v in line.split()] for line in lines[1:n + 1]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("malformed Cayley table file")
    return validate_group(rows, name)


def save_cayley(G: FiniteGroup, path) -> None:
    Path(path).write_text(dumps_cayley(G))


def load_cayley(path) -> FiniteGroup:
    return loads_cayley(Path(path).read_text())
