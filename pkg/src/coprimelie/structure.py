"""q-group and Frobenius-group structure: metacyclicity, power subgroups,
small exponent-q subgroups, supersolvability, automorphism groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .actions import Automorphism
from .errors import (
    FixedPointWitness,
    KernelNotNormal,
    NotAQGroup,
    NotComplement,
    NotFound,
    NotNilpotent,
    TooLarge,
)
from .groups import (
    ENUMERATION_CAP,
    FiniteGroup,
    Subgroup,
    center,
    closure,
    cyclic_subgroups,
    derived_subgroup,
    exponent,
    is_cyclic,
    is_elementary_abelian,
    is_nilpotent,
    is_normal,
    lower_central_series,
    normal_subgroups,
    normality_witness,
    prime_factors,
    prime_power,
    quotient_group,
    set_product,
    subgroup_generated,
    sylow_subgroup,
)
from .report import ScenarioReport

AUTOMORPHISM_CAP = 256


def _require_q_group(G: FiniteGroup, q: int) -> None:
    if G.order == 1:
        return
    pp = prime_power(G.order)
    if pp is None or pp[0] != q:
        raise NotAQGroup(f"|G| = {G.order} is not a power of {q}")


def agemo(G: FiniteGroup, q: int) -> Subgroup:
    """``G^q``: generated by all q-th powers."""
    return subgroup_generated(G, {G.power(x, q) for x in range(G.order)})


def omega1(G: FiniteGroup, q: int) -> Subgroup:
    """``Omega_1(G)``: generated by the elements with ``x^q = 1``."""
    _require_q_group(G, q)
    return subgroup_generated(G, [x for x in range(G.order) if G.power(x, q) == 0])


# ---------------------------------------------------------------------------
# metacyclic groups

@dataclass
class MetacyclicVerdict:
    metacyclic: bool
    kernel: Subgroup | None = None  # cyclic normal subgroup with cyclic quotient
    top: int | None = None  # element generating G modulo kernel
    index_test: bool | None = None  # [G : G^q] <= q^2, odd q-groups only

    def __bool__(self):
        return self.metacyclic


def _order_modulo(G: FiniteGroup, g: int, N: Subgroup) -> int:
    x, k = g, 1
    while x not in N.elements:
        x = G.rows[x][g]
        k += 1
    return k


def is_metacyclic(G: FiniteGroup) -> MetacyclicVerdict:
    """Definitional test: a cyclic normal N with G/N cyclic.

    For q-groups with q odd the index criterion ``[G : G^q] <= q^2`` is also
    evaluated and must agree.
    """
    verdict = MetacyclicVerdict(False)
    for N in cyclic_subgroups(G):
        if not is_normal(G, N):
            continue
        need = G.order // N.order
        for g in range(G.order):
            if _order_modulo(G, g, N) == need:
                verdict = MetacyclicVerdict(True, N, g)
                break
        if verdict.metacyclic:
            break
    pp = prime_power(G.order)
    if pp is not None and pp[0] % 2 == 1:
        q = pp[0]
        verdict.index_test = G.order // agemo(G, q).order <= q * q
        assert verdict.index_test == verdict.metacyclic, "index criterion disagrees with definition"
    return verdict


def check_regularity_identity(G: FiniteGroup, q: int) -> ScenarioReport:
    """Compare ``|G / G^q|`` with ``|Omega_1(G)|`` for ``|G| <= q^q``."""
    _require_q_group(G, q)
    if G.order > q ** q:
        raise TooLarge(f"|G| = {G.order} exceeds q^q = {q ** q}")
    lhs = G.order // agemo(G, q).order
    rhs = omega1(G, q).order
    rep = ScenarioReport("regularity_identity", {"group": G.name, "q": q})
    rep.check("quotient_by_agemo_equals_omega1", lhs == rhs, {"sizes": [lhs, rhs]},
              observed={"|G/G^q|": lhs, "|Omega_1|": rhs})
    return rep


def find_exponent_q_cube(A: FiniteGroup, q: int) -> Subgroup:
    """First subgroup of order ``q^3`` and exponent ``q``.

    Search order: sorted generator tuples ``a < b < c`` of order-q elements,
    each pair tried before its extensions, skipping generators already in
    the span.  Raises NotFound after exhausting all candidates.
    """
    _require_q_group(A, q)
    target = q ** 3
    orders = A.element_orders
    els = [x for x in range(A.order) if orders[x] == q]
    seen: set[frozenset] = set()

    def good(S):
        return len(S) == target and all(orders[x] in (1, q) for x in S)

    for i, a in enumerate(els):
        Ha = closure(A, [a])
        for j in range(i + 1, len(els)):
            b = els[j]
            if b in Ha:
                continue
            H2 = closure(A, [a, b], limit=target)
            if H2 is None:
                continue
            key = frozenset(H2)
            if key in seen:
                continue
            seen.add(key)
            if any(orders[x] not in (1, q) for x in H2):
                continue
            if len(H2) == target:
                return Subgroup(A, H2)
            for c in els[j + 1:]:
                if c in H2:
                    continue
                H3 = closure(A, [a, b, c], limit=target)
                if H3 is not None and good(H3):
                    return Subgroup(A, H3)
    raise NotFound(f"no subgroup of order {q}^3 and exponent {q}")


# ---------------------------------------------------------------------------
# Frobenius groups

@dataclass(frozen=True)
class FrobeniusStructure:
    whole: FiniteGroup
    kernel: Subgroup
    complement: Subgroup

    @property
    def complement_generator(self) -> int:
        """Smallest element generating the complement (which must be cyclic)."""
        orders = self.whole.element_orders
        for h in self.complement.sorted:
            if orders[h] == self.complement.order:
                return h
        raise ValueError("complement is not cyclic")


def check_frobenius(whole: FiniteGroup, kernel: Subgroup, complement: Subgroup) -> FrobeniusStructure:
    w = normality_witness(whole, kernel)
    if w is not None:
        raise KernelNotNormal(f"kernel not normal: conjugator {w[0]}")
    if kernel.elements & complement.elements != {0} or kernel.order * complement.order != whole.order:
        raise NotComplement("subgroups do not form a semidirect decomposition")
    for h in complement.sorted[1:]:
        for f in kernel.sorted[1:]:
            if whole.conj(f, h) == f:
                raise FixedPointWitness(h, f)
    return FrobeniusStructure(whole, kernel, complement)


def frobenius_from_parts(G: FiniteGroup) -> FrobeniusStructure:
    """Use the kernel/complement recorded by ``semidirect_product``."""
    parts = getattr(G, "parts", None)
    if parts is None:
        raise ValueError(f"{G.name} was not built as a semidirect product")
    return check_frobenius(G, Subgroup(G, parts["kernel"]), Subgroup(G, parts["complement"]))


def is_supersolvable(G: FiniteGroup, cap: int = ENUMERATION_CAP) -> tuple[bool, list[Subgroup]]:
    """Greedy chief series with prime-order factors.

    Any normal subgroup of prime order may be chosen at each step, because
    quotients of supersolvable groups stay supersolvable.  Returns the
    verdict and the chain of normal subgroups reached (as subgroups of G).
    """
    if G.order > cap:
        raise TooLarge(f"order {G.order} exceeds cap {cap}")
    chain = [G.trivial]
    cur = G.trivial
    while cur.order < G.order:
        Q, proj = quotient_group(G, cur)
        orders = Q.element_orders
        step = None
        for x in range(1, Q.order):
            if prime_power(orders[x]) and prime_power(orders[x])[1] == 1:
                C = subgroup_generated(Q, [x])
                if is_normal(Q, C):
                    step = C
                    break
        if step is None:
            return False, chain
        cur = proj.preimage(step.elements)
        chain.append(cur)
    return True, chain


def find_normal_rank2(F) -> Subgroup:
    """First elementary abelian ``p^2`` subgroup normal in nilpotent ``F``.

    ``F`` may be a group or a subgroup; the result lives in the same parent.
    Primes are tried in increasing order and pairs ``x < y`` of order-p
    elements in lexicographic order.
    """
    if isinstance(F, Subgroup):
        H, emb = F.as_group()
        found = find_normal_rank2(H)
        return Subgroup(F.parent, [emb[x] for x in found.elements])
    if not is_nilpotent(F):
        raise NotNilpotent(f"{F.name} is not nilpotent")
    for p in prime_factors(F.order):
        P = sylow_subgroup(F, p)
        orders = F.element_orders
        els = [x for x in P.sorted if orders[x] == p]
        seen: set[frozenset] = set()
        for i, x in enumerate(els):
            for y in els[i + 1:]:
                if F.rows[x][y] != F.rows[y][x]:
                    continue
                E = closure(F, [x, y], limit=p * p)
                if E is None or len(E) != p * p:
                    continue
                key = frozenset(E)
                if key in seen:
                    continue
                seen.add(key)
                S = Subgroup(F, E)
                if is_normal(F, S):
                    return S
    raise NotFound("no normal elementary abelian subgroup of rank 2")


# ---------------------------------------------------------------------------
# automorphisms

def _extend_partial(G: FiniteGroup, gens: list[int], imgs: list[int]) -> dict[int, int] | None:
    """Extend generator images to a map on ``<gens>``; None if inconsistent
    or not injective."""
    r = G.rows
    phi = {0: 0}
    queue = [0]
    used = {0}
    for x in queue:
        px = phi[x]
        for g, im in zip(gens, imgs):
            y = r[x][g]
            val = r[px][im]
            got = phi.get(y)
            if got is None:
                if val in used:
                    return None
                phi[y] = val
                used.add(val)
                queue.append(y)
            elif got != val:
                return None
    return phi


def iter_automorphisms(G: FiniteGroup, cap: int = AUTOMORPHISM_CAP) -> Iterator[Automorphism]:
    """Backtracking over generator images, yielding every automorphism.

    Images of the i-th generator range over elements of the same order; a
    branch is cut as soon as the partial map on ``<g_1..g_i>`` fails to be
    a well-defined injective homomorphism.
    """
    if G.order > cap:
        raise TooLarge(f"order {G.order} exceeds automorphism cap {cap}")
    gens = list(G.generators)
    orders = G.element_orders
    cands = [[x for x in range(G.order) if orders[x] == orders[g]] for g in gens]

    def rec(i, imgs):
        if i == len(gens):
            phi = _extend_partial(G, gens, imgs)
            if phi is not None and len(phi) == G.order:
                yield Automorphism(G, [phi[x] for x in range(G.order)], check=False)
            return
        for c in cands[i]:
            trial = imgs + [c]
            if _extend_partial(G, gens[: i + 1], trial) is not None:
                yield from rec(i + 1, trial)

    if not gens:
        yield Automorphism(G, [0], check=False)
        return
    yield from rec(0, [])


def automorphism_group(G: FiniteGroup, cap: int = AUTOMORPHISM_CAP) -> list[Automorphism]:
    return list(iter_automorphisms(G, cap))


def abelian_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every abelian subgroup, grown from cyclic ones by adjoining
    centralising elements."""
    found: dict[frozenset, Subgroup] = {}
    frontier = cyclic_subgroups(G)
    for H in frontier:
        found.setdefault(H.elements, H)
    r = G.rows
    while frontier:
        nxt = []
        for H in frontier:
            for x in range(G.order):
                if x in H.elements or any(r[x][h] != r[h][x] for h in H.gens):
                    continue
                J = subgroup_generated(G, list(H.gens) + [x])
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.sorted))


def _is_extraspecial(G: FiniteGroup, E: Subgroup, q: int) -> bool:
    H, _ = E.as_group()
    Z = center(H)
    D = derived_subgroup(H)
    frattini = subgroup_generated(H, list(D.elements) + [H.power(x, q) for x in range(H.order)])
    return Z.order == q and Z == D == frattini


def check_no_noncyclic_char_abelian(Q: FiniteGroup, q: int, cap: int = AUTOMORPHISM_CAP) -> ScenarioReport:
    """Test the hypothesis "no noncyclic characteristic abelian subgroup"
    and, when it holds, verify ``Q = Z(Q) E`` with ``E`` extraspecial of
    exponent q (or ``E`` trivial for cyclic ``Q``)."""
    _require_q_group(Q, q)
    if Q.order > cap:
        raise TooLarge(f"order {Q.order} exceeds cap {cap}")
    rep = ScenarioReport("no_noncyclic_char_abelian", {"group": Q.name, "q": q})
    # subgroups that are characteristic by construction are tried first
    obvious = [Q.whole, center(Q), omega1(Q, q), agemo(Q, q), derived_subgroup(Q)]
    obvious += lower_central_series(Q)
    witness = next((S for S in obvious if S.is_abelian and not is_cyclic(S)), None)
    if witness is None:
        cands = [S for S in abelian_subgroups(Q) if not is_cyclic(S)]
        for aut in iter_automorphisms(Q, cap):
            p = aut.perm
            cands = [S for S in cands if all(int(p[g]) in S.elements for g in S.gens)]
            if not cands:
                break
        witness = cands[0] if cands else None
    if witness is not None:
        rep.add("hypothesis", "fail", role="hypothesis",
                witnesses={"characteristic_abelian": list(witness.sorted)},
                note="Q has a noncyclic characteristic abelian subgroup")
        rep.add("central_product_decomposition", "skip", role="conclusion", note="hypothesis false")
        return rep
    rep.add("hypothesis", "pass", role="hypothesis")
    Z = center(Q)
    if is_cyclic(Q.whole):
        rep.add("central_product_decomposition", "pass", role="conclusion",
                observed={"cyclic_part": Z.order, "extraspecial_part": 1}, note="degenerate: Q cyclic")
        return rep
    E = omega1(Q, q)
    ok_z = is_cyclic(Z)
    ok_e = _is_extraspecial(Q, E, q) and exponent(E.as_group()[0]) == q
    ok_prod = set_product(Q, Z.elements, E.elements) == Q.whole.elements
    ok_central = len(Z.elements & E.elements) == q
    ok = ok_z and ok_e and ok_prod and ok_central
    rep.check("central_product_decomposition", ok,
              {"center_cyclic": ok_z, "E_extraspecial_exponent_q": ok_e, "Z_times_E": ok_prod,
               "Z_meet_E_order_q": ok_central},
              role="conclusion",
              observed={"cyclic_part": Z.order, "extraspecial_part": E.order, "E_gens": list(E.gens)})
    return rep


def choose_Z(fs: FrobeniusStructure, p: int) -> Subgroup:
    """Smallest (by sorted elements) order-p subgroup of the kernel normal
    in the whole Frobenius group."""
    G = fs.whole
    if fs.kernel.order % p:
        raise NotFound(f"{p} does not divide the kernel order")
    orders = G.element_orders
    cands = {}
    for x in fs.kernel.sorted:
        if orders[x] == p:
            S = subgroup_generated(G, [x])
            cands.setdefault(S.elements, S)
    for S in sorted(cands.values(), key=lambda S: S.sorted):
        if is_normal(G, S):
            return S
    raise NotFound(f"no order-{p} subgroup of the kernel is normal")


# ---------------------------------------------------------------------------
# order-16 kernels

def order16_search(specs: list[str]) -> ScenarioReport:
    """Look for Frobenius kernels of order 16 that are non-metacyclic and
    have no subgroup of exponent 2 and order 8.

    For each candidate F the automorphisms of order 3, 5 or 15 acting
    without nontrivial fixed points are counted; those generate Frobenius
    complements ``<a>`` and hence Frobenius groups ``F x| <a>``.
    """
    from .catalog import construct_catalog_group

    rep = ScenarioReport("order16_search", {"groups": specs})
    hits = []
    for spec in specs:
        F = construct_catalog_group(spec)
        meta = bool(is_metacyclic(F))
        try:
            find_exponent_q_cube(F, 2)
            has_cube = True
        except NotFound:
            has_cube = False
        fpf = 0
        for aut in iter_automorphisms(F):
            o = aut.order
            if o in (3, 5, 15) and aut.fixed() == [0]:
                fpf += 1
        candidate = fpf > 0 and not meta and not has_cube
        if candidate:
            hits.append(spec)
        rep.add(f"kernel[{spec}]", "pass", observed={
            "fixed_point_free_automorphisms": fpf, "metacyclic": meta,
            "has_exponent2_order8": has_cube, "candidate": candidate})
    rep.add("candidates", "pass", observed={"found": hits},
            note="search only; no construction is asserted")
    return rep
