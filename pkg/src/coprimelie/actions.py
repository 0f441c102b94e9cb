"""Groups acting by automorphisms, fixed points, ``[G, A]`` and the
standard facts about coprime actions checked by exhaustion."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .catalog import check_automorphism, extend_to_hom
from .errors import NotCoprime, TooLarge
from .groups import (
    ENUMERATION_CAP,
    FiniteGroup,
    Subgroup,
    closure,
    conjugation_maps,
    invariant_subgroups,
    is_nilpotent,
    normality_witness,
    prime_factors,
    quotient_group,
    set_product,
    sylow_conjugates,
    sylow_subgroup,
    load_cayley,
)
from .report import SKIP, ABSTAIN, ScenarioReport


class Automorphism:
    """An automorphism of ``group`` stored as a permutation of indices."""

    def __init__(self, group: FiniteGroup, perm: Sequence[int], check: bool = True):
        self.group = group
        self.perm = np.asarray(perm, dtype=np.int64)
        self.perm.flags.writeable = False
        if check:
            check_automorphism(group, self.perm)

    def __call__(self, x: int) -> int:
        return int(self.perm[x])

    def __eq__(self, other):
        return isinstance(other, Automorphism) and np.array_equal(self.perm, other.perm)

    def __hash__(self):
        return hash(self.perm.tobytes())

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other`` (apply ``other`` first)."""
        return Automorphism(self.group, self.perm[other.perm], check=False)

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return Automorphism(self.group, inv, check=False)

    @property
    def order(self) -> int:
        p, k = self.perm, 1
        cur = p
        ident = np.arange(len(p))
        while not np.array_equal(cur, ident):
            cur = p[cur]
            k += 1
        return k

    def fixed(self) -> list[int]:
        return [int(x) for x in np.nonzero(self.perm == np.arange(len(self.perm)))[0]]


class ActionSetup:
    """``actor`` (A) acting on ``target`` (G) through ``rep``.

    ``rep[a]`` is the automorphism by which ``a`` acts; it must satisfy
    ``rep[a*b] = rep[a] o rep[b]``.  The coprime flag is always recomputed.
    """

    def __init__(self, actor: FiniteGroup, target: FiniteGroup, rep: Sequence, check: bool = True):
        self.actor = actor
        self.target = target
        perms = np.array([r.perm if isinstance(r, Automorphism) else r for r in rep], dtype=np.int64)
        if perms.shape != (actor.order, target.order):
            raise ValueError("need one permutation of the target per actor element")
        if check:
            for p in perms:
                check_automorphism(target, p)
            comp = perms[actor.table]
            for a in range(actor.order):
                bad = np.nonzero((comp[a] != perms[a][perms]).any(axis=1))[0]
                if len(bad):
                    raise ValueError(f"rep is not a homomorphism at ({a}, {int(bad[0])})")
        perms.flags.writeable = False
        self.perms = perms
        self.coprime = math.gcd(actor.order, target.order) == 1

    @classmethod
    def from_generators(cls, actor: FiniteGroup, target: FiniteGroup, images: dict[int, Sequence[int]]):
        for img in images.values():
            check_automorphism(target, img)
        return cls(actor, target, extend_to_hom(actor, images, target.order))

    def automorphism(self, a: int) -> Automorphism:
        return Automorphism(self.target, self.perms[a], check=False)

    def act(self, a: int, g: int) -> int:
        return int(self.perms[a, g])

    def restrict_actor(self, elements: Iterable[int]) -> list[np.ndarray]:
        return [self.perms[a] for a in elements]

    def is_trivial(self) -> bool:
        return bool((self.perms == np.arange(self.target.order)).all())


# ---------------------------------------------------------------------------
# JSON form: {"actor_file", "target_file", "images"}

def dump_setup(setup: ActionSetup, actor_file: str, target_file: str) -> str:
    doc = {"actor_file": actor_file, "target_file": target_file, "images": setup.perms.tolist()}
    return json.dumps(doc, sort_keys=True) + "\n"


def load_setup(path) -> ActionSetup:
    path = Path(path)
    doc = json.loads(path.read_text())
    base = path.parent
    actor = load_cayley(base / doc["actor_file"])
    target = load_cayley(base / doc["target_file"])
    return ActionSetup(actor, target, doc["images"])


# ---------------------------------------------------------------------------
# operations

def fixed_points(setup: ActionSetup, S: Iterable[int] | None = None) -> Subgroup:
    """``C_G(S)``: elements fixed by every actor element in ``S`` (default all)."""
    S = range(setup.actor.order) if S is None else list(S)
    G = setup.target
    mask = np.ones(G.order, dtype=bool)
    ident = np.arange(G.order)
    for a in S:
        mask &= setup.perms[a] == ident
    return Subgroup(G, np.nonzero(mask)[0].tolist())


def _invariant_under(perms, H: Subgroup) -> bool:
    return all(int(p[h]) in H.elements for p in perms for h in H.gens)


def commutator_with_action(setup: ActionSetup, within: Subgroup | None = None) -> Subgroup:
    """``[K, A]`` generated by ``k^-1 k^a`` (``K`` defaults to all of G).

    The result is checked to be A-invariant and normal in ``K``.
    """
    G = setup.target
    K = within if within is not None else G.whole
    gens = set()
    agens = setup.actor.generators
    for k in K.sorted:
        for a in agens:
            gens.add(G.rows[G.inverses[k]][int(setup.perms[a, k])])
    H = Subgroup(G, closure(G, gens))
    assert _invariant_under([setup.perms[a] for a in agens], H), "[K,A] not A-invariant"
    assert all(G.conj(h, k) in H.elements for h in H.gens for k in K.gens), "[K,A] not normal in K"
    return H


def _sub_dict(H: Subgroup) -> dict:
    return {"order": H.order, "gens": list(H.gens)}


def verify_coprime_facts(setup: ActionSetup, cap: int = ENUMERATION_CAP) -> ScenarioReport:
    """Exhaustively check the five standard coprime-action facts.

    (i) ``G = C_G(A)[G,A]``; (ii) ``[G,A,A] = [G,A]``; (iii) an A-invariant
    Sylow p-subgroup for every prime p; (iv) ``C_{G/N}(A) = C_G(A)N/N`` for
    every A-invariant normal N; (v) ``G`` is the product of the ``C_G(a)``,
    ``a`` nontrivial, when G is nilpotent and A noncyclic abelian.
    """
    if not setup.coprime:
        raise NotCoprime(f"gcd(|A|, |G|) = {math.gcd(setup.actor.order, setup.target.order)}")
    G, A = setup.target, setup.actor
    rep = ScenarioReport("coprime_facts", {"actor": A.name, "target": G.name,
                                           "actor_order": A.order, "target_order": G.order})
    agens = A.generators
    aperms = [setup.perms[a] for a in agens]
    CGA = fixed_points(setup)
    GA = commutator_with_action(setup)
    obs = {"C_G(A)": CGA.order, "[G,A]": GA.order}

    prod = set_product(G, CGA.elements, GA.elements)
    missing = sorted(set(range(G.order)) - prod)
    rep.check("i_centralizer_times_commutator", not missing,
              {"missing_element": missing[:1]}, observed=obs)

    GAA = commutator_with_action(setup, GA)
    diff = sorted(GA.elements ^ GAA.elements)
    rep.check("ii_commutator_stable", not diff, {"difference": diff[:1]},
              observed={"[G,A]": GA.order, "[G,A,A]": GAA.order})

    if G.order > cap:
        rep.add("iii_invariant_sylow", ABSTAIN, note=f"|G| = {G.order} exceeds enumeration cap {cap}")
        rep.add("iv_quotient_centralizers", ABSTAIN, note=f"|G| = {G.order} exceeds enumeration cap {cap}")
    else:
        found, missing_p = {}, []
        for p in prime_factors(G.order):
            P = sylow_subgroup(G, p)
            for C in sylow_conjugates(G, P):
                if _invariant_under(aperms, C):
                    found[p] = list(C.gens)
                    break
            else:
                missing_p.append(p)
        rep.check("iii_invariant_sylow", not missing_p, {"prime_without_invariant_sylow": missing_p},
                  observed={"invariant_sylow_gens": found})

        Q_fail = None
        maps = conjugation_maps(G) + [list(p) for p in aperms]
        invariant_normals = invariant_subgroups(G, maps, cap)
        for N in invariant_normals:
            Q, proj = quotient_group(G, N)
            img = proj.images
            fixed_q = set()
            reps_of = {}
            for x in range(G.order):
                reps_of.setdefault(img[x], x)
            for c, x in reps_of.items():
                if all(img[int(p[x])] == c for p in aperms):
                    fixed_q.add(c)
            image_c = {img[x] for x in CGA.elements}
            if fixed_q != image_c:
                Q_fail = {"N": list(N.gens), "coset": sorted(fixed_q ^ image_c)[:1]}
                break
        rep.check("iv_quotient_centralizers", Q_fail is None, Q_fail,
                  observed={"invariant_normal_subgroups": len(invariant_normals)})

    A_abelian = A.is_abelian
    A_cyclic = A.order == 1 or max(A.element_orders) == A.order
    if is_nilpotent(G) and A_abelian and not A_cyclic:
        cur = frozenset([0])
        factors = []
        for a in range(1, A.order):
            C = fixed_points(setup, [a])
            factors.append(C.order)
            cur = set_product(G, cur, C.elements)
        missing = sorted(set(range(G.order)) - cur)
        rep.check("v_product_of_centralizers", not missing, {"missing_element": missing[:1]},
                  observed={"centralizer_orders": factors})
    else:
        rep.add("v_product_of_centralizers", SKIP,
                note="applies only to nilpotent G with A noncyclic abelian")
    return rep
