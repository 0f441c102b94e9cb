"""Z/pZ-gradings by eigenspaces, the two-condition nilpotency criterion,
and the decomposition lemmas for Lie rings with a Frobenius group of
automorphisms ``FH`` whose kernel is elementary abelian of order ``p^2``.

Conventions.  Group representations on a Lie ring are left actions by
matrices, ``rep[a*b] = rep[a] rep[b]``.  The grading automorphism is
``phi = rep[z]`` for a generator ``z`` of ``Z``.  The complement generator
``h`` satisfies ``h z h^-1 = z^r`` and then ``rep[h^-1]`` maps ``L_i`` onto
``L_{ri}``; the orbit sums defining ``T`` use ``rep[h^-1]``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .actions import ActionSetup, fixed_points
from .errors import (
    HypothesisFail,
    NoRootOfUnity,
    NotNilpotent,
    OrderMismatch,
    SingularSystem,
    ZeroResidue,
)
from .gf import (
    GF,
    Subspace,
    det,
    field,
    identity,
    kernel_of,
    mat_inv,
    mat_mul,
    mat_pow,
    mat_sub,
    mat_vec,
    vec_add,
    vec_scale,
)
from .groups import FiniteGroup, Subgroup, conjugate_subgroup, is_elementary_abelian, join, prime_power
from .lie import (
    LieAutomorphism,
    LieRing,
    derived_length,
    extend_scalars,
    is_lie_nilpotent,
    iterated_bracket,
    lie_class,
    lie_fixed_points,
    lie_lower_central_series,
    subalgebra_class,
)
from .report import ABSTAIN, SKIP, ScenarioReport
from .structure import FrobeniusStructure, choose_Z


def _matrix(phi) -> list[list[int]]:
    return phi.matrix if isinstance(phi, LieAutomorphism) else [list(r) for r in phi]


@dataclass
class Grading:
    ring: LieRing
    p: int
    components: list[Subspace]
    phi: list[list[int]]
    omega: int

    def __getitem__(self, i: int) -> Subspace:
        return self.components[i % self.p]

    @property
    def dims(self) -> list[int]:
        return [c.dim for c in self.components]

    def to_json(self) -> str:
        F = self.ring.field
        doc = {
            "field": {"q": F.q, "d": F.d, "modulus": list(F.modulus)},
            "p": self.p,
            "omega": self.omega,
            "phi": self.phi,
            "components": [c.to_list() for c in self.components],
        }
        return json.dumps(doc, sort_keys=True) + "\n"


def grading_from_json(text: str, ring: LieRing) -> Grading:
    doc = json.loads(text)
    F = ring.field
    if (doc["field"]["q"], doc["field"]["d"]) != (F.q, F.d):
        raise ValueError("grading field does not match the ring")
    comps = [Subspace.span(F, ring.dim, b) for b in doc["components"]]
    return Grading(ring, doc["p"], comps, doc["phi"], doc["omega"])


def eigenspace_grading(L: LieRing, phi, p: int) -> Grading:
    """``L_i = ker(phi - omega^i)``, with every grading invariant verified."""
    F, n = L.field, L.dim
    M = _matrix(phi)
    if mat_pow(F, M, p) != identity(n):
        raise OrderMismatch(f"phi^{p} is not the identity")
    omega = F.root_of_unity(p)  # raises NoRootOfUnity
    comps = []
    for i in range(p):
        shift = [[F.sub(M[r][c], F.pow(omega, i)) if r == c else M[r][c] for c in range(n)] for r in range(n)]
        comps.append(kernel_of(F, shift, n))
    g = Grading(L, p, comps, M, omega)
    bad = grading_violations(g)
    if bad:
        raise AssertionError(f"grading invariants fail: {bad}")
    return g


def grading_violations(g: Grading) -> list[str]:
    """Empty when direct-sum, eigenspace and bracket-grading conditions hold."""
    L, F, p = g.ring, g.ring.field, g.p
    out = []
    if sum(g.dims) != L.dim:
        out.append("dimensions do not add up")
    total = L.zero()
    for c in g.components:
        if not (total & c).is_zero():
            out.append("components are not independent")
        total = total + c
    if total.dim != L.dim:
        out.append("components do not span")
    for i, c in enumerate(g.components):
        lam = F.pow(g.omega, i)
        for b in c.basis:
            if mat_vec(F, g.phi, b) != vec_scale(F, lam, b):
                out.append(f"L_{i} is not an eigenspace")
                break
    for i in range(p):
        for j in range(i, p):
            if not L.span_bracket(g[i], g[j]) <= g[i + j]:
                out.append(f"[L_{i}, L_{j}] not inside L_{(i + j) % p}")
    return out


def omega_identities(F: GF, omega: int, p: int) -> bool:
    """omega^p = 1, omega != 1 and 1 + omega + ... + omega^{p-1} = 0."""
    s = 0
    for i in range(p):
        s = F.add(s, F.pow(omega, i))
    return F.pow(omega, p) == 1 and omega != 1 and s == 0


# ---------------------------------------------------------------------------
# the two conditions

def condition_1_span(g: Grading, u: int) -> Subspace:
    return iterated_bracket(g.ring, g.ring.full(), *([g[0]] * u))


def check_condition_1(g: Grading, u: int) -> bool:
    """``[L, L_0, ..., L_0] = 0`` with u copies of ``L_0``."""
    return condition_1_span(g, u).is_zero()


def derived_in_L0(g: Grading) -> Subspace:
    L = g.ring
    return L.span_bracket(L.full(), L.full()) & g[0]


def check_condition_2(g: Grading, v: int) -> bool:
    """``[[L, L] cap L_0, L_a, ..., L_a] = 0`` for every residue a."""
    D = derived_in_L0(g)
    return all(iterated_bracket(g.ring, D, *([g[a]] * v)).is_zero() for a in range(g.p))


def _first_zero(L: LieRing, X: Subspace, Y: Subspace, cap: int) -> int | None:
    for k in range(cap + 1):
        if X.is_zero():
            return k
        X = L.span_bracket(X, Y)
    return None


def minimal_u(g: Grading, cap: int) -> int | None:
    return _first_zero(g.ring, g.ring.full(), g[0], cap)


def minimal_v(g: Grading, cap: int) -> int | None:
    D = derived_in_L0(g)
    best = 0
    for a in range(g.p):
        k = _first_zero(g.ring, D, g[a], cap)
        if k is None:
            return None
        best = max(best, k)
    return best


def default_cap(L: LieRing) -> int:
    return 2 * L.dim + 2


def criterion_report(g: Grading, cap: int | None = None) -> ScenarioReport:
    """Minimal u, v under the cap, the actual class, and the implication
    "both conditions hold => L nilpotent"."""
    L = g.ring
    cap = default_cap(L) if cap is None else cap
    rep = ScenarioReport("grading_criterion", {"p": g.p, "dim": L.dim, "field": repr(L.field), "cap": cap})
    u = minimal_u(g, cap)
    v = minimal_v(g, cap)
    series = lie_lower_central_series(L)
    nilpotent = series[-1].is_zero()
    cls = len(series) - 1 if nilpotent else None
    try:
        dl = derived_length(L)
    except NotNilpotent:
        dl = None
    obs = {"p": g.p, "u": u, "v": v, "class": cls, "dims": g.dims,
           "derived_length": dl, "metabelian": dl is not None and dl <= 2}
    if u is None:
        rep.add("condition_1", ABSTAIN, observed=obs,
                note=f"CapExceeded: [L, L_0 x u] is nonzero for every u <= {cap}")
    else:
        rep.add("condition_1", "pass", observed={"u": u})
    if v is None:
        rep.add("condition_2", ABSTAIN, observed=obs,
                note=f"CapExceeded: condition 2 fails for every v <= {cap}")
    else:
        rep.add("condition_2", "pass", observed={"v": v})
    if u is not None and v is not None:
        rep.check("criterion_implies_nilpotent", nilpotent,
                  {"stable_term_dim": series[-1].dim}, observed=obs)
    else:
        rep.add("criterion_implies_nilpotent", SKIP, observed=obs,
                note="conditions not established below the scan cap; no claim")
    if nilpotent:
        # [L, L_0 x c] lies in L^{c+1} = 0, so the scan must stop by the class
        rep.check("u_at_most_class", u is not None and u <= cls, {"u": u, "class": cls})
    return rep


# ---------------------------------------------------------------------------
# Frobenius actions on Lie rings

def extend_matrix_rep(G: FiniteGroup, F: GF, n: int, gen_images: dict[int, Sequence[Sequence[int]]]):
    """Extend generator matrices to ``rep[g]`` with ``rep[g s] = rep[g] rep[s]``.

    Every relation is checked on the way; an inconsistency raises
    ValueError naming the offending product.
    """
    rep: list = [None] * G.order
    rep[0] = identity(n)
    queue = deque([0])
    gens = sorted(gen_images)
    while queue:
        g = queue.popleft()
        for s in gens:
            x = G.mul(g, s)
            M = mat_mul(F, rep[g], [list(r) for r in gen_images[s]])
            if rep[x] is None:
                rep[x] = M
                queue.append(x)
            elif rep[x] != M:
                raise ValueError(f"generator matrices violate a relation at ({g}, {s})")
    if any(m is None for m in rep):
        raise ValueError("matrices given for a non-generating set")
    return rep


@dataclass
class FrobeniusLieAction:
    fs: FrobeniusStructure
    ring: LieRing
    rep: list  # one matrix per element of FH
    Z: Subgroup
    z: int
    grading: Grading
    h: int
    r: int
    qH: int
    p: int

    @property
    def group(self) -> FiniteGroup:
        return self.fs.whole

    @property
    def h_map(self) -> list[list[int]]:
        """The right action ``x -> x^h`` written as a matrix: ``rep[h^-1]``."""
        return self.rep[self.group.inv(self.h)]

    def matrices(self, elements) -> list:
        return [self.rep[x] for x in elements]

    def centralizer(self, elements) -> Subspace:
        return lie_fixed_points(self.ring, self.matrices(elements))


def frobenius_lie_action(fs: FrobeniusStructure, L: LieRing, rep, Z: Subgroup | None = None) -> FrobeniusLieAction:
    """Bundle an FH-action on L with its eigenspace grading.

    ``rep`` is a full list of matrices or a dict of generator images.  The
    field is extended by a primitive p-th root of unity when needed; the
    matrices keep their codes.
    """
    G = fs.whole
    pp = prime_power(fs.kernel.order)
    if pp is None:
        raise HypothesisFail("the kernel must be a p-group")
    p = pp[0]
    L, _ = extend_scalars(L, p)
    F = L.field
    if isinstance(rep, dict):
        rep = extend_matrix_rep(G, F, L.dim, rep)
    else:
        rep = [[list(map(int, r)) for r in M] for M in rep]
        for a in range(G.order):
            for b in G.generators:
                if mat_mul(F, rep[a], rep[b]) != rep[G.mul(a, b)]:
                    raise ValueError(f"rep is not a homomorphism at ({a}, {b})")
    for g in G.generators:
        LieAutomorphism(L, rep[g], check=True)
    if Z is None:
        Z = choose_Z(fs, p)
    z = min(x for x in Z.elements if x)
    grading = eigenspace_grading(L, rep[z], p)
    h = fs.complement_generator
    conj = G.mul(G.mul(h, z), G.inv(h))
    r = next(k for k in range(1, p) if G.power(z, k) == conj)
    return FrobeniusLieAction(fs, L, rep, Z, z, grading, h, r, fs.complement.order, p)


def action_invariant_violations(fa: FrobeniusLieAction) -> list[str]:
    """r primitive |H|-th root mod p; ``(L_i)^{h^f} = L_{ri}`` for every f."""
    out = []
    order = next(k for k in range(1, fa.p) if pow(fa.r, k, fa.p) == 1)
    if order != fa.qH:
        out.append(f"r = {fa.r} has order {order} mod {fa.p}, expected {fa.qH}")
    G, g = fa.group, fa.grading
    for f in fa.fs.kernel.sorted:
        hf = G.conj(fa.h, f)
        M = fa.rep[G.inv(hf)]
        for i in range(fa.p):
            if g[i].image(M) != g[fa.r * i]:
                out.append(f"h^{f} does not map L_{i} onto L_{fa.r * i % fa.p}")
    return out


def fixed_point_span_T(fa: FrobeniusLieAction, a: int) -> Subspace:
    """Span of the orbit sums ``x + x^h + ... + x^{h^{q-1}}`` over x in L_a."""
    if a % fa.p == 0:
        raise ZeroResidue("T is only defined for a nonzero residue")
    F, L = fa.ring.field, fa.ring
    Mh = fa.h_map
    sums = []
    for x in fa.grading[a].basis:
        s, cur = list(x), list(x)
        for _ in range(fa.qH - 1):
            cur = mat_vec(F, Mh, cur)
            s = vec_add(F, s, cur)
        sums.append(s)
    T = L.span(sums)
    assert T.image(Mh) == T and all(mat_vec(F, Mh, b) == list(b) for b in T.basis), "T is not H-fixed"
    return T


# ---------------------------------------------------------------------------
# Vandermonde recovery

@dataclass
class RecoveryCertificate:
    residues: list[int]
    coefficients: list[list[int]]  # y_s = sum_k coefficients[s][k] * z alpha^k
    z_powers: list[list[int]]
    recovered: list[list[int]]
    exact: bool


def vandermonde_recover(components: Sequence[tuple[int, Sequence[int]]], alpha, omega: int,
                        F: GF, n: int | None = None) -> RecoveryCertificate:
    """Write each ``y_t`` as a combination of ``z, z alpha, ..., z alpha^{m-1}``.

    ``components`` pairs a residue t with a vector satisfying
    ``alpha y = omega^t y``; ``n`` defaults to the order of omega.
    """
    M = _matrix(alpha)
    n = F.mult_order(omega) if n is None else n
    ts = [t % n for t, _ in components]
    if len(set(ts)) != len(ts):
        raise SingularSystem(f"residues {ts} are not pairwise distinct mod {n}")
    ys = [list(y) for _, y in components]
    for t, y in zip(ts, ys):
        if mat_vec(F, M, y) != vec_scale(F, F.pow(omega, t), y):
            raise ValueError(f"component for residue {t} is not an eigenvector")
    m = len(ys)
    dim = len(ys[0])
    z = [0] * dim
    for y in ys:
        z = vec_add(F, z, y)
    powers = [z]
    for _ in range(m - 1):
        powers.append(mat_vec(F, M, powers[-1]))
    V = [[F.pow(omega, k * t) for t in ts] for k in range(m)]
    if det(F, V) == 0:
        raise SingularSystem("Vandermonde matrix is singular")
    W = mat_inv(F, V)
    rec = []
    for s in range(m):
        v = [0] * dim
        for k in range(m):
            v = vec_add(F, v, vec_scale(F, W[s][k], powers[k]))
        rec.append(v)
    return RecoveryCertificate(ts, W, powers, rec, rec == ys)


# ---------------------------------------------------------------------------
# decomposition lemmas

def _f_conjugates(fa: FrobeniusLieAction):
    """(f, V_f) for f in F with duplicates removed, in element order."""
    G, out, seen = fa.group, [], set()
    for f in fa.fs.kernel.sorted:
        hf = G.conj(fa.h, f)
        V = fa.centralizer([fa.z, hf])
        if V not in seen:
            seen.add(V)
            out.append((f, V))
    return out


def verify_L0_decomposition(fa: FrobeniusLieAction) -> ScenarioReport:
    """``L_0 = C_L(F) + sum_f V_f`` with ``V_f = C_L(Z H^f)``, exactly."""
    rep = ScenarioReport("decomposition_L0", {"p": fa.p, "qH": fa.qH, "dim": fa.ring.dim})
    L0 = fa.grading[0]
    CF = fa.centralizer(fa.fs.kernel.gens)
    Vs = _f_conjugates(fa)
    total = CF
    for _, V in Vs:
        total = total + V
    rep.check("V_f_inside_L0", all(V <= L0 for _, V in Vs),
              {"f": [f for f, V in Vs if not V <= L0][:1]})
    rep.check("L0_equals_CF_plus_sum_Vf", total == L0,
              {"L0_dim": L0.dim, "sum_dim": total.dim},
              observed={"L0_dim": L0.dim, "C_L(F)_dim": CF.dim,
                        "V_f_dims": [V.dim for _, V in Vs], "distinct_V_f": len(Vs)})
    return rep


def centralizer_classes(fa: FrobeniusLieAction) -> dict[int, int]:
    """Class of ``C_L(x)`` for each nonidentity x in F (NotNilpotent propagates)."""
    return {x: subalgebra_class(fa.ring, fa.centralizer([x])) for x in fa.fs.kernel.sorted[1:]}


def complement_class(fa: FrobeniusLieAction) -> int:
    return subalgebra_class(fa.ring, fa.centralizer([fa.h]))


def verify_CF_vanishing(fa: FrobeniusLieAction, d: int | None = None) -> bool:
    """``L = sum C_L(x)`` over x in F^# and ``[L, C_L(F) x d] = 0``.

    ``d`` defaults to the measured maximum class of the ``C_L(x)``; a
    supplied d below that raises HypothesisFail.
    """
    Fk = fa.fs.kernel
    if Fk.order != fa.p ** 2 or not is_elementary_abelian(Fk, fa.p):
        raise HypothesisFail("the kernel must be elementary abelian of order p^2")
    try:
        classes = centralizer_classes(fa)
    except NotNilpotent as exc:
        raise HypothesisFail(f"some C_L(x) is not nilpotent: {exc}") from exc
    dmax = max(classes.values(), default=0)
    if d is None:
        d = dmax
    elif dmax > d:
        raise HypothesisFail(f"some C_L(x) has class {dmax} > {d}")
    L = fa.ring
    cover = L.zero()
    for x in Fk.sorted[1:]:
        cover = cover + fa.centralizer([x])
    CF = fa.centralizer(Fk.gens)
    vanish = iterated_bracket(L, L.full(), *([CF] * d)).is_zero()
    return cover == L.full() and vanish


def verify_L0_lemma(fa: FrobeniusLieAction) -> ScenarioReport:
    """Intermediate facts behind condition 1: ``[L_b, V_f x c] = 0`` for
    b != 0 and ``[L, C_L(F) x d] = 0``, with c, d the measured classes."""
    rep = ScenarioReport("lemma_L0", {"p": fa.p, "qH": fa.qH})
    L, g = fa.ring, fa.grading
    c = complement_class(fa)
    d = max(centralizer_classes(fa).values(), default=0)
    bad = [(b, f) for f, V in _f_conjugates(fa) for b in range(1, fa.p)
           if not iterated_bracket(L, g[b], *([V] * c)).is_zero()]
    rep.check("L_b_V_f_vanishing", not bad, {"b_f": bad[:1]}, observed={"c": c, "d": d})
    rep.check("CF_vanishing", verify_CF_vanishing(fa, d), {"d": d})
    return rep


def verify_metabelian_lemma(fa: FrobeniusLieAction) -> ScenarioReport:
    """Recompute the metabelian-case quantities and check each step.

    With c = class C_L(H), d = max class C_L(x), q = |H| and k = |F \\ Z|:
    ``L_a`` lies in ``sum_j T^{phi^j}``; ``[V', L_a x v] = 0`` for
    v = (c-1)q + 1; ``[L'_F, L_a x (k(d-1)+1)] = 0``; condition 2 holds at
    the larger of the two.
    """
    L, g, F = fa.ring, fa.grading, fa.ring.field
    rep = ScenarioReport("lemma_metabelian", {"p": fa.p, "qH": fa.qH})
    try:
        dl = derived_length(L)
    except NotNilpotent:
        dl = None
    if dl is None or dl > 2:
        rep.add("metabelian", SKIP, note="L is not metabelian; the lemma does not apply",
                observed={"derived_length": dl})
        return rep
    c = complement_class(fa)
    d = max(centralizer_classes(fa).values(), default=0)
    k = fa.fs.kernel.order - fa.Z.order
    v = (c - 1) * fa.qH + 1 if c else 1
    t = k * (d - 1) + 1 if d else 1
    rep.add("metabelian", "pass", role="hypothesis",
            observed={"derived_length": dl, "c": c, "d": d, "v": v, "t": t})

    phi = g.phi
    missing = []
    for a in range(1, fa.p):
        T = fixed_point_span_T(fa, a)
        total = L.zero()
        P = identity(L.dim)
        for _ in range(fa.qH):
            total = total + T.image(P)
            P = mat_mul(F, phi, P)
        if not g[a] <= total:
            missing.append(a)
    rep.check("L_a_inside_sum_T_phi_j", not missing, {"a": missing[:1]})

    derived = L.span_bracket(L.full(), L.full())
    V1 = derived & fa.centralizer([fa.z, fa.h])
    LF = derived & fa.centralizer(fa.fs.kernel.gens)
    badV = [a for a in range(fa.p) if not iterated_bracket(L, V1, *([g[a]] * v)).is_zero()]
    rep.check("V_prime_vanishing", not badV, {"a": badV[:1]}, observed={"V_prime_dim": V1.dim})
    badF = [a for a in range(fa.p) if not iterated_bracket(L, LF, *([g[a]] * t)).is_zero()]
    rep.check("L_prime_F_vanishing", not badF, {"a": badF[:1]}, observed={"L_prime_F_dim": LF.dim})
    parts = LF
    for _, V in _f_conjugates(fa):
        parts = parts + (derived & V)
    D0 = derived & g[0]
    rep.check("derived_L0_splits", parts == D0, {"lhs_dim": D0.dim, "rhs_dim": parts.dim})
    vb = max(v, t)
    rep.check("condition_2_at_bound", check_condition_2(g, vb), {"v": vb}, observed={"v": vb})
    return rep


# ---------------------------------------------------------------------------
# group-level generation lemma

def frobenius_generation_check(N: FiniteGroup, KB: FrobeniusStructure, action: ActionSetup) -> ScenarioReport:
    """``N = < C_N(B^y) : y in K >`` when ``C_N(K) = 1``.

    ``action`` has ``KB.whole`` as actor and ``N`` as target.  For an
    elementary abelian N of rank 2 the report also gives the determinant of
    a generator v of ``C_N(B)`` and its image under the first kernel
    generator.
    """
    if action.actor is not KB.whole or action.target is not N:
        raise ValueError("action must be of KB.whole on N")
    rep = ScenarioReport("frobenius_generation", {"N": N.name, "KB": KB.whole.name})
    CK = fixed_points(action, KB.kernel.sorted)
    if CK.order != 1:
        raise HypothesisFail(f"C_N(K) has order {CK.order}, not 1")
    rep.add("C_N(K)_trivial", "pass", role="hypothesis")
    G = KB.whole
    pieces = []
    for y in KB.kernel.sorted:
        By = conjugate_subgroup(G, KB.complement, y)
        pieces.append(fixed_points(action, By.sorted))
    gen = join(N, *pieces)
    obs = {"C_N(B)_order": pieces[0].order, "generated_order": gen.order}
    if N.labels is not None and N.is_abelian and N.order > 1:
        pp = prime_power(N.order)
        if pp and pp[1] == 2 and is_elementary_abelian(N.whole, pp[0]) and pieces[0].order == pp[0]:
            v = pieces[0].gens[0]
            k = KB.kernel.gens[0]
            w = action.act(k, v)
            rows = [list(N.labels[v]), list(N.labels[w])]
            obs["spanning_vectors"] = rows
            obs["spanning_determinant"] = det(field(pp[0]), rows)
    rep.check("generated_equals_N", gen.order == N.order,
              {"missing": sorted(set(range(N.order)) - gen.elements)[:1]}, observed=obs, role="conclusion")
    return rep
