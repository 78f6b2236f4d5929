"""Normal-subgroup analysis: span, completion, kernel of the action, dual, structure group."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exact import (
    identity, lattice_meet_subspace, matmul, matvec, solve_affine_mod_lattice,
    transpose, vadd,
)
from .isometry import (
    AffineIso, Subspace, compose, conjugate, ident, inverse_iso, is_invariant,
    orthogonal_complement, restrict, subspace,
)
from .spacegroup import GroupError, SpaceGroup, build, contains, same_group


class NotNormalError(GroupError):
    def __init__(self, message: str, witness: Optional[AffineIso] = None):
        super().__init__(message)
        self.witness = witness


def subgroup(parent: SpaceGroup, gens: Sequence[AffineIso]) -> SpaceGroup:
    """Subgroup data of the group generated by ``gens`` inside ``parent``."""
    for g in gens:
        if not contains(parent, g):
            raise NotNormalError(f"not a subgroup of the parent group: {g!r} is not an element", g)
    if not gens:
        gens = [ident(parent.dim)]
    return build(parent.dim, gens, require_cocompact=False)


def verify_normal(parent: SpaceGroup, gens: Sequence[AffineIso]) -> SpaceGroup:
    sub = subgroup(parent, gens)
    conj = list(parent.generators) + [inverse_iso(g) for g in parent.generators]
    for c in conj:
        for n in sub.generators:
            h = conjugate(c, n)
            if not contains(sub, h):
                raise NotNormalError(f"not normal: conjugate {h!r} is not in the subgroup", h)
    return sub


def span_of(sub: SpaceGroup) -> Subspace:
    return subspace(sub.lattice.basis, sub.dim)


def affine_slice(parent: SpaceGroup, trans_in: Subspace, fixes: Subspace) -> SpaceGroup:
    """The subgroup {a + A : a in trans_in, A fixes every vector of ``fixes``}."""
    n = parent.dim
    gens = [AffineIso(v, identity(n)) for v in lattice_meet_subspace(parent.lattice, trans_in.basis).basis]
    basis_cols = transpose(trans_in.basis) if trans_in.basis else tuple(() for _ in range(n))
    for a in parent.point_group:
        if a == identity(n):
            continue
        if any(matvec(a, f) != f for f in fixes.basis):
            continue
        y = solve_affine_mod_lattice(basis_cols, parent.vs[a], parent.lattice, ncols=trans_in.dim)
        if y is None:
            continue
        t = matvec(basis_cols, y) if trans_in.dim else tuple(0 * x for x in parent.vs[a])
        gens.append(AffineIso(tuple(t), a))
    if not gens:
        gens = [ident(n)]
    return build(n, gens, require_cocompact=False)


def completion(parent: SpaceGroup, sub: SpaceGroup, v: Optional[Subspace] = None) -> SpaceGroup:
    v = span_of(sub) if v is None else v
    return affine_slice(parent, v, orthogonal_complement(v, parent.gram))


def is_complete(parent: SpaceGroup, sub: SpaceGroup) -> bool:
    return same_group(sub, completion(parent, sub))


def kernel_of_action(parent: SpaceGroup, v: Subspace) -> SpaceGroup:
    for b in parent.point_group:
        if not is_invariant(b, v):
            raise GroupError("V not invariant under the point group")
    return affine_slice(parent, orthogonal_complement(v, parent.gram), v)


def orthogonal_dual(parent: SpaceGroup, sub: SpaceGroup) -> Optional[SpaceGroup]:
    v = span_of(sub)
    k = kernel_of_action(parent, v)
    if k.lattice.rank != parent.dim - v.dim:
        return None
    return k


# -- structure group ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StructureGroup:
    finite: bool
    order: Optional[int] = None
    reps: tuple = ()
    table: tuple = ()
    kind: str = "infinite"
    n: int = 0
    keys: dict = field(default_factory=dict, repr=False)

    @property
    def label(self) -> str:
        if not self.finite:
            return "infinite"
        if self.kind == "trivial":
            return "C1"
        if self.kind == "cyclic":
            return f"C{self.n}"
        if self.kind == "dihedral":
            return f"D{self.n}"
        return f"order-{self.order}"

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.table[j][i]
            k += 1
        return k

    def inverse_index(self, i: int) -> int:
        return next(j for j in range(self.order) if self.table[i][j] == 0)

    def generated(self, idxs: Sequence[int]) -> set:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g in idxs:
                    c = self.table[a][g]
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return seen


def _coset_key(nk: SpaceGroup, g: AffineIso) -> tuple:
    a, A = g.trans, g.lin
    best = None
    for p in nk.point_group:
        b0 = matmul(A, p)
        if best is None or b0 < best[0]:
            best = (b0, p)
    b0, p = best
    t = vadd(a, matvec(A, nk.vs[p]))
    return b0, nk.lattice.reduce(t)


def classify_table(table: Sequence[Sequence[int]]) -> tuple[str, int]:
    """Kind of a finite group from its multiplication table (identity at index 0)."""
    m = len(table)
    if m == 1:
        return "trivial", 1

    def order(i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = table[j][i]
            k += 1
        return k

    orders = [order(i) for i in range(m)]
    if m in orders:
        return "cyclic", m
    if m % 2 == 0:
        half = m // 2
        inv = [next(j for j in range(m) if table[i][j] == 0) for i in range(m)]
        for r in range(m):
            if orders[r] != half:
                continue
            powers = {0}
            x = r
            while x != 0:
                powers.add(x)
                x = table[x][r]
            for s in range(m):
                if s in powers or orders[s] != 2:
                    continue
                if table[table[s][r]][s] == inv[r]:
                    return "dihedral", half
    return "other", m


def structure_group(parent: SpaceGroup, nk: SpaceGroup, finite: bool) -> StructureGroup:
    if not finite:
        return StructureGroup(False)
    e = ident(parent.dim)
    keys = {_coset_key(nk, e): 0}
    reps = [e]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for g in parent.generators:
            h = compose(reps[i], g)
            k = _coset_key(nk, h)
            if k not in keys:
                keys[k] = len(reps)
                reps.append(h)
                queue.append(keys[k])
    m = len(reps)
    table = tuple(tuple(keys[_coset_key(nk, compose(reps[i], reps[j]))] for j in range(m)) for i in range(m))
    kind, n = classify_table(table)
    return StructureGroup(True, m, tuple(reps), table, kind, n, keys)


def coset_index(analysis: "NormalAnalysis", g: AffineIso) -> int:
    return analysis.structure.keys[_coset_key(analysis.NK, g)]


# -- full analysis -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NormalAnalysis:
    parent: SpaceGroup
    N: SpaceGroup
    V: Subspace
    Vperp: Subspace
    complete: bool
    completion: SpaceGroup
    K: SpaceGroup
    dual_exists: bool
    NK: SpaceGroup
    structure: StructureGroup
    given: SpaceGroup = field(repr=False, default=None)

    @property
    def fiber_dim(self) -> int:
        return self.V.dim

    @property
    def base_dim(self) -> int:
        return self.Vperp.dim

    def split(self, g: AffineIso) -> tuple[AffineIso, AffineIso]:
        return restrict(g, self.V, self.parent.gram, self.Vperp)

    def action_on_fiber(self, g: AffineIso) -> AffineIso:
        return self.split(g)[0]

    def action_on_base(self, g: AffineIso) -> AffineIso:
        return self.split(g)[1]


def analyze(parent: SpaceGroup, normal_gens: Sequence[AffineIso]) -> NormalAnalysis:
    """Analysis of (parent, N).  A non-complete N is replaced by its completion."""
    given = verify_normal(parent, normal_gens)
    v = span_of(given)
    for b in parent.point_group:
        if not is_invariant(b, v):
            raise GroupError("span of the normal subgroup is not invariant under the point group")
    vperp = orthogonal_complement(v, parent.gram)
    comp = affine_slice(parent, v, vperp)
    complete = same_group(given, comp)
    n = comp
    k = affine_slice(parent, vperp, v)
    dual = k.lattice.rank == vperp.dim
    nk = build(parent.dim, list(n.generators) + list(k.generators), require_cocompact=False)
    st = structure_group(parent, nk, dual)
    return NormalAnalysis(parent, n, v, vperp, complete, comp, k, dual, nk, st, given)


def action_on_fiber(analysis: NormalAnalysis, rep: AffineIso) -> AffineIso:
    return analysis.action_on_fiber(rep)


def action_on_base(analysis: NormalAnalysis, rep: AffineIso) -> AffineIso:
    return analysis.action_on_base(rep)


def direct_product_check(analysis: NormalAnalysis) -> bool:
    """N and K commute elementwise on generators and meet trivially."""
    for a in analysis.N.generators:
        for b in analysis.K.generators:
            if compose(a, b) != compose(b, a):
                return False
    # an element of both has translation in V and in V-perp, and a linear part
    # fixing both, so it is the identity; check on the coset data
    for p in analysis.N.point_group:
        if p in analysis.K.vs and p != identity(analysis.parent.dim):
            return False
    return True
