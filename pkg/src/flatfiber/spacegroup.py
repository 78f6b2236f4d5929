"""Finite descriptions of crystallographic groups: point group, lattice, vector system."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import (
    Lattice, Mat, Vec, det, hnf, identity, is_integral, lattice_meet_subspace,
    lattice_member, matmul, matvec, vsub,
)
from .isometry import (
    AffineIso, GramForm, Subspace, compose, fixed_subspace, ident,
    invariant_gram,
)

DEFAULT_POINTGROUP_BOUND = 10_000


class GroupError(ValueError):
    """Input does not describe a crystallographic group of the requested kind."""


def pointgroup_bound() -> int:
    raw = os.environ.get("FLATFIBER_POINTGROUP_BOUND")
    if raw is None:
        return DEFAULT_POINTGROUP_BOUND
    try:
        return max(1, int(raw))
    except ValueError:
        raise GroupError(f"FLATFIBER_POINTGROUP_BOUND is not an integer: {raw!r}") from None


@dataclass(frozen=True, eq=False)
class SpaceGroup:
    """A group {a + B : B in point_group, a - vs[B] in lattice}.

    ``lattice`` may have rank below ``dim`` for subgroups built with
    ``require_cocompact=False``.
    """

    dim: int
    generators: tuple
    point_group: tuple
    vs: dict = field(repr=False)
    lattice: Lattice
    gram: GramForm = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.point_group)

    def rep(self, b: Mat) -> AffineIso:
        return AffineIso(self.vs[b], b)

    def reps(self) -> list[AffineIso]:
        return [self.rep(b) for b in self.point_group]

    def translations(self) -> list[AffineIso]:
        return [AffineIso(v, identity(self.dim)) for v in self.lattice.basis]

    def contains(self, g: AffineIso) -> bool:
        return contains(self, g)

    def __contains__(self, g: AffineIso) -> bool:
        return contains(self, g)

    def key(self, g: AffineIso) -> tuple:
        """Canonical form of g modulo the lattice (equal keys iff same coset of L)."""
        return g.lin, self.lattice.reduce(g.trans)

    def is_orientation_preserving(self) -> bool:
        return orientation_preserving(self)


def _closure(mats: Sequence[Mat], n: int, bound: int) -> list[Mat]:
    ident_m = identity(n)
    seen = {ident_m: None}
    order = [ident_m]
    queue = deque([ident_m])
    while queue:
        b = queue.popleft()
        for m in mats:
            c = matmul(b, m)
            if c not in seen:
                seen[c] = None
                order.append(c)
                if len(order) > bound:
                    raise GroupError("point group not finite (closure bound exceeded)")
                queue.append(c)
    return order


def build(dim: int, generators: Iterable[AffineIso], *, bound: Optional[int] = None,
          require_cocompact: bool = True) -> SpaceGroup:
    """Point group by closure, vector system by BFS, lattice from Schreier generators."""
    gens = tuple(generators)
    for g in gens:
        if g.dim != dim:
            raise GroupError("generator dimension mismatch")
        if det(g.lin) == 0:
            raise GroupError("linear part not invertible")
    bound = pointgroup_bound() if bound is None else bound
    _closure([g.lin for g in gens], dim, bound)

    rep = {identity(dim): ident(dim)}
    order = [identity(dim)]
    queue = deque(order)
    trans: list[Vec] = []
    while queue:
        b = queue.popleft()
        rb = rep[b]
        for g in gens:
            cand = compose(rb, g)
            c = cand.lin
            if c not in rep:
                rep[c] = cand
                order.append(c)
                queue.append(c)
            else:
                t = vsub(cand.trans, rep[c].trans)
                if any(t):
                    trans.append(t)
    lattice = hnf(trans, dim)
    if require_cocompact and lattice.rank < dim:
        raise GroupError(f"not cocompact (translation lattice rank {lattice.rank} < {dim})")
    for b in order:
        for v in lattice.basis:
            if not lattice_member(lattice, matvec(b, v)):
                raise GroupError("translation lattice not invariant under the point group")
    vs = {b: lattice.reduce(rep[b].trans) for b in order}
    return SpaceGroup(dim, gens, tuple(order), vs, lattice, invariant_gram(order))


def contains(grp: SpaceGroup, g: AffineIso) -> bool:
    if g.dim != grp.dim:
        raise ValueError("dimension mismatch")
    v = grp.vs.get(g.lin)
    if v is None:
        return False
    return lattice_member(grp.lattice, vsub(g.trans, v))


def center_span(grp: SpaceGroup) -> Subspace:
    """Span of the center, which equals the common fixed space of the point group."""
    return fixed_subspace(grp.point_group, grp.dim)


def center_generators(grp: SpaceGroup) -> list[AffineIso]:
    span = center_span(grp)
    lat = lattice_meet_subspace(grp.lattice, span.basis)
    return [AffineIso(v, identity(grp.dim)) for v in lat.basis]


def first_betti(grp: SpaceGroup) -> int:
    return center_span(grp).dim


def isom_rank(grp: SpaceGroup) -> int:
    """Dimension of the isometry group of the quotient orbifold (rank of the center)."""
    return center_span(grp).dim


def isom_finite(grp: SpaceGroup) -> bool:
    return first_betti(grp) == 0


def orientation_preserving(grp: SpaceGroup) -> bool:
    return all(det(b) == 1 for b in grp.point_group)


def lattice_coordinates(grp: SpaceGroup) -> Optional[Mat]:
    """Basis matrix (columns) of the lattice when it has full rank."""
    if grp.lattice.rank != grp.dim:
        return None
    return tuple(zip(*grp.lattice.basis))


def is_integral_pointgroup(grp: SpaceGroup) -> bool:
    return all(is_integral(b) for b in grp.point_group)


def elements_ball(grp: SpaceGroup, radius: int = 1) -> list[AffineIso]:
    """Coset reps composed with lattice translations of coefficient size <= radius."""
    from itertools import product

    out = []
    basis = grp.lattice.basis
    for coeffs in product(range(-radius, radius + 1), repeat=len(basis)):
        t = tuple(sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0)) for i in range(grp.dim))
        for b in grp.point_group:
            out.append(AffineIso(tuple(x + y for x, y in zip(t, grp.vs[b])), b))
    return out


def same_group(a: SpaceGroup, b: SpaceGroup) -> bool:
    """Equality as sets of isometries."""
    if a.dim != b.dim or a.lattice != b.lattice or set(a.point_group) != set(b.point_group):
        return False
    return all(lattice_member(a.lattice, vsub(a.vs[m], b.vs[m])) for m in a.point_group)
