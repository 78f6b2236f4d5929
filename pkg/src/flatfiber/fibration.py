"""Orbifold types of fibers, bases and quotients, and invariants of structure-group actions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Optional, Sequence

from .exact import (
    Lattice, Mat, Vec, det, hnf, identity, inverse, kernel_basis, matmul, matvec, msub,
    solve_affine_mod_lattice, transpose, vadd,
)
from .isometry import AffineIso, compose, ident
from .normal import NormalAnalysis
from .spacegroup import GroupError, SpaceGroup, build, contains

# IT number -> (Conway name, IT short symbol)
WALLPAPER = {
    1: ("∘", "p1"), 2: ("2222", "p2"), 3: ("**", "pm"), 4: ("××", "pg"),
    5: ("*×", "cm"), 6: ("*2222", "pmm"), 7: ("22*", "pmg"), 8: ("22×", "pgg"),
    9: ("2*22", "cmm"), 10: ("442", "p4"), 11: ("*442", "p4m"), 12: ("4*2", "p4g"),
    13: ("333", "p3"), 14: ("*333", "p3m1"), 15: ("3*3", "p31m"), 16: ("632", "p6"),
    17: ("*632", "p6m"),
}
CONWAY_TO_IT = {c: it for it, (c, _) in WALLPAPER.items()}
SYMBOL_TO_IT = {s: it for it, (_, s) in WALLPAPER.items()}


def normalize_conway(name: str) -> str:
    """Accept ASCII spellings ('o', 'x', '∗') and return the canonical Conway name."""
    s = name.strip().replace("∗", "*").replace(" ", "")
    if s in ("o", "O1", "∘", "circ"):
        return "∘"
    s = s.replace("x", "×")
    if s not in CONWAY_TO_IT:
        raise ValueError(f"unknown Conway name {name!r}")
    return s


@dataclass(frozen=True)
class WallpaperType:
    it_number: int

    @property
    def conway(self) -> str:
        return WALLPAPER[self.it_number][0]

    @property
    def symbol(self) -> str:
        return WALLPAPER[self.it_number][1]

    def __str__(self) -> str:
        return self.conway


# -- lattice coordinates -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class LatticeFrame:
    """A group rewritten so that its lattice is Z^k."""

    basis: Mat          # columns are lattice basis vectors
    point_group: tuple  # integral matrices
    vs: dict


def lattice_frame(m: SpaceGroup) -> LatticeFrame:
    if m.lattice.rank != m.dim:
        raise GroupError("not cocompact")
    p = transpose(m.lattice.basis)
    pi = inverse(p)
    pg, vs = [], {}
    for b in m.point_group:
        bl = matmul(pi, matmul(b, p))
        pg.append(bl)
        vs[bl] = matvec(pi, m.vs[b])
    return LatticeFrame(p, tuple(pg), vs)


def _z(n: int) -> Lattice:
    return hnf(identity(n), n)


def _has_mirror(fr: LatticeFrame, b: Mat) -> bool:
    n = len(b)
    return solve_affine_mod_lattice(msub(identity(n), b), fr.vs[b], _z(n)) is not None


def reflection_index(b: Mat) -> int:
    """Index of L+ (+) L- in Z^2 for an integral reflection b (1 or 2)."""
    plus = _primitive(_eigvec(b, 1))
    minus = _primitive(_eigvec(b, -1))
    return int(abs(det(tuple(zip(plus, minus)))))


def _eigvec(b: Mat, lam: int) -> Vec:
    n = len(b)
    rows = tuple(tuple(b[i][j] - (lam if i == j else 0) for j in range(n)) for i in range(n))
    k = kernel_basis(rows)
    if len(k) != 1:
        raise ValueError("expected a one-dimensional eigenspace")
    return k[0]


def _primitive(v: Vec) -> tuple:
    d = 1
    for x in v:
        d = lcm(d, x.denominator)
    ints = [int(x * d) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(Fraction(x // g) for x in ints)


def _mat_order(b: Mat) -> int:
    n = len(b)
    p, k = b, 1
    while p != identity(n):
        p = matmul(p, b)
        k += 1
    return k


def _gram_from(pg: Sequence[Mat]) -> Mat:
    n = len(pg[0])
    acc = [[Fraction(0)] * n for _ in range(n)]
    for b in pg:
        bt = transpose(b)
        prod = matmul(bt, b)
        for i in range(n):
            for j in range(n):
                acc[i][j] += prod[i][j]
    return tuple(tuple(r) for r in acc)


def wallpaper_type(m: SpaceGroup) -> WallpaperType:
    """Recognize one of the 17 plane crystallographic groups."""
    if m.dim != 2:
        raise GroupError("wallpaper_type needs a 2-dimensional group")
    fr = lattice_frame(m)
    pg = fr.point_group
    order = len(pg)
    refl = [b for b in pg if det(b) == -1]
    rot_orders = sorted(_mat_order(b) for b in pg if det(b) == 1)
    cyclic = max(rot_orders) == order
    if order == 1:
        return WallpaperType(1)
    if order == 2:
        if not refl:
            return WallpaperType(2)
        b = refl[0]
        if reflection_index(b) == 2:
            return WallpaperType(5)
        return WallpaperType(3 if _has_mirror(fr, b) else 4)
    if order == 3:
        return WallpaperType(13)
    if order == 4:
        if cyclic:
            return WallpaperType(10)
        if reflection_index(refl[0]) == 2:
            return WallpaperType(9)
        mirrors = sum(1 for b in refl if _has_mirror(fr, b))
        return WallpaperType({2: 6, 1: 7, 0: 8}[mirrors])
    if order == 6:
        if cyclic:
            return WallpaperType(16)
        g = _gram_from(pg)
        b = refl[0]
        up, um = _primitive(_eigvec(b, 1)), _primitive(_eigvec(b, -1))
        nu = sum(up[i] * g[i][j] * up[j] for i in range(2) for j in range(2))
        nm = sum(um[i] * g[i][j] * um[j] for i in range(2) for j in range(2))
        # a mirror along the long diagonal of a 60-degree basis passes through every 3-fold center
        return WallpaperType(14 if nu > nm else 15)
    if order == 8:
        return WallpaperType(11 if all(_has_mirror(fr, b) for b in refl) else 12)
    if order == 12:
        return WallpaperType(17)
    raise GroupError(f"point group of order {order} is not a plane crystallographic point group")


def one_orb_type(m: SpaceGroup) -> str:
    """'O' for a circle quotient, 'I' for a closed interval."""
    if m.dim != 1:
        raise GroupError("one_orb_type needs a 1-dimensional group")
    if m.lattice.rank != 1:
        raise GroupError("non-cocompact line action")
    return "O" if all(b[0][0] == 1 for b in m.point_group) else "I"


def orbifold_type(m: SpaceGroup) -> str:
    if m.dim == 0:
        return "pt"
    if m.dim == 1:
        return one_orb_type(m)
    if m.dim == 2:
        return wallpaper_type(m).conway
    return f"E{m.dim}-orbifold"


# -- one-dimensional actions -------------------------------------------------

@dataclass(frozen=True)
class CircleAction:
    kind: str                  # identity | rotation | reflection
    turn: Fraction = Fraction(0)

    def __str__(self) -> str:
        if self.kind == "rotation":
            return f"rotation({self.turn.numerator}/{self.turn.denominator})"
        return self.kind


def classify_circle_action(g: AffineIso, lattice: Lattice) -> CircleAction:
    """Action of g on the circle R/lattice."""
    if g.dim != 1 or lattice.rank != 1:
        raise GroupError("classify_circle_action needs a line and a rank-1 lattice")
    if g.lin[0][0] == -1:
        return CircleAction("reflection")
    if g.lin[0][0] != 1:
        raise GroupError("map does not normalize the lattice")
    step = lattice.basis[0][0]
    turn = (g.trans[0] / step) % 1
    if turn == 0:
        return CircleAction("identity")
    return CircleAction("rotation", turn)


def one_dim_label(g: AffineIso, h: SpaceGroup) -> str:
    """Label of the map induced by g on R/h: idt, ref or m-rot."""
    if contains(h, g):
        return "idt"
    if len(h.point_group) > 1 or g.lin[0][0] == -1:
        return "ref"
    act = classify_circle_action(g, h.lattice)
    return f"{act.turn.denominator}-rot"


# -- affinity invariants -----------------------------------------------------

@dataclass(frozen=True)
class AffinityInvariant:
    """Invariants of the map induced by g on E^k/H."""

    order: int
    orientation: Optional[bool]
    fixed_point: bool
    label: Optional[str] = None

    def as_tuple(self) -> tuple:
        return (self.order, self.orientation, self.fixed_point)


def order_mod(g: AffineIso, h: SpaceGroup, bound: int = 64) -> int:
    p = g
    for k in range(1, bound + 1):
        if contains(h, p):
            return k
        p = compose(p, g)
    raise GroupError("induced map has infinite order")


def has_fixed_point(g: AffineIso, h: SpaceGroup) -> bool:
    """Whether g maps some H-orbit to itself, i.e. n*g has a fixed point for some n in H."""
    k = g.dim
    if k == 0:
        return True
    c, b = g.trans, g.lin
    for d in h.point_group:
        db = matmul(d, b)
        rhs = vadd(h.vs[d], matvec(d, c))
        if solve_affine_mod_lattice(msub(identity(k), db), rhs, h.lattice, ncols=k) is not None:
            return True
    return False


def affinity_invariant(g: AffineIso, h: SpaceGroup, bound: int = 64) -> AffinityInvariant:
    orient = None
    if all(det(d) == 1 for d in h.point_group):
        orient = det(g.lin) > 0 if g.dim else True
    label = one_dim_label(g, h) if g.dim == 1 else None
    return AffinityInvariant(order_mod(g, h, bound), orient, has_fixed_point(g, h), label)


# -- groups attached to an analysis ------------------------------------------

def _restricted(an: NormalAnalysis, gens: Sequence[AffineIso], side: int) -> SpaceGroup:
    k = an.V.dim if side == 0 else an.Vperp.dim
    if k == 0:
        return build(0, [ident(0)], require_cocompact=False)
    imgs = [an.split(g)[side] for g in gens] or [ident(k)]
    return build(k, imgs)


@dataclass(frozen=True)
class ActionInvariant:
    """How one structure-group element acts on the fiber and on the base."""

    order: int
    fiber: AffinityInvariant
    base: AffinityInvariant

    @property
    def orientation_preserving_on_fiber(self) -> Optional[bool]:
        return self.fiber.orientation

    @property
    def has_fixed_point_on_fiber(self) -> bool:
        return self.fiber.fixed_point

    @property
    def base_action(self) -> Optional[str]:
        return self.base.label


class Fibration:
    """Lazily computed orbifold data for an analysis with finite structure group."""

    def __init__(self, an: NormalAnalysis):
        if not an.dual_exists:
            raise GroupError("orthogonal dual does not exist (structure group infinite)")
        self.an = an

    @cached_property
    def fiber_group(self) -> SpaceGroup:
        return _restricted(self.an, self.an.N.generators, 0)

    @cached_property
    def base_group(self) -> SpaceGroup:
        return _restricted(self.an, self.an.K.generators, 1)

    @cached_property
    def quotient_fiber_group(self) -> SpaceGroup:
        return _restricted(self.an, self.an.parent.generators, 0)

    @cached_property
    def quotient_base_group(self) -> SpaceGroup:
        return _restricted(self.an, self.an.parent.generators, 1)

    @cached_property
    def fiber(self) -> str:
        return orbifold_type(self.fiber_group)

    @cached_property
    def base(self) -> str:
        return orbifold_type(self.base_group)

    @cached_property
    def quotient_fiber(self) -> str:
        return orbifold_type(self.quotient_fiber_group)

    @cached_property
    def quotient_base(self) -> str:
        return orbifold_type(self.quotient_base_group)

    def action(self, idx: int) -> ActionInvariant:
        st = self.an.structure
        bar, prime = self.an.split(st.reps[idx])
        k = st.element_order(idx)
        return ActionInvariant(
            k,
            affinity_invariant(bar, self.fiber_group, k),
            affinity_invariant(prime, self.base_group, k),
        )

    @cached_property
    def actions(self) -> tuple:
        return tuple(self.action(i) for i in range(self.an.structure.order))

    @cached_property
    def generating_tuple(self) -> tuple:
        """Structure-group generators: one for cyclic, (involution, rotation) for dihedral."""
        st = self.an.structure
        m = st.order
        if m == 1:
            return (0,)
        if st.kind == "cyclic":
            return (next(i for i in range(m) if st.element_order(i) == m),)
        if st.kind == "dihedral":
            n = st.n
            for r in range(m):
                if st.element_order(r) != n:
                    continue
                for s in range(m):
                    if st.element_order(s) == 2 and len(st.generated([s, r])) == m and s not in st.generated([r]):
                        return (s, r)
        raise GroupError(f"structure group of kind {st.kind!r} has no standard generators")

    def quotient_fiber_via_actions(self) -> str:
        """(V/N)/(structure group), built from N and the fiber actions of coset reps."""
        an = self.an
        gens = list(self.fiber_group.generators)
        gens += [an.split(r)[0] for r in an.structure.reps]
        if an.V.dim == 0:
            return "pt"
        return orbifold_type(build(an.V.dim, gens))


def fiber_action_invariant(an: NormalAnalysis, idx: int) -> ActionInvariant:
    if an.V.dim > 2:
        raise GroupError("fiber dimension > 2 unsupported")
    return Fibration(an).action(idx)
