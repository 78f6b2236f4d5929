"""Splitting of 1 -> N -> G -> G/N -> 1: fixed ordinary points, orthogonal
splittings with witnesses, finite-order obstructions and lifts of generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from .exact import (
    Lattice, Mat, Vec, hnf, identity, kernel_basis, lattice_member, lattice_meet_subspace,
    matmul, matvec, msub, solve_affine, solve_affine_mod_lattice, vadd, vsub,
)
from .fibration import Fibration, one_orb_type
from .isometry import AffineIso, Subspace, compose, ident, inverse_iso, subspace
from .normal import NormalAnalysis, analyze, coset_index
from .spacegroup import GroupError, SpaceGroup, build, center_generators, contains, elements_ball

# denominators used to pick generic points on positive-dimensional pieces
_GENERIC_PRIMES = (97, 89, 83, 79, 73, 71, 67, 61, 59, 53, 47, 43)


# -- affine pieces of the common fixed set -----------------------------------

@dataclass(frozen=True)
class FixedPiece:
    """point + span(directions) inside V, in the coordinates of V's basis."""

    point: Vec
    directions: tuple
    ordinary: bool          # whether a generic point of the piece is ordinary

    @property
    def dim(self) -> int:
        return len(self.directions)


def _stack_lattice(lat: Lattice, copies: int) -> Lattice:
    k = lat.dim
    gens = []
    for c in range(copies):
        for b in lat.basis:
            v = [Fraction(0)] * (k * copies)
            v[c * k:(c + 1) * k] = b
            gens.append(tuple(v))
    return hnf(gens, k * copies)


def _projector(w: Subspace):
    """Linear map V -> V/W (drop W's pivot coordinates) and a section back."""
    k = w.ambient
    pivots = [next(j for j, x in enumerate(b) if x) for b in w.basis]
    keep = [j for j in range(k) if j not in pivots]

    def proj(y: Vec) -> Vec:
        z = list(y)
        for b, p in zip(w.basis, pivots):
            c = z[p]
            if c:
                z = [x - c * t for x, t in zip(z, b)]
        return tuple(z[j] for j in keep)

    def section(u: Vec) -> Vec:
        z = [Fraction(0)] * k
        for j, x in zip(keep, u):
            z[j] = x
        return tuple(z)

    return proj, section, len(keep)


def _coset_reps(big: Lattice, small: Lattice) -> list[Vec]:
    """Representatives of big/small for full-rank lattices of equal rank."""
    r = big.rank
    if r == 0:
        return [tuple(Fraction(0) for _ in range(big.dim))]
    bt = tuple(zip(*big.basis))
    coords = [solve_affine(bt, b) for b in small.basis]
    sub = hnf(coords, r)  # integral lattice inside Z^r
    if sub.denom != 1:
        raise GroupError("sublattice expected")
    diag = [row[p] for row, p in zip(sub.rows, sub.pivots())]
    out = []
    for c in product(*(range(d) for d in diag)):
        out.append(tuple(sum((Fraction(ci) * b[j] for ci, b in zip(c, big.basis)), Fraction(0))
                         for j in range(big.dim)))
    return out


def _stabilized(fiber: SpaceGroup, y: Vec) -> bool:
    """Whether some non-identity element of the fiber group fixes y."""
    k = fiber.dim
    for d in fiber.point_group:
        if d == identity(k):
            continue
        if lattice_member(fiber.lattice, vsub(vsub(y, matvec(d, y)), fiber.vs[d])):
            return True
    return False


def _same_orbit(fiber: SpaceGroup, y: Vec, z: Vec) -> bool:
    for d in fiber.point_group:
        if lattice_member(fiber.lattice, vsub(vsub(z, matvec(d, y)), fiber.vs[d])):
            return True
    return False


def _pieces_for(fiber: SpaceGroup, maps: list[AffineIso], choice: tuple) -> list[FixedPiece]:
    """Solutions of d_i g_i y = y (mod the fiber lattice), for chosen fiber point-group parts d_i."""
    k = fiber.dim
    ident_k = identity(k)
    if not maps:
        rows, rhs, copies = (), (), 0
    else:
        rows, rhs = [], []
        for g, d in zip(maps, choice):
            m = msub(ident_k, matmul(d, g.lin))
            rows.extend(m)
            rhs.extend(vadd(fiber.vs[d], matvec(d, g.trans)))
        rows, rhs, copies = tuple(rows), tuple(rhs), len(maps)
    if copies:
        big = _stack_lattice(fiber.lattice, copies)
        y0 = solve_affine_mod_lattice(rows, rhs, big, ncols=k)
        if y0 is None:
            return []
        # directions: common kernel; discrete part: preimage of the stacked lattice
        w = subspace(kernel_basis(rows, k), k)
        image_lat = _preimage_lattice(rows, big, k)
    else:
        y0 = tuple(Fraction(0) for _ in range(k))
        w = subspace(identity(k), k)
        image_lat = []
    proj, section, q = _projector(w)
    if q == 0:
        reps = [tuple(Fraction(0) for _ in range(k))]
    else:
        lam = hnf([proj(v) for v in list(image_lat) + list(fiber.lattice.basis)], q)
        small = hnf([proj(v) for v in fiber.lattice.basis], q)
        reps = [section(u) for u in _coset_reps(lam, small)]
    pieces = []
    for r in reps:
        p0 = vadd(y0, r)
        pieces.append(_make_piece(fiber, p0, w))
    return pieces


def _preimage_lattice(rows: Mat, big: Lattice, k: int) -> list[Vec]:
    """Discrete generators of {y : rows*y in big} (modulo the kernel)."""
    cols = tuple(zip(*rows)) if rows else ()
    image = subspace(cols, len(rows)) if cols else subspace([], len(rows))
    meet = lattice_meet_subspace(big, image.basis)
    out = []
    for b in meet.basis:
        y = solve_affine(rows, b, k)
        if y is None:
            raise GroupError("internal: lattice vector outside the image")
        out.append(y)
    return out


def _make_piece(fiber: SpaceGroup, p0: Vec, w: Subspace) -> FixedPiece:
    if w.dim == 0:
        return FixedPiece(p0, (), not _stabilized(fiber, p0))
    # a fiber element whose linear part fixes W pointwise either stabilizes the
    # whole piece or nothing on it; any other stabilizes a lower-dimensional part
    k = fiber.dim
    for d in fiber.point_group:
        if d == identity(k):
            continue
        if all(matvec(d, b) == b for b in w.basis):
            if lattice_member(fiber.lattice, vsub(vsub(p0, matvec(d, p0)), fiber.vs[d])):
                return FixedPiece(p0, w.basis, False)
    return FixedPiece(p0, w.basis, True)


def generic_point(fiber: SpaceGroup, piece: FixedPiece) -> Optional[Vec]:
    """An ordinary rational point of the piece (checked exactly)."""
    if piece.dim == 0:
        return piece.point if piece.ordinary else None
    if not piece.ordinary:
        return None
    n = len(_GENERIC_PRIMES)
    for i in range(n):
        y = piece.point
        for j, b in enumerate(piece.directions):
            p = _GENERIC_PRIMES[(i + j) % n]
            y = vadd(y, tuple(Fraction(x, p) * (j + 1) for x in b))
        if not _stabilized(fiber, y):
            return y
    raise GroupError("no generic point found on a piece with ordinary points")


def _structure_fiber_maps(an: NormalAnalysis, fib: Fibration) -> list[AffineIso]:
    st = an.structure
    gens = fib.generating_tuple
    return [an.split(st.reps[i])[0] for i in gens if i != 0]


def common_fixed_set(an: NormalAnalysis) -> list[FixedPiece]:
    """Pieces of the subset of V/N fixed by the whole structure group.

    Zero-dimensional pieces are listed once per N-orbit.
    """
    if not an.dual_exists:
        raise GroupError("structure group infinite")
    if an.V.dim > 2:
        raise GroupError("fiber dimension > 2 unsupported")
    fib = Fibration(an)
    fiber = fib.fiber_group
    maps = _structure_fiber_maps(an, fib)
    pieces: list[FixedPiece] = []
    for choice in product(fiber.point_group, repeat=len(maps)):
        for pc in _pieces_for(fiber, maps, choice):
            if pc.dim == 0 and any(q.dim == 0 and _same_orbit(fiber, q.point, pc.point) for q in pieces):
                continue
            pieces.append(pc)
    # drop points lying on a positive-dimensional piece already present
    out = []
    for pc in pieces:
        if pc.dim == 0 and any(q.dim > 0 and _on_piece(fiber, pc.point, q) for q in pieces):
            continue
        out.append(pc)
    return out


def _on_piece(fiber: SpaceGroup, y: Vec, piece: FixedPiece) -> bool:
    cols = tuple(zip(*piece.directions))
    for d in fiber.point_group:
        z = vadd(matvec(d, y), fiber.vs[d])
        diff = vsub(z, piece.point)
        lat = fiber.lattice
        if solve_affine_mod_lattice(cols, diff, lat, ncols=piece.dim) is not None:
            return True
    return False


def _to_ambient(an: NormalAnalysis, y: Vec) -> Vec:
    n = an.parent.dim
    out = tuple(Fraction(0) for _ in range(n))
    for c, b in zip(y, an.V.basis):
        out = vadd(out, tuple(c * x for x in b))
    return out


def fixed_ordinary_point(an: NormalAnalysis) -> Optional[Vec]:
    """A point of V (ambient coordinates) whose N-orbit is ordinary and fixed by the structure group."""
    if not an.dual_exists:
        raise GroupError("structure group infinite")
    if an.V.dim > 2:
        raise GroupError("fiber dimension > 2 unsupported")
    fiber = Fibration(an).fiber_group
    for pc in common_fixed_set(an):
        y = generic_point(fiber, pc)
        if y is not None:
            return _to_ambient(an, y)
    return None


# -- orthogonal splitting ----------------------------------------------------

@dataclass(frozen=True)
class OrthogonalSplit:
    v0: Vec
    sigma_generators: tuple
    sigma: SpaceGroup = field(repr=False)


def _v_component(an: NormalAnalysis, x: Vec) -> Vec:
    y = an.split(AffineIso(x, identity(an.parent.dim)))[0].trans
    return _to_ambient(an, y)


def _align_to_point(an: NormalAnalysis, g: AffineIso, v0: Vec) -> AffineIso:
    """n*g for the n in N making the V-part of n*g fix v0."""
    nsub = an.N
    c = _v_component(an, g.trans)
    for d in nsub.point_group:
        t = vsub(v0, matvec(d, vadd(c, matvec(g.lin, v0))))
        if lattice_member(nsub.lattice, vsub(t, nsub.vs[d])):
            return compose(AffineIso(t, d), g)
    raise GroupError("coset does not fix the chosen point")


def stabilizes_slice(an: NormalAnalysis, g: AffineIso, v0: Vec) -> bool:
    """Whether g maps V-perp + v0 to itself."""
    c = _v_component(an, g.trans)
    return vadd(c, matvec(g.lin, v0)) == v0


def orthogonal_split(an: NormalAnalysis) -> Optional[OrthogonalSplit]:
    v0 = fixed_ordinary_point(an)
    if v0 is None:
        return None
    gens = list(an.K.generators) if an.K.generators else []
    gens = [g for g in gens if g != ident(an.parent.dim)]
    for r in an.structure.reps[1:]:
        gens.append(_align_to_point(an, r, v0))
    if not gens:
        gens = [ident(an.parent.dim)]
    sigma = build(an.parent.dim, gens, require_cocompact=False)
    split = OrthogonalSplit(v0, tuple(gens), sigma)
    verify_split(an, split)
    return split


def verify_split(an: NormalAnalysis, split: OrthogonalSplit, radius: int = 1) -> None:
    """Re-check G = N*Sigma, N cap Sigma = 1 on a word ball, and Span(Sigma) = V-perp."""
    for g in split.sigma_generators:
        if not contains(an.parent, g):
            raise GroupError("witness element outside the group")
        if not stabilizes_slice(an, g, split.v0):
            raise GroupError("witness element does not stabilize the slice")
    covered = {0}
    for g in split.sigma.reps():
        covered.add(coset_index(an, g))
    covered |= {coset_index(an, compose(g, h)) for g in split.sigma.reps() for h in split.sigma.reps()}
    if len(covered) != an.structure.order:
        raise GroupError("witness does not cover the structure group")
    if subspace(split.sigma.lattice.basis, an.parent.dim) != an.Vperp:
        raise GroupError("witness span differs from V-perp")
    e = ident(an.parent.dim)
    for g in elements_ball(an.N, radius):
        if g != e and contains(split.sigma, g):
            raise GroupError("witness meets N nontrivially")


# -- obstructions ------------------------------------------------------------

def _lift_from_kernel(an: NormalAnalysis, target: AffineIso) -> Optional[AffineIso]:
    """The element of K acting on V-perp as ``target`` (V-perp coordinates)."""
    k = an.K
    for d in k.point_group:
        rep = k.rep(d)
        _, rp = an.split(rep)
        if rp.lin != target.lin:
            continue
        diff = vsub(target.trans, rp.trans)
        amb = tuple(Fraction(0) for _ in range(an.parent.dim))
        for c, b in zip(diff, an.Vperp.basis):
            amb = vadd(amb, tuple(c * x for x in b))
        if lattice_member(k.lattice, amb):
            return compose(AffineIso(amb, identity(an.parent.dim)), rep)
    return None


def _finite_order_in_coset(an: NormalAnalysis, r: AffineIso) -> Optional[AffineIso]:
    """Some k*r (k in K) whose action on V-perp has a fixed point, i.e. finite order mod N."""
    fib = Fibration(an)
    base = fib.base_group
    _, rp = an.split(r)
    m = base.dim
    for d in base.point_group:
        g = compose(base.rep(d), rp)
        x = solve_affine_mod_lattice(msub(identity(m), g.lin), g.trans, base.lattice, ncols=m)
        if x is None:
            continue
        shift = vsub(vsub(x, matvec(g.lin, x)), g.trans)
        target = compose(AffineIso(shift, identity(m)), base.rep(d))
        k = _lift_from_kernel(an, target)
        if k is None:
            raise GroupError("internal: base element without a kernel lift")
        return compose(k, r)
    return None


def fixed_point_obstruction(an: NormalAnalysis) -> Optional[AffineIso]:
    """An element of finite order modulo N whose structure class moves every point of V/N."""
    if not an.dual_exists:
        raise GroupError("structure group infinite")
    fib = Fibration(an)
    for i, r in enumerate(an.structure.reps):
        if i == 0:
            continue
        if fib.actions[i].fiber.fixed_point:
            continue
        w = _finite_order_in_coset(an, r)
        if w is not None:
            return w
    return None


def free_quotient(an: NormalAnalysis) -> bool:
    """Whether G/N is free abelian (then every extension by it splits)."""
    return len(Fibration(an).quotient_base_group.point_group) == 1


def seifert_splits(an: NormalAnalysis) -> bool:
    g = an.parent
    if g.dim != 3 or an.V.dim != 1 or not an.complete or not an.dual_exists:
        raise GroupError("applicability: catalogued 3D Seifert fibrations only")
    m = an.structure.order
    if m == 1:
        return True
    if m != 2:
        return False
    fib = Fibration(an)
    return fib.fiber == "I" or fib.quotient_fiber == "I"


def center_split(grp: SpaceGroup) -> bool:
    """Whether 1 -> Z(G) -> G -> G/Z(G) -> 1 splits."""
    gens = center_generators(grp)
    if not gens:
        raise GroupError("center trivial")
    an = analyze(grp, gens)
    if not an.dual_exists:
        raise GroupError("internal: center has no orthogonal dual")
    return an.structure.order == 1


@dataclass(frozen=True)
class SplitVerdict:
    splits_orthogonally: Optional[bool]
    witness: Optional[OrthogonalSplit] = None
    fixed_point_obstruction: Optional[AffineIso] = None
    seifert_criterion: Optional[bool] = None
    free_quotient: bool = False

    @property
    def splits(self) -> Optional[bool]:
        if self.seifert_criterion is not None:
            return self.seifert_criterion
        if self.splits_orthogonally or self.free_quotient:
            return True
        if self.fixed_point_obstruction is not None:
            return False
        return None


def split_verdict(an: NormalAnalysis) -> SplitVerdict:
    obstruction = fixed_point_obstruction(an)
    split = None if obstruction is not None else orthogonal_split(an)
    orth: Optional[bool] = split is not None
    if obstruction is None and split is None and not _orthogonal_decidable(an):
        orth = None
    seifert = None
    if an.parent.dim == 3 and an.V.dim == 1 and an.complete:
        seifert = seifert_splits(an)
    return SplitVerdict(orth, split, obstruction, seifert, free_quotient(an))


def _orthogonal_decidable(an: NormalAnalysis) -> bool:
    # the fixed-point criterion decides orthogonal splitting exactly
    return an.V.dim <= 2


# -- lifting generators of G/N -----------------------------------------------

def _base_line(an: NormalAnalysis) -> SpaceGroup:
    if an.Vperp.dim != 1:
        raise GroupError("needs a one-dimensional base (dim N = n - 1)")
    return Fibration(an).quotient_base_group


def lift_cyclic_generator(an: NormalAnalysis) -> Optional[tuple[int, AffineIso]]:
    """(structure index, delta) with delta*N generating the infinite cyclic G/N.

    The index is the structure-group element rotating V-perp/K by 1/m of a turn.
    """
    q = _base_line(an)
    if one_orb_type(q) != "O":
        raise GroupError("G/N is not infinite cyclic")
    delta = lift_base_isometry(an, AffineIso(q.lattice.basis[0], ((Fraction(1),),)))
    i = coset_index(an, delta)
    m = an.structure.order
    kstep = Fibration(an).base_group.lattice.basis[0][0]
    turn = (an.split(delta)[1].trans[0] / kstep) % 1
    if turn not in (Fraction(1, m) % 1, Fraction(-1, m) % 1):
        return None
    return i, delta


def lift_coxeter_generators(an: NormalAnalysis) -> Optional[tuple[tuple[int, int], tuple[AffineIso, AffineIso]]]:
    """Structure indices and lifts of a Coxeter pair of the infinite dihedral G/N."""
    q = _base_line(an)
    if one_orb_type(q) != "I":
        raise GroupError("G/N is not infinite dihedral")
    # Coxeter generators of the quotient: reflections in adjacent fixed points
    refl = next(b for b in q.point_group if b[0][0] == -1)
    r0 = q.rep(refl)
    step = q.lattice.basis[0][0]
    r1 = AffineIso((r0.trans[0] + step,), r0.lin)
    lifts = []
    for tau in (r0, r1):
        lifts.append(lift_base_isometry(an, tau))
    st = an.structure
    idx = tuple(coset_index(an, g) for g in lifts)
    m = st.order
    fib = Fibration(an)
    kdih = one_orb_type(fib.base_group) == "I"
    ok = m == 1
    if m == 2 and kdih:
        ok = 0 in idx and any(fib.actions[i].base.label == "ref" for i in idx if i)
    if m % 2 == 0 and not kdih and m > 1:
        _, pp = an.split(compose(lifts[0], lifts[1]))
        kstep = fib.base_group.lattice.basis[0][0]
        turn = (pp.trans[0] / kstep) % 1
        ok = (all(fib.actions[i].base.label == "ref" for i in idx)
              and turn in (Fraction(2, m) % 1, Fraction(-2, m) % 1))
    return (idx, tuple(lifts)) if ok else None


def lift_base_isometry(an: NormalAnalysis, tau: AffineIso) -> AffineIso:
    for r in an.structure.reps:
        _, rp = an.split(r)
        need = compose(tau, inverse_iso(rp))
        k = _lift_from_kernel(an, need)
        if k is not None:
            return compose(k, r)
    raise GroupError("base isometry not induced by the group")
