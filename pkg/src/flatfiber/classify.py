"""Finite-order classes in GL(2,Z), pair classes of torus and pillow affinities,
classifying pairs of co-Seifert fibrations and the extension builder.

Coordinates are standard: the torus group is Z^2 acting by translations and
the pillow group is generated by Z^2 and -I.  An affinity is given by any
normalizer element a + A representing it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

from .exact import (
    Mat, hnf, identity, inverse, is_integral, kernel_basis, mat, mat_order, matmul,
    matvec, mneg, msub, transpose,
)
from .fibration import Fibration, affinity_invariant, one_orb_type, reflection_index
from .isometry import (
    AffineIso, Subspace, affine, compose, conjugate, eigenspace, inverse_iso, subspace,
)
from .kernels import find_conjugator
from .normal import NormalAnalysis, completion
from .spacegroup import GroupError, SpaceGroup, build, center_span, contains, same_group
from .splitting import lift_base_isometry

I2 = identity(2)
NEG_I = mneg(I2)
A = mat([[0, -1], [1, 0]])
B = mat([[0, -1], [1, 1]])
C = mat([[0, 1], [1, 0]])


# -- GL(2,Z) -----------------------------------------------------------------

@dataclass(frozen=True)
class ConjClass:
    label: str
    order: int
    det: int

    @property
    def representative(self) -> Mat:
        return CLASS_REPS[self.label]


CLASS_REPS = {
    "I": I2,
    "-I": NEG_I,
    "CA": matmul(C, A),
    "C": C,
    "B^2": matmul(B, B),
    "A": A,
    "B": B,
}
_ORDER_LABEL = {1: "I", 2: "-I", 3: "B^2", 4: "A", 6: "B"}


def _int2(m) -> tuple[int, int, int, int]:
    m = mat(m)
    if len(m) != 2 or any(len(r) != 2 for r in m):
        raise ValueError("expected a 2x2 matrix")
    if not is_integral(m):
        raise ValueError("not unimodular: entries are not integers")
    return int(m[0][0]), int(m[0][1]), int(m[1][0]), int(m[1][1])


def gl2z_finite_order_class(m) -> ConjClass:
    """Conjugacy class in GL(2,Z) of a matrix of finite order."""
    a, b, c, d = _int2(m)
    dt = a * d - b * c
    if dt not in (1, -1):
        raise ValueError(f"not unimodular (det {dt})")
    k = mat([[a, b], [c, d]])
    order = mat_order(k, bound=6)
    if order is None:
        raise ValueError("infinite order")
    if dt == -1:
        # reflections: Z^2 = L+ (+) L- for the CA class, index 2 for the C class
        label = "CA" if reflection_index(k) == 1 else "C"
    else:
        label = _ORDER_LABEL[order]
    return ConjClass(label, order, dt)


def brute_force_class(m, bound: int = 5) -> Optional[str]:
    """Label of the representative conjugate to m by some P with entries in [-bound, bound]."""
    flat = _int2(m)
    for label, r in CLASS_REPS.items():
        rf = tuple(int(x) for row in r for x in row)
        if find_conjugator(flat, rf, bound) is not None:
            return label
    return None


def finite_order_matrices(entry_bound: int = 3) -> list[Mat]:
    """All unimodular 2x2 matrices of finite order with entries in [-b, b]."""
    out = []
    rng = range(-entry_bound, entry_bound + 1)
    for a, b, c, d in product(rng, repeat=4):
        if a * d - b * c not in (1, -1):
            continue
        k = mat([[a, b], [c, d]])
        if mat_order(k, bound=6) is not None:
            out.append(k)
    return out


# -- standard fiber groups ---------------------------------------------------

FIBERS = ("torus", "pillow")


def _fiber_name(fiber: str) -> str:
    f = {"∘": "torus", "o": "torus", "p1": "torus", "2222": "pillow", "p2": "pillow"}.get(fiber, fiber)
    if f not in FIBERS:
        raise ValueError(f"unsupported fiber {fiber!r} (torus or pillow only)")
    return f


@lru_cache(maxsize=None)
def standard_group(fiber: str) -> SpaceGroup:
    f = _fiber_name(fiber)
    gens = [affine([1, 0]), affine([0, 1])]
    if f == "pillow":
        gens.append(affine([0, 0], NEG_I))
    return build(2, gens)


h = Fraction(1, 2)


def _e(x, y, lin=I2) -> AffineIso:
    return affine([x, y], lin)


TORUS_ELEMENTS = {
    "idt": _e(0, 0),
    "h-rot": _e(h, 0),
    "v-rot": _e(0, h),
    "2-sym": _e(h, h),
    "2-rot": _e(0, 0, NEG_I),
    "h-ref": _e(0, 0, matmul(A, C)),
    "v-ref": _e(0, 0, matmul(C, A)),
    "h-grf": _e(h, 0, matmul(C, A)),
    "v-grf": _e(0, h, matmul(A, C)),
    "d-ref": _e(0, 0, C),
    "e-ref": _e(0, 0, mneg(C)),
    "3-aff": _e(0, 0, matmul(B, B)),
    "4-rot": _e(0, 0, A),
    "6-aff": _e(0, 0, B),
    "4-sym": _e(0, h, C),
    "m-aff": _e(0, 0, matmul(C, B)),
    "n-aff": _e(0, 0, matmul(C, matmul(B, B))),
}

PILLOW_ELEMENTS = {
    "idt": _e(0, 0),
    "c-rot": _e(h, h),
    "m-rot": _e(h, 0),
    "c-ref": _e(0, 0, matmul(A, C)),
    "m-ref": _e(h, 0, matmul(A, C)),
    "2-sym": _e(h, h, matmul(A, C)),
    "d-ref": _e(0, 0, C),
    "d-rot": _e(0, 0, A),
    "4-rot": _e(h, 0, A),
    "4-sym": _e(h, 0, C),
    "3-aff": _e(0, 0, B),
    "2-aff": _e(0, 0, matmul(C, B)),
}

# prime marks: left multiplication by a fixed half-translation
_TORUS_MARKS = {"'": "h-rot", "′": "v-rot", "″": "2-sym"}
_PILLOW_MARKS = {"'": "c-rot", "′": "c-rot"}


def named_element(fiber: str, name: str) -> AffineIso:
    """Element from a name such as ``h-ref'``, ``d-rot′`` or ``4-rot^-1``."""
    f = _fiber_name(fiber)
    table = TORUS_ELEMENTS if f == "torus" else PILLOW_ELEMENTS
    marks = _TORUS_MARKS if f == "torus" else _PILLOW_MARKS
    s = name.strip().rstrip(".")
    inv = s.endswith("^-1")
    if inv:
        s = s[:-3].rstrip(".")
    pre = []
    while s and s[-1] in marks:
        pre.append(marks[s[-1]])
        s = s[:-1]
    s = s.rstrip(".")
    if s not in table:
        raise KeyError(f"unknown {f} element {name!r}")
    g = table[s]
    for m in pre:
        g = compose(table[m], g)
    return inverse_iso(g) if inv else g


def parse_pair_label(label: str) -> list[str]:
    body = label.strip().strip("{}")
    return [p.strip() for p in body.split(",") if p.strip()]


# -- validation --------------------------------------------------------------

def _check_normalizes(fiber: str, g: AffineIso) -> None:
    if g.dim != 2:
        raise GroupError("fiber affinities must be 2-dimensional")
    a, b, c, d = _int2(g.lin)
    if a * d - b * c not in (1, -1):
        raise GroupError("linear part is not in GL(2,Z)")
    if fiber == "pillow" and not all((2 * x).denominator == 1 for x in g.trans):
        raise GroupError("translation part not in (1/2)Z^2: does not normalize the pillow group")


def aff_order(fiber: str, g: AffineIso, bound: int = 12) -> Optional[int]:
    """Order of the induced affinity, or None if it exceeds ``bound``."""
    m = standard_group(fiber)
    p = g
    for k in range(1, bound + 1):
        if contains(m, p):
            return k
        p = compose(p, g)
    return None


def _closure(mats: Sequence[Mat], bound: int = 48) -> list[Mat]:
    seen = {I2: None}
    frontier = [I2]
    while frontier:
        nxt = []
        for x in frontier:
            for m in mats:
                y = matmul(x, m)
                if y not in seen:
                    seen[y] = None
                    nxt.append(y)
                    if len(seen) > bound:
                        raise GroupError("linear parts generate an infinite group")
        frontier = nxt
    return list(seen)


# -- canonical keys ----------------------------------------------------------

def _std_set() -> frozenset:
    out = set()
    for gens in ((A, C), (B, C)):
        out.update(_closure(gens))
    return frozenset(out)


STANDARD_MATRICES = _std_set()


def _m4(m: Mat) -> tuple:
    return (int(m[0][0]), int(m[0][1]), int(m[1][0]), int(m[1][1]))


def _mul4(x: tuple, y: tuple) -> tuple:
    return (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])


def _small_conjugators(bound: int = 2) -> tuple:
    """Pairs (P, P^-1) of unimodular matrices with entries in [-bound, bound], one per sign."""
    out = {}
    rng = range(-bound, bound + 1)
    for a, b, c, d in product(rng, repeat=4):
        dt = a * d - b * c
        if dt not in (1, -1) or (-a, -b, -c, -d) in out:
            continue
        out[(a, b, c, d)] = (d * dt, -b * dt, -c * dt, a * dt)
    return tuple(out.items())


SMALL_CONJUGATORS = _small_conjugators()
_STANDARD4 = frozenset(_m4(m) for m in STANDARD_MATRICES)


def _reducing_basis(group: Sequence[Mat]) -> Mat:
    """Q in GL(2,Z) with Q^T G Q Lagrange-reduced, G the averaged form of ``group``."""
    g = [[Fraction(0)] * 2 for _ in range(2)]
    for m in group:
        mt = transpose(m)
        p = matmul(mt, m)
        for i in range(2):
            for j in range(2):
                g[i][j] += p[i][j]

    def ip(u, v):
        return sum(u[i] * g[i][j] * v[j] for i in range(2) for j in range(2))

    b1, b2 = [Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]
    while True:
        if ip(b2, b2) < ip(b1, b1):
            b1, b2 = b2, b1
        mu = round(ip(b1, b2) / ip(b1, b1))
        if mu == 0:
            break
        b2 = [x - mu * y for x, y in zip(b2, b1)]
    return transpose((tuple(b1), tuple(b2)))


def _conj_lin(p: Mat, pi: Mat, g: AffineIso) -> AffineIso:
    return AffineIso(matvec(p, g.trans), matmul(p, matmul(g.lin, pi)))


def _lin_key(fiber: str, m: Mat) -> Mat:
    if fiber == "pillow":
        return min(m, mneg(m))
    return m


@lru_cache(maxsize=4096)
def _torus_projection(lins: tuple, collapse: bool):
    """Projection killing the conjugation directions, and the image of Z^(2k)."""
    k = len(lins)
    n = 2 * k
    w = []
    for a in ((1, 0), (0, 1)):
        row = []
        for m in lins:
            row.extend(matvec(msub(I2, m), tuple(Fraction(x) for x in a)))
        w.append(tuple(row))
    if collapse and k == 2:
        e = _intersect(eigenspace(lins[0], -1), eigenspace(lins[1], -1))
        for v in e.basis:
            w.append((Fraction(0), Fraction(0)) + tuple(v))
    w = [r for r in w if any(r)]
    if w:
        pi = tuple(kernel_basis(tuple(w), n))
    else:
        pi = identity(n)
    if not pi:
        return (), None
    images = [matvec(pi, tuple(Fraction(int(i == j)) for j in range(n))) for i in range(n)]
    return pi, hnf(images, len(pi))


def _trans_key(fiber: str, elems: Sequence[AffineIso], collapse: bool) -> tuple:
    if fiber == "pillow":
        best = None
        for b in product((Fraction(0), h), repeat=2):
            cand = tuple(
                tuple(x % 1 for x in (g.trans[0] + b[0] - (g.lin[0][0] * b[0] + g.lin[0][1] * b[1]),
                                      g.trans[1] + b[1] - (g.lin[1][0] * b[0] + g.lin[1][1] * b[1])))
                for g in elems)
            if best is None or cand < best:
                best = cand
        return best
    pi, lat = _torus_projection(tuple(g.lin for g in elems), collapse)
    if not pi:
        return ()
    x = tuple(t for g in elems for t in g.trans)
    return lat.reduce(matvec(pi, x))


def _intersect(s: Subspace, t: Subspace) -> Subspace:
    if not s.basis or not t.basis:
        return Subspace(s.ambient, ())
    cols = list(s.basis) + [tuple(-x for x in v) for v in t.basis]
    m = transpose(tuple(cols))
    ker = kernel_basis(m, len(cols))
    vecs = []
    for k in ker:
        v = [Fraction(0)] * s.ambient
        for c, b in zip(k[: s.dim], s.basis):
            v = [x + c * y for x, y in zip(v, b)]
        vecs.append(tuple(v))
    return subspace(vecs, s.ambient)


def canonical_key(fiber: str, elems: Sequence[AffineIso], collapse: bool = True) -> tuple:
    """Canonical form of an unordered tuple of affinities up to simultaneous conjugacy.

    With ``collapse`` (torus pairs only) the second element may also be
    shifted by a vector of E1 ∩ E2, which identifies pairs giving isomorphic
    extensions.
    """
    f = _fiber_name(fiber)
    elems = tuple(elems)
    for g in elems:
        _check_normalizes(f, g)
    lins = [g.lin for g in elems]
    grp = _closure(lins + ([NEG_I] if f == "pillow" else []))
    q = _reducing_basis(grp)
    qi = inverse(q)
    elems = tuple(_conj_lin(qi, q, g) for g in elems)
    orders = [(0,)] if len(elems) == 1 else [(0, 1), (1, 0)]
    lins4 = [_m4(g.lin) for g in elems]
    best = None
    for p, pi in SMALL_CONJUGATORS:
        conj4 = [_mul4(_mul4(p, m), pi) for m in lins4]
        if not all(m in _STANDARD4 for m in conj4):
            continue
        pm = ((Fraction(p[0]), Fraction(p[1])), (Fraction(p[2]), Fraction(p[3])))
        conj = [AffineIso(matvec(pm, g.trans), mat([m[:2], m[2:]])) for g, m in zip(elems, conj4)]
        for perm in orders:
            es = [conj[i] for i in perm]
            cand = (tuple(_lin_key(f, g.lin) for g in es), _trans_key(f, es, collapse))
            if best is None or cand < best:
                best = cand
    if best is None:
        raise GroupError("could not conjugate the linear parts into standard form")
    return (f, len(elems)) + best


# -- element and pair classes ------------------------------------------------

@dataclass(frozen=True)
class PairClass:
    fiber: str
    kind: str                 # cyclic | dihedral
    label: str
    pair: tuple               # representative affinities
    key: tuple = ()

    def __str__(self) -> str:
        return self.label


TORUS_ELEMENT_CLASSES = ("idt", "h-rot", "2-rot", "v-ref", "h-grf", "d-ref", "3-aff", "4-rot", "6-aff")
PILLOW_ELEMENT_CLASSES = ("idt", "m-rot", "c-ref", "m-ref", "2-sym", "d-ref", "d-rot", "3-aff", "4-rot", "4-sym")

TORUS_CYCLIC = (
    "{idt, idt}", "{2-rot, 2-rot}", "{h-ref, h-ref}", "{d-ref, d-ref}",
    "{3-aff, 3-aff^-1}", "{4-rot, 4-rot^-1}", "{6-aff, 6-aff^-1}",
)
TORUS_DIHEDRAL = (
    "{idt, idt}", "{idt, h-rot}", "{idt, 2-rot}", "{idt, v-ref}", "{idt, h-grf}", "{idt, d-ref}",
    "{h-rot, h-rot}", "{2-rot, 2-rot}", "{v-ref, v-ref}", "{h-grf, h-grf}", "{d-ref, d-ref}",
    "{h-rot, v-rot}", "{h-rot, 2-rot}", "{h-rot, v-ref}", "{v-rot, v-ref}", "{2-sym, v-ref}",
    "{h-rot, h-grf}", "{v-rot, h-grf}", "{2-sym, h-grf′}", "{v-rot, d-ref}", "{2-sym, d-ref}",
    "{2-rot, v-ref}", "{2-rot, h-grf}", "{2-rot, d-ref}",
    "{v-ref, h-ref}", "{v-ref, h-grf}", "{h-ref', h-grf}", "{h-ref, d-ref}", "{h-grf′, v-grf'}",
    "{h-grf, d-ref}", "{d-ref, e-ref}", "{d-ref, n-aff}", "{m-aff, e-ref}", "{d-ref, m-aff}",
)
# dihedral torus classes whose eigenspace intersection E1 ∩ E2 is nonzero
TORUS_SHIFTABLE = (
    "{2-rot, 2-rot}", "{v-ref, v-ref}", "{h-grf, h-grf}", "{v-ref, h-grf}", "{d-ref, d-ref}",
    "{2-rot, v-ref}", "{2-rot, h-grf}", "{2-rot, d-ref}",
)
PILLOW_CYCLIC = (
    "{idt, idt}", "{m-rot, m-rot}", "{c-ref, c-ref}", "{m-ref, m-ref}", "{2-sym, 2-sym}",
    "{d-ref, d-ref}", "{d-rot, d-rot}", "{3-aff, 3-aff^-1}", "{4-rot, 4-rot^-1}", "{4-sym, 4-sym^-1}",
)
PILLOW_DIHEDRAL = (
    "{idt, idt}", "{idt, m-rot}", "{idt, c-ref}", "{idt, m-ref}", "{idt, 2-sym}", "{idt, d-ref}",
    "{idt, d-rot}",
    "{m-rot, m-rot}", "{c-ref, c-ref}", "{m-ref, m-ref}", "{2-sym, 2-sym}", "{d-ref, d-ref}",
    "{d-rot, d-rot}",
    "{c-rot, m-rot}", "{c-rot, c-ref}", "{c-rot, m-ref}", "{c-rot, 2-sym}", "{c-rot, d-ref}",
    "{c-rot, d-rot}",
    "{m-rot, c-ref}", "{m-rot, m-ref}", "{m-rot′, m-ref}", "{m-rot′, 2-sym}", "{m-rot, d-ref}",
    "{m-rot, d-rot}",
    "{c-ref, m-ref}", "{c-ref, 2-sym}", "{c-ref, d-ref}", "{c-ref, d-rot}",
    "{m-ref, m-ref′}", "{m-ref, 2-sym}", "{m-ref, d-ref}", "{m-ref, d-rot}",
    "{2-sym, d-ref}", "{2-sym, d-rot′}", "{d-ref, d-ref′}", "{d-ref, d-rot}", "{d-ref, d-rot′}",
    "{d-rot, d-rot′}", "{d-ref, 2-aff}",
)

_LABELS = {
    ("torus", "cyclic"): TORUS_CYCLIC,
    ("torus", "dihedral"): TORUS_DIHEDRAL,
    ("pillow", "cyclic"): PILLOW_CYCLIC,
    ("pillow", "dihedral"): PILLOW_DIHEDRAL,
}


def pair_from_label(fiber: str, label: str) -> tuple[AffineIso, ...]:
    return tuple(named_element(fiber, p) for p in parse_pair_label(label))


def _cyclic_key(fiber: str, g: AffineIso) -> tuple:
    f = _fiber_name(fiber)
    _check_normalizes(f, g)
    if f == "torus":
        # the outer automorphism group of the torus group is GL(2,Z)
        return ("torus", "cyclic", gl2z_finite_order_class(g.lin).label)
    if aff_order(f, g) is None:
        raise GroupError("affinity of infinite order")
    gi = inverse_iso(g)
    return min(canonical_key(f, (g,), False), canonical_key(f, (gi,), False))


def _dihedral_key(fiber: str, g1: AffineIso, g2: AffineIso, collapse: bool = True) -> tuple:
    f = _fiber_name(fiber)
    for g in (g1, g2):
        _check_normalizes(f, g)
        o = aff_order(f, g, bound=2)
        if o is None:
            raise GroupError(f"affinity {g!r} does not have order 1 or 2")
    return canonical_key(f, (g1, g2), collapse and f == "torus")


def class_key(fiber: str, kind: str, pair: Sequence[AffineIso], collapse: bool = True) -> tuple:
    if kind == "cyclic":
        return _cyclic_key(fiber, pair[0])
    if kind == "dihedral":
        if len(pair) != 2:
            raise ValueError("dihedral classes need two affinities")
        return _dihedral_key(fiber, pair[0], pair[1], collapse)
    raise ValueError(f"unknown kind {kind!r}")


@lru_cache(maxsize=None)
def _label_index(fiber: str, kind: str) -> dict:
    out = {}
    for label in _LABELS[(fiber, kind)]:
        k = class_key(fiber, kind, pair_from_label(fiber, label))
        if k in out:
            raise AssertionError(f"{label} and {out[k]} share a class")
        out[k] = label
    return out


def label_for(fiber: str, kind: str, pair: Sequence[AffineIso]) -> PairClass:
    f = _fiber_name(fiber)
    k = class_key(f, kind, pair)
    label = _label_index(f, kind).get(k)
    if label is None:
        raise GroupError("pair matches no catalogued class")
    return PairClass(f, kind, label, tuple(pair), k)


@lru_cache(maxsize=None)
def shiftable_keys() -> frozenset:
    """Keys of the torus dihedral classes with E1 ∩ E2 nonzero."""
    return frozenset(class_key("torus", "dihedral", pair_from_label("torus", lab)) for lab in TORUS_SHIFTABLE)


def torus_order2_class(kappa: AffineIso) -> str:
    """Class name of a torus affinity: order at most 2, or linear part of order 3, 4, 6."""
    _check_normalizes("torus", kappa)
    cls = gl2z_finite_order_class(kappa.lin)
    if cls.order <= 2 and aff_order("torus", kappa, bound=2) is None:
        raise GroupError("affinity does not have order 1 or 2")
    return _element_label("torus", kappa)


def pillow_element_class(kappa: AffineIso) -> str:
    _check_normalizes("pillow", kappa)
    if aff_order("pillow", kappa) is None:
        raise GroupError("affinity of infinite order")
    return _element_label("pillow", kappa)


@lru_cache(maxsize=None)
def _element_index(fiber: str) -> dict:
    names = TORUS_ELEMENT_CLASSES if fiber == "torus" else PILLOW_ELEMENT_CLASSES
    table = TORUS_ELEMENTS if fiber == "torus" else PILLOW_ELEMENTS
    return {canonical_key(fiber, (table[n],), False): n for n in names}


def _element_label(fiber: str, g: AffineIso) -> str:
    k = canonical_key(fiber, (g,), False)
    try:
        return _element_index(fiber)[k]
    except KeyError:
        raise GroupError("element matches no catalogued class") from None


def torus_pair_class(kappa: AffineIso, lam: AffineIso) -> PairClass:
    return label_for("torus", "dihedral", (kappa, lam))


def pillow_pair_class(kappa: AffineIso, lam: AffineIso) -> PairClass:
    return label_for("pillow", "dihedral", (kappa, lam))


def aff_equivalent(fiber: str, p: Sequence[AffineIso], q: Sequence[AffineIso]) -> bool:
    """Simultaneous conjugacy of unordered pairs, without the E1 ∩ E2 shift."""
    return canonical_key(fiber, p, False) == canonical_key(fiber, q, False)


# -- enumeration -------------------------------------------------------------

def _pool(fiber: str) -> list[AffineIso]:
    out = []
    for m in sorted(STANDARD_MATRICES):
        for t in product((Fraction(0), h), repeat=2):
            out.append(AffineIso(t, m))
    return out


def enumerate_pair_classes(fiber: str, kind: str) -> list[PairClass]:
    """One class per isomorphism type, found by classifying a pool of normal forms.

    The pool holds every a + K with K in the two maximal finite subgroups
    <A, C> and <B, C> and a in {0, 1/2}^2.
    """
    f = _fiber_name(fiber)
    if kind not in ("cyclic", "dihedral"):
        raise ValueError(f"unknown kind {kind!r}")
    pool = _pool(f)
    seen: dict = {}
    if kind == "cyclic":
        for g in pool:
            if aff_order(f, g) is None:
                continue
            k = class_key(f, kind, (g,))
            seen.setdefault(k, (g, inverse_iso(g)))
    else:
        inv = [g for g in pool if aff_order(f, g, bound=2) is not None]
        for i, g1 in enumerate(inv):
            for g2 in inv[i:]:
                try:
                    k = class_key(f, kind, (g1, g2))
                except GroupError:
                    continue   # product of infinite order
                seen.setdefault(k, (g1, g2))
    index = _label_index(f, kind)
    out = []
    for k, pair in seen.items():
        label = index.get(k, "unnamed")
        rep = pair_from_label(f, label) if label != "unnamed" else pair
        out.append(PairClass(f, kind, label, rep, k))
    order = {lab: i for i, lab in enumerate(_LABELS[(f, kind)])}
    out.sort(key=lambda pc: order.get(pc.label, len(order)))
    return out


# -- extensions --------------------------------------------------------------

def embed(g: AffineIso, last_trans, last_lin) -> AffineIso:
    """g (+) (last_trans + last_lin) acting on E^(k+1)."""
    k = g.dim
    lin = tuple(tuple(g.lin[i]) + (Fraction(0),) for i in range(k))
    lin += (tuple(Fraction(0) for _ in range(k)) + (Fraction(last_lin),),)
    return AffineIso(tuple(g.trans) + (Fraction(last_trans),), lin)


def fiber_generators(m: SpaceGroup) -> list[AffineIso]:
    return [embed(g, 0, 1) for g in m.generators]


def build_extension(m: SpaceGroup, kind: str, affinities: Sequence[AffineIso]) -> SpaceGroup:
    """The space group generated by M (acting trivially on the extra axis) and the lifted affinities.

    cyclic: one affinity d, lifted to d (+) (x -> x + 1).
    dihedral: two affinities of order at most 2, lifted to d1 (+) (x -> -x) and
    d2 (+) (x -> 1 - x).
    The fiber group generators come first in the result's generator list.
    """
    k = m.dim
    affs = list(affinities)
    for d in affs:
        if d.dim != k:
            raise GroupError("affinity dimension does not match the fiber group")
        di = inverse_iso(d)
        for g in m.generators:
            if not (contains(m, conjugate(d, g)) and contains(m, conjugate(di, g))):
                raise GroupError(f"affinity {d!r} does not normalize the fiber group")
    lins = [d.lin for d in affs] + list(m.point_group)
    if kind == "cyclic":
        if len(affs) != 1:
            raise GroupError("cyclic extensions take one affinity")
        lifts = [embed(affs[0], 1, 1)]
    elif kind == "dihedral":
        if len(affs) != 2:
            raise GroupError("dihedral extensions take two affinities")
        for d in affs:
            if not contains(m, compose(d, d)):
                raise GroupError(f"affinity {d!r} does not have order 1 or 2")
        lifts = [embed(affs[0], 0, -1), embed(affs[1], 1, -1)]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    _closure_any(lins, k)
    grp = build(k + 1, fiber_generators(m) + lifts)
    sub = build(k + 1, fiber_generators(m), require_cocompact=False)
    if not same_group(sub, completion(grp, sub)):
        raise GroupError("fiber group is not complete in the extension")
    return grp


def _closure_any(mats: Sequence[Mat], n: int, bound: int = 96) -> None:
    seen = {identity(n)}
    frontier = [identity(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for y in mats:
                z = matmul(x, y)
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
                    if len(seen) > bound:
                        raise GroupError("infinite point-group closure")
        frontier = nxt


# -- classifying pairs -------------------------------------------------------

@dataclass(frozen=True)
class ClassifyingPair:
    fiber: str                       # Conway name of V/N
    kind: str                        # cyclic | dihedral
    affinities: tuple                # induced fiber affinities (standard coordinates when available)
    invariants: tuple                # per affinity: (order, orientation, fixed point)
    label: Optional[str]             # catalogued class for torus and pillow fibers
    e_intersection: Optional[Subspace]

    @property
    def e_dim(self) -> Optional[int]:
        return None if self.e_intersection is None else self.e_intersection.dim


def standard_frame(fiber_group: SpaceGroup) -> Optional[AffineIso]:
    """T with T^-1 M T the standard torus or pillow group, else None."""
    if fiber_group.dim != 2 or fiber_group.lattice.rank != 2:
        return None
    pg = set(fiber_group.point_group)
    p = transpose(fiber_group.lattice.basis)
    if pg == {I2}:
        return AffineIso((Fraction(0), Fraction(0)), p)
    if pg == {I2, NEG_I}:
        c = fiber_group.vs[NEG_I]
        return AffineIso(tuple(x / 2 for x in c), p)
    return None


def _coxeter_lifts(an: NormalAnalysis, q: SpaceGroup) -> list[AffineIso]:
    refl = next(b for b in q.point_group if b[0][0] == -1)
    r0 = q.rep(refl)
    r1 = AffineIso((r0.trans[0] + q.lattice.basis[0][0],), r0.lin)
    return [lift_base_isometry(an, r) for r in (r0, r1)]


def classifying_pair(an: NormalAnalysis) -> ClassifyingPair:
    n = an.parent.dim
    if an.V.dim != n - 1:
        raise GroupError("classifying pairs need a normal subgroup of dimension n - 1")
    fib = Fibration(an)
    q = fib.quotient_base_group
    kind = "cyclic" if one_orb_type(q) == "O" else "dihedral"
    if kind == "cyclic":
        lifts = [lift_base_isometry(an, AffineIso(q.lattice.basis[0], ((Fraction(1),),)))]
    else:
        lifts = _coxeter_lifts(an, q)
    fg = fib.fiber_group
    affs = [an.split(g)[0] for g in lifts]
    invariants = tuple(affinity_invariant(g, fg, max(64, an.structure.order)).as_tuple() for g in affs)
    e = None
    if kind == "dihedral":
        z = center_span(fg)
        e1, e2 = (_intersect(eigenspace(g.lin, -1), z) for g in affs)
        e = _intersect(e1, e2)
    frame = standard_frame(fg)
    label = None
    if frame is not None:
        ti = inverse_iso(frame)
        affs = [compose(ti, compose(g, frame)) for g in affs]
        fiber = "torus" if len(fg.point_group) == 1 else "pillow"
        pair = affs if kind == "dihedral" else [affs[0]]
        label = label_for(fiber, kind, pair).label
    return ClassifyingPair(fib.fiber, kind, tuple(affs), invariants, label, e)
