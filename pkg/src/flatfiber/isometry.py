"""Affine maps x -> a + A x, invariant Gram forms, and subspace splittings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Optional, Sequence

from .exact import (
    Mat, Vec, denominator_of, det, fmt_frac, identity, inverse, is_integral, kernel_basis,
    mat, matmul, matvec, msub, row_space_basis, transpose,
    vadd, vec, vneg, zeros,
)


@dataclass(frozen=True)
class AffineIso:
    """The affine map x -> trans + lin @ x."""

    trans: Vec
    lin: Mat

    def __post_init__(self):
        if len(self.lin) != len(self.trans) or any(len(r) != len(self.trans) for r in self.lin):
            raise ValueError("dimension mismatch between translation and linear part")

    @property
    def dim(self) -> int:
        return len(self.trans)

    def __mul__(self, other: "AffineIso") -> "AffineIso":
        return compose(self, other)

    def __call__(self, x: Vec) -> Vec:
        return apply(self, x)

    def is_translation(self) -> bool:
        return self.lin == identity(self.dim)

    def __repr__(self) -> str:
        t = ",".join(fmt_frac(x) for x in self.trans)
        m = ";".join(",".join(fmt_frac(x) for x in r) for r in self.lin)
        return f"AffineIso(({t}) + [{m}])"


def affine(trans: Iterable, lin: Optional[Iterable] = None) -> AffineIso:
    t = vec(trans)
    return AffineIso(t, identity(len(t)) if lin is None else mat(lin))


def translation(v: Iterable) -> AffineIso:
    return affine(v)


def linear(m: Iterable) -> AffineIso:
    a = mat(m)
    return AffineIso(tuple(Fraction(0) for _ in a), a)


def ident(n: int) -> AffineIso:
    return AffineIso(tuple(Fraction(0) for _ in range(n)), identity(n))


def compose(g: AffineIso, h: AffineIso) -> AffineIso:
    """(a+A)(b+B) = (a+Ab) + AB."""
    if g.dim != h.dim:
        raise ValueError("dimension mismatch")
    return AffineIso(vadd(g.trans, matvec(g.lin, h.trans)), matmul(g.lin, h.lin))


@lru_cache(maxsize=65536)
def inverse_iso(g: AffineIso) -> AffineIso:
    ai = inverse(g.lin)
    return AffineIso(vneg(matvec(ai, g.trans)), ai)


def apply(g: AffineIso, x: Vec) -> Vec:
    if len(x) != g.dim:
        raise ValueError("dimension mismatch")
    return vadd(g.trans, matvec(g.lin, x))


def conjugate(g: AffineIso, h: AffineIso) -> AffineIso:
    """g h g^-1."""
    return compose(compose(g, h), inverse_iso(g))


def power(g: AffineIso, k: int) -> AffineIso:
    base = g if k >= 0 else inverse_iso(g)
    out = ident(g.dim)
    for _ in range(abs(k)):
        out = compose(out, base)
    return out


def word(gens: Sequence[AffineIso], letters: Iterable[tuple[int, int]]) -> AffineIso:
    """Product of gens[i]**e over (i, e) pairs, left to right."""
    out = ident(gens[0].dim)
    for i, e in letters:
        out = compose(out, power(gens[i], e))
    return out


# -- Gram forms --------------------------------------------------------------

@dataclass(frozen=True)
class GramForm:
    G: Mat

    def __post_init__(self):
        g = self.G
        if g != transpose(g):
            raise ValueError("Gram form not symmetric")
        for k in range(1, len(g) + 1):
            if det(tuple(r[:k] for r in g[:k])) <= 0:
                raise ValueError("Gram form not positive definite")

    def pair(self, u: Vec, v: Vec) -> Fraction:
        return sum((u[i] * self.G[i][j] * v[j] for i in range(len(u)) for j in range(len(v))), Fraction(0))

    def norm(self, u: Vec) -> Fraction:
        return self.pair(u, u)


def invariant_gram(point_group: Sequence[Mat]) -> GramForm:
    """Average of B^T B over a finite matrix group."""
    pg = list(dict.fromkeys(point_group))
    if not pg:
        raise ValueError("empty point group")
    members = set(pg)
    for a in pg:
        for b in pg:
            if matmul(a, b) not in members:
                raise ValueError("point group list is not closed under multiplication")
    n = len(pg[0])
    acc = zeros(n, n)
    for b in pg:
        bt = transpose(b)
        acc = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(acc, matmul(bt, b)))
    k = len(pg)
    g = tuple(tuple(x / k for x in r) for r in acc)
    d = denominator_of(g)
    # scale to a primitive integer form; invariance is unaffected
    c = reduce(gcd, (int(x * d) for r in g for x in r), 0) or 1
    return GramForm(tuple(tuple(x * d / c for x in r) for r in g))


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, v: Vec) -> bool:
        if not any(v):
            return True
        if not self.basis:
            return False
        # basis rows are in RREF, so reduction on pivot columns decides membership
        w = list(v)
        for b in self.basis:
            p = next(j for j, x in enumerate(b) if x)
            c = w[p]
            if c:
                w = [x - c * y for x, y in zip(w, b)]
        return not any(w)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(b in self for b in other.basis)

    def coords(self, v: Vec) -> Vec:
        """Coordinates of v in this subspace's basis."""
        if not self.basis:
            if any(v):
                raise ValueError("vector not in subspace")
            return ()
        if v not in self:
            raise ValueError("vector not in subspace")
        return tuple(v[next(j for j, x in enumerate(b) if x)] for b in self.basis)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fmt_frac(x) for x in b) for b in self.basis)
        return f"Subspace(dim={self.dim}, [{body}])"


def subspace(vectors: Iterable[Sequence], ambient: int) -> Subspace:
    rows = tuple(vec(v) for v in vectors)
    rows = tuple(r for r in rows if any(r))
    return Subspace(ambient, row_space_basis(rows))


def whole(n: int) -> Subspace:
    return Subspace(n, identity(n))


def orthogonal_complement(v: Subspace, g: GramForm) -> Subspace:
    n = v.ambient
    if not v.basis:
        return whole(n)
    k = kernel_basis(matmul(v.basis, g.G))
    return Subspace(n, row_space_basis(tuple(k)) if k else ())


def fixed_subspace(mats: Iterable[Mat], n: int) -> Subspace:
    """Common fixed space of a set of matrices."""
    rows = []
    for m in mats:
        rows.extend(msub(m, identity(n)))
    rows = tuple(r for r in rows if any(r))
    if not rows:
        return whole(n)
    return Subspace(n, tuple(kernel_basis(rows)))


def eigenspace(m: Mat, lam: int) -> Subspace:
    n = len(m)
    rows = tuple(tuple(m[i][j] - (lam if i == j else 0) for j in range(n)) for i in range(n))
    rows = tuple(r for r in rows if any(r))
    if not rows:
        return whole(n)
    return Subspace(n, tuple(kernel_basis(rows)))


def is_invariant(m: Mat, v: Subspace) -> bool:
    return all(matvec(m, b) in v for b in v.basis)


@lru_cache(maxsize=4096)
def _frame(v: Subspace, w: Subspace) -> tuple[Mat, Mat]:
    cols = v.basis + w.basis
    if len(cols) != v.ambient:
        raise ValueError("subspace and complement do not span the space")
    bm = transpose(cols)
    return bm, inverse(bm)


def split_coords(x: Vec, v: Subspace, w: Subspace) -> tuple[Vec, Vec]:
    """Coordinates of x in the V basis and in the W basis."""
    _, bi = _frame(v, w)
    y = matvec(bi, x)
    return y[: v.dim], y[v.dim:]


def restrict(g: AffineIso, v: Subspace, gram: GramForm,
             vperp: Optional[Subspace] = None) -> tuple[AffineIso, AffineIso]:
    """Block pieces of g on V and on its orthogonal complement."""
    w = vperp if vperp is not None else orthogonal_complement(v, gram)
    if not is_invariant(g.lin, v):
        raise ValueError("subspace not invariant under the linear part")
    if not is_invariant(g.lin, w):
        raise ValueError("orthogonal complement not invariant under the linear part")
    bm, bi = _frame(v, w)
    m = matmul(bi, matmul(g.lin, bm))
    t = matvec(bi, g.trans)
    k = v.dim
    bar = AffineIso(t[:k], tuple(r[:k] for r in m[:k]))
    prime = AffineIso(t[k:], tuple(r[k:] for r in m[k:]))
    return bar, prime


def is_isometry(g: AffineIso, gram: GramForm) -> bool:
    return matmul(transpose(g.lin), matmul(gram.G, g.lin)) == gram.G


def lin_is_integral(g: AffineIso) -> bool:
    return is_integral(g.lin)
