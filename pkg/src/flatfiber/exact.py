"""Exact rational linear algebra and integer lattice normal forms.

Matrices are tuples of row tuples of ``Fraction``; vectors are tuples of
``Fraction``.  Both are hashable, so they can key dictionaries and sets.
Heavy lifting (rref, null spaces, inverses, Smith form) is delegated to
sympy's ``DomainMatrix`` over QQ and ZZ.  The row Hermite normal form is
computed here because sympy uses the column convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence, Union

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

Vec = tuple
Mat = tuple
Number = Union[int, Fraction, str]

__all__ = [
    "Fraction", "Vec", "Mat", "Lattice",
    "frac", "vec", "mat", "identity", "zeros", "transpose", "matmul", "matvec",
    "vecmat", "madd", "msub", "mneg", "vadd", "vsub", "vneg", "vscale",
    "dot", "det", "inverse", "rank", "is_integral", "denominator_of",
    "rref", "kernel_basis", "left_kernel_basis", "row_space_basis",
    "hnf_int", "hnf", "snf", "integer_left_kernel", "solve_affine",
    "solve_mixed", "solve_affine_mod_lattice", "lattice_member",
    "lattice_sum", "lattice_intersection", "lattice_index",
    "lattice_meet_subspace", "mat_order", "fmt_frac",
]


def frac(x: Number) -> Fraction:
    """Parse ``x`` as an exact rational; accepts ints, Fractions and 'p/q' strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational literal")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable[Number]) -> Vec:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable[Number]]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


@lru_cache(maxsize=None)
def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Mat:
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def matmul(a: Mat, b: Mat) -> Mat:
    bt = tuple(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(a: Mat, v: Vec) -> Vec:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def vecmat(v: Vec, a: Mat) -> Vec:
    return tuple(sum((x * y for x, y in zip(v, col)), Fraction(0)) for col in zip(*a))


def madd(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def msub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mneg(a: Mat) -> Mat:
    return tuple(tuple(-x for x in r) for r in a)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(c: Number, a: Vec) -> Vec:
    c = frac(c)
    return tuple(c * x for x in a)


def dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def is_integral(xs) -> bool:
    if isinstance(xs, Fraction):
        return xs.denominator == 1
    return all(is_integral(x) for x in xs)


def denominator_of(xs) -> int:
    """Least common denominator of a vector or matrix."""
    if isinstance(xs, Fraction):
        return xs.denominator
    return reduce(math.lcm, (denominator_of(x) for x in xs), 1)


# -- sympy bridges -----------------------------------------------------------

def _to_qq(m: Mat, ncols: Optional[int] = None) -> DomainMatrix:
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    return DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in m], (rows, cols), QQ)


def _from_dm(dm: DomainMatrix) -> Mat:
    return tuple(tuple(frac(x) for x in row) for row in dm.to_list())


def _to_zz(m: Sequence[Sequence[int]], shape: tuple[int, int]) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(x)) for x in r] for r in m], shape, ZZ)


@lru_cache(maxsize=65536)
def det(m: Mat) -> Fraction:
    if not m:
        return Fraction(1)
    return frac(_to_qq(m).det())


@lru_cache(maxsize=65536)
def inverse(m: Mat) -> Mat:
    if det(m) == 0:
        raise ValueError("linear part not invertible")
    return _from_dm(_to_qq(m).inv())


def rref(m: Mat, ncols: Optional[int] = None) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form (zero rows kept) and pivot columns."""
    if not m:
        return m, ()
    r, piv = _to_qq(m).rref()
    return _from_dm(r), tuple(int(p) for p in piv)


def rank(m: Mat) -> int:
    return len(rref(m)[1]) if m else 0


def kernel_basis(m: Mat, ncols: Optional[int] = None) -> list[Vec]:
    """Basis of the right null space, normalized to RREF rows."""
    n = len(m[0]) if m else ncols
    if n is None:
        raise ValueError("ncols required for an empty matrix")
    if n == 0:
        return []
    if not m:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    ns = _to_qq(m).nullspace()
    rows = _from_dm(ns)
    rows = tuple(r for r in rows if any(r))
    if not rows:
        return []
    return list(row_space_basis(rows))


def left_kernel_basis(m: Mat, nrows: Optional[int] = None) -> list[Vec]:
    """Rows q with q*m = 0."""
    if not m:
        return kernel_basis((), nrows)
    return kernel_basis(transpose(m), len(m))


def row_space_basis(rows: Sequence[Vec]) -> tuple[Vec, ...]:
    """Canonical basis (nonzero RREF rows) of the span of ``rows``."""
    if not rows:
        return ()
    r, piv = rref(tuple(rows))
    return tuple(r[i] for i in range(len(piv)))


# -- integer normal forms ----------------------------------------------------

def hnf_int(rows: Sequence[Sequence[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Row Hermite normal form of an integer matrix, zero rows dropped.

    Upper echelon, positive pivots, entries above a pivot in [0, pivot).
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    m = len(a)
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[best] = a[best], a[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return tuple(tuple(row) for row in a[:r])


def snf(m: Sequence[Sequence[int]]) -> tuple[tuple, tuple, tuple]:
    """Smith form: returns (D, U, V) of int tuples with D = U*m*V."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    ident = lambda k: tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    if rows == 0 or cols == 0 or not any(any(r) for r in m):
        return tuple(tuple(int(x) for x in r) for r in m), ident(rows), ident(cols)
    d, u, v = smith_normal_decomp(_to_zz(m, (rows, cols)))
    conv = lambda dm: tuple(tuple(int(x) for x in row) for row in dm.to_list())
    d, u, v = conv(d), conv(u), conv(v)
    # sympy may leave negative diagonal entries; fold signs into U
    u = list(u)
    for i in range(min(rows, cols)):
        if d[i][i] < 0:
            u[i] = tuple(-x for x in u[i])
    d = tuple(tuple(abs(x) for x in r) for r in d)
    return d, tuple(u), v


def integer_left_kernel(m: Sequence[Sequence[int]], nrows: int) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^nrows : x*m = 0}."""
    if nrows == 0:
        return []
    if not m or not m[0]:
        return [tuple(int(i == j) for j in range(nrows)) for i in range(nrows)]
    d, u, _ = snf(m)
    rk = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i] != 0)
    return [tuple(u[i]) for i in range(rk, nrows)]


# -- lattices ----------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """The lattice (1/denom) * rowspace_Z(rows) inside Q^dim.

    ``rows`` is an integer row HNF and ``denom`` is minimal, so equal lattices
    compare equal.
    """

    dim: int
    denom: int
    rows: tuple

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> tuple[Vec, ...]:
        return tuple(tuple(Fraction(x, self.denom) for x in r) for r in self.rows)

    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    def __contains__(self, v) -> bool:
        return lattice_member(self, v)

    def reduce(self, v: Vec) -> Vec:
        """Canonical representative of the coset v + L."""
        w = [x * self.denom for x in v]
        for row in self.rows:
            p = next(j for j, x in enumerate(row) if x)
            q = math.floor(w[p] / row[p])
            if q:
                w = [x - q * y for x, y in zip(w, row)]
        return tuple(Fraction(x) / self.denom for x in w)

    def transform(self, a: Mat) -> "Lattice":
        """Image of the lattice under the linear map a."""
        return hnf([matvec(a, b) for b in self.basis], self.dim)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fmt_frac(x) for x in b) for b in self.basis)
        return f"Lattice(dim={self.dim}, [{body}])"


def hnf(generators: Iterable[Sequence[Number]], dim: Optional[int] = None) -> Lattice:
    """Canonical lattice generated over Z by rational vectors."""
    gens = [vec(g) for g in generators]
    if dim is None:
        if not gens:
            raise ValueError("dimension required for an empty generating set")
        dim = len(gens[0])
    if any(len(g) != dim for g in gens):
        raise ValueError("generator dimension mismatch")
    d = denominator_of(gens) if gens else 1
    rows = hnf_int([[int(x * d) for x in g] for g in gens], dim)
    g = reduce(math.gcd, (x for r in rows for x in r), d)
    if g > 1:
        d //= g
        rows = tuple(tuple(x // g for x in r) for r in rows)
    return Lattice(dim, d, rows)


def lattice_member(lat: Lattice, v: Sequence[Number]) -> bool:
    w = [frac(x) * lat.denom for x in v]
    if any(x.denominator != 1 for x in w):
        return False
    w = [int(x) for x in w]
    for row in lat.rows:
        p = next(j for j, x in enumerate(row) if x)
        q, rem = divmod(w[p], row[p])
        if rem:
            return False
        if q:
            w = [x - q * y for x, y in zip(w, row)]
    return not any(w)


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    return hnf(list(a.basis) + list(b.basis), a.dim)


def _common(a: Lattice, b: Lattice):
    d = math.lcm(a.denom, b.denom)
    ra = [[x * (d // a.denom) for x in r] for r in a.rows]
    rb = [[x * (d // b.denom) for x in r] for r in b.rows]
    return d, ra, rb


def lattice_intersection(a: Lattice, b: Lattice) -> Lattice:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if not a.rows or not b.rows:
        return Lattice(a.dim, 1, ())
    d, ra, rb = _common(a, b)
    stacked = ra + [[-x for x in r] for r in rb]
    kern = integer_left_kernel(stacked, len(stacked))
    gens = []
    for k in kern:
        gens.append(tuple(Fraction(sum(k[i] * ra[i][j] for i in range(len(ra))), d) for j in range(a.dim)))
    return hnf(gens, a.dim)


def lattice_meet_subspace(lat: Lattice, basis: Sequence[Vec]) -> Lattice:
    """L intersected with the span of ``basis``."""
    if len(basis) == 0:
        return Lattice(lat.dim, 1, ())
    ann = kernel_basis(tuple(basis))
    if not ann or not lat.rows:
        return lat
    dr = denominator_of(ann)
    rint = [[int(x * dr) for x in r] for r in ann]
    prod = [[sum(h[k] * r[k] for k in range(lat.dim)) for r in rint] for h in lat.rows]
    kern = integer_left_kernel(prod, len(lat.rows))
    gens = [tuple(Fraction(sum(k[i] * lat.rows[i][j] for i in range(len(k))), lat.denom) for j in range(lat.dim)) for k in kern]
    return hnf(gens, lat.dim)


def lattice_index(big: Lattice, small: Lattice) -> Union[int, float]:
    """[big : small]; ``math.inf`` when ranks differ."""
    for b in small.basis:
        if not lattice_member(big, b):
            raise ValueError("lattice_index requires small to be a sublattice of big")
    if small.rank != big.rank:
        return math.inf
    if big.rank == 0:
        return 1
    coords = []
    bt = transpose(big.basis)
    for b in small.basis:
        x = solve_affine(bt, b)
        coords.append(x)
    return int(abs(det(tuple(coords))))


# -- solvers -----------------------------------------------------------------

def solve_affine(a: Mat, b: Vec, ncols: Optional[int] = None) -> Optional[Vec]:
    """Some rational x with a*x = b, or None."""
    n = len(a[0]) if a else ncols
    if n is None:
        raise ValueError("ncols required for an empty matrix")
    if not a:
        return tuple(Fraction(0) for _ in range(n))
    if n == 0:
        return () if not any(b) else None
    aug = tuple(tuple(r) + (bi,) for r, bi in zip(a, b))
    r, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = r[i][n]
    return tuple(x)


def solve_mixed(a: Mat, bmat: Mat, c: Vec, nx: int) -> Optional[tuple[Vec, tuple[int, ...]]]:
    """Find rational x and integer z with a*x + bmat*z = c.

    ``a`` has ``nx`` columns; ``bmat`` has as many rows as ``a`` (possibly no
    columns).  Returns (x, z) or None.
    """
    m = len(c)
    nz = len(bmat[0]) if bmat and bmat[0] else 0
    if nz == 0:
        x = solve_affine(a, c, nx) if m else tuple(Fraction(0) for _ in range(nx))
        return None if x is None else (x, ())
    if nx == 0 or not a:
        q = [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]
    else:
        q = left_kernel_basis(a, m)
    z = tuple(0 for _ in range(nz))
    if q:
        qb = matmul(tuple(q), bmat)
        qc = matvec(tuple(q), c)
        dd = math.lcm(denominator_of(qb), denominator_of(qc))
        mi = [[int(x * dd) for x in r] for r in qb]
        ri = [x * dd for x in qc]
        zs = _solve_integer(mi, ri, nz)
        if zs is None:
            return None
        z = zs
    rest = vsub(c, matvec(bmat, tuple(Fraction(k) for k in z)))
    x = solve_affine(a, rest, nx) if (a and nx) else tuple(Fraction(0) for _ in range(nx))
    if x is None:
        return None
    return x, z


def _solve_integer(m: list[list[int]], r: list[Fraction], n: int) -> Optional[tuple[int, ...]]:
    """Integer z with m*z = r via Smith form, or None."""
    if any(x.denominator != 1 for x in r):
        return None
    r = [int(x) for x in r]
    d, u, v = snf(m)
    ur = [sum(u[i][k] * r[k] for k in range(len(r))) for i in range(len(r))]
    y = [0] * n
    for i in range(len(ur)):
        di = d[i][i] if i < n else 0
        if di == 0:
            if ur[i] != 0:
                return None
        else:
            if ur[i] % di:
                return None
            y[i] = ur[i] // di
    return tuple(sum(v[i][k] * y[k] for k in range(n)) for i in range(n))


def solve_affine_mod_lattice(a: Mat, b: Vec, lat: Lattice, ncols: Optional[int] = None) -> Optional[Vec]:
    """Some rational x with a*x - b in lat, or None."""
    n = len(a[0]) if a else ncols
    if n is None:
        raise ValueError("ncols required for an empty matrix")
    if lat.rank == 0:
        return solve_affine(a, b, n)
    bmat = tuple(tuple(-Fraction(r[i], lat.denom) for r in lat.rows) for i in range(lat.dim))
    out = solve_mixed(a if n else tuple(() for _ in b), bmat, tuple(b), n)
    return None if out is None else out[0]


def mat_order(m: Mat, bound: int = 64) -> Optional[int]:
    """Multiplicative order of m, or None if it exceeds ``bound``."""
    n = len(m)
    ident = identity(n)
    p = m
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = matmul(p, m)
    return None
