from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from flatfiber.exact import (
    hnf, identity, kernel_basis, lattice_index, lattice_intersection, lattice_member,
    lattice_sum, mat, matmul, matvec, mat_order, rank, rref, snf, solve_affine,
    solve_affine_mod_lattice, vsub, det,
)

small = st.integers(-4, 4)


def test_rref_examples():
    assert rref(mat([[1, 1], [1, 1]])) == (mat([[1, 1], [0, 0]]), (0,))
    assert rref(identity(3)) == (identity(3), (0, 1, 2))
    assert rref(mat([[0, -1], [1, 0]])) == (identity(2), (0, 1))


def test_kernel_examples():
    ker = kernel_basis(mat([[1, 1], [1, 1]]))
    assert len(ker) == 1 and ker[0][0] == -ker[0][1] != 0
    assert kernel_basis(identity(2)) == []
    ker = kernel_basis(mat([[0, 0], [0, -2]]))
    assert len(ker) == 1 and ker[0][1] == 0


def test_hnf_examples():
    assert hnf([(2, 0), (1, 1)]).basis == mat([[1, 1], [0, 2]])
    assert hnf([(1, 0), (0, 1)]).basis == identity(2)
    assert hnf([], 2).rank == 0


def test_hnf_brute_force_membership():
    lat = hnf([(2, 0), (1, 1)])
    combos = {(2 * a + b, b) for a in range(-6, 7) for b in range(-6, 7)}
    for x in range(-3, 4):
        for y in range(-3, 4):
            assert lattice_member(lat, (x, y)) == ((x, y) in combos)


def test_hnf_rational_denominator():
    lat = hnf([(F(1, 2), 0), (0, F(1, 3))])
    assert lat.denom == 6
    assert lattice_member(lat, (F(3, 2), F(2, 3)))
    assert not lattice_member(lat, (F(1, 4), 0))


def test_snf_examples():
    for m, d in [([[2, 0], [0, 3]], [[1, 0], [0, 6]]),
                 ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
                 ([[2, 0], [0, 2]], [[2, 0], [0, 2]])]:
        dd, u, v = snf(m)
        assert [list(r) for r in dd] == d


def test_lattice_ops():
    z2 = hnf([(1, 0), (0, 1)])
    assert lattice_index(z2, hnf([(2, 0), (0, 2)])) == 4
    assert lattice_member(hnf([(1, 1), (1, -1)]), (2, 0))
    assert lattice_intersection(hnf([(1, 0)], 2), hnf([(0, 1)], 2)).rank == 0
    assert lattice_sum(hnf([(2, 0)], 2), hnf([(0, 1)], 2)) == hnf([(2, 0), (0, 1)])
    assert lattice_index(z2, hnf([(1, 0)], 2)) == float("inf")
    with pytest.raises(ValueError):
        lattice_index(hnf([(2, 0), (0, 2)]), z2)


def test_solve_examples():
    z2 = hnf([(1, 0), (0, 1)])
    x = solve_affine_mod_lattice(mat([[0, 0], [0, 0]]), (0, 0), z2)
    assert x is not None
    x = solve_affine_mod_lattice(mat([[2, 0], [0, 2]]), (1, 0), z2)
    assert x is not None and lattice_member(z2, vsub(matvec(mat([[2, 0], [0, 2]]), x), (1, 0)))
    assert x[0].denominator == 2
    assert solve_affine_mod_lattice(mat([[0, 0], [0, 0]]), (F(1, 2), 0), z2) is None
    assert solve_affine(mat([[1, 1], [1, 1]]), (1, 2)) is None
    assert solve_affine(mat([[1, 1], [0, 1]]), (3, 1)) == (2, 1)


def test_mat_order():
    assert mat_order(mat([[0, -1], [1, 1]])) == 6
    assert mat_order(mat([[1, 1], [0, 1]])) is None


@st.composite
def unimodular(draw, n=2, steps=6):
    m = [list(r) for r in identity(n)]
    for _ in range(steps):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1).filter(lambda j: j != i))
        c = draw(st.integers(-2, 2))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    if draw(st.booleans()):
        m[0] = [-a for a in m[0]]
    return mat(m)


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=4), unimodular(n=3))
def test_hnf_canonical_under_remixing(gens, u):
    # u mixes generators; extra rows are integer combinations of existing ones
    lat = hnf(gens, 3)
    rows = list(lat.basis) + [(0, 0, 0)] * (3 - lat.rank)
    mixed = [tuple(sum(u[i][k] * rows[k][j] for k in range(3)) for j in range(3)) for i in range(3)]
    assert hnf(mixed + [tuple(a + b for a, b in zip(gens[0], rows[0]))], 3) == lat
    assert hnf(lat.basis, 3) == lat


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_snf_reconstructs(m):
    d, u, v = snf(m)
    mm = mat(m)
    assert matmul(matmul(mat(u), mm), mat(v)) == mat(d)
    assert abs(det(mat(u))) == 1 and abs(det(mat(v))) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_kernel_dimension(m):
    mm = mat(m)
    ker = kernel_basis(mm, 3)
    assert len(ker) == 3 - rank(mm)
    for v in ker:
        assert not any(matvec(mm, v))


@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=2),
       st.tuples(st.fractions(max_denominator=4), st.fractions(max_denominator=4)))
def test_solve_mod_lattice_sound(m, b):
    a = mat(m)
    lat = hnf([(1, 0), (0, 1)])
    x = solve_affine_mod_lattice(a, b, lat)
    if x is not None:
        assert lattice_member(lat, vsub(matvec(a, x), b))
