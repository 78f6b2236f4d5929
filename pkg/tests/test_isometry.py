from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from flatfiber.catalog import builtin
from flatfiber.exact import identity, mat, matmul, transpose
from flatfiber.isometry import (
    AffineIso, GramForm, affine, apply, compose, ident, invariant_gram, inverse_iso,
    orthogonal_complement, restrict, subspace, whole, word,
)

H = F(1, 2)


def test_compose_translations():
    assert compose(affine([1, 2]), affine([3, -1])) == affine([4, 1])


def test_inverse_glide():
    g = affine([H, 0], [[1, 0], [0, -1]])
    assert inverse_iso(g) == affine([-H, 0], [[1, 0], [0, -1]])
    assert compose(g, inverse_iso(g)) == ident(2)


def test_flip_about_midpoint():
    # t1 alpha in the IT 113 presentation fixes (3/4, 1/4, z)
    t1 = affine([1, 0, 0])
    alpha = affine([H, H, 0], [[-1, 0, 0], [0, -1, 0], [0, 0, 1]])
    v0 = (F(3, 4), F(1, 4), F(5, 7))
    assert apply(compose(t1, alpha), v0) == v0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        AffineIso((F(0),), identity(2))
    with pytest.raises(ValueError):
        compose(ident(2), ident(3))


def test_gram_examples():
    assert invariant_gram([identity(2)]).G == identity(2)
    g = invariant_gram([identity(2), mat([[1, 0], [0, -1]])]).G
    assert g[0][1] == 0 and g[1][0] == 0
    a3 = mat([[0, -1], [1, -1]])
    pg = [identity(2), a3, matmul(a3, a3)]
    g = invariant_gram(pg).G
    assert g[0][1] != 0
    for b in pg:
        assert matmul(transpose(b), matmul(g, b)) == g


def test_gram_rejects_non_closed():
    with pytest.raises(ValueError):
        invariant_gram([identity(2), mat([[0, -1], [1, 0]])])


def test_gram_form_validation():
    with pytest.raises(ValueError):
        GramForm(mat([[1, 2], [0, 1]]))
    with pytest.raises(ValueError):
        GramForm(mat([[1, 2], [2, 1]]))


def test_orthogonal_complement_examples():
    i3 = GramForm(identity(3))
    assert orthogonal_complement(subspace([(1, 0, 0)], 3), i3) == subspace([(0, 1, 0), (0, 0, 1)], 3)
    assert orthogonal_complement(subspace([(1, 1, 0)], 3), i3) == subspace([(1, -1, 0), (0, 0, 1)], 3)
    assert orthogonal_complement(whole(3), i3).dim == 0


def test_restrict_examples():
    i3 = GramForm(identity(3))
    v = subspace([(0, 0, 1)], 3)
    alpha = affine([0, 0, H], [[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    bar, prime = restrict(alpha, v, i3)
    assert bar == affine([H])
    assert prime == affine([0, 0], [[1, 0], [0, -1]])
    bar, prime = restrict(ident(3), v, i3)
    assert bar == ident(1) and prime == ident(2)
    with pytest.raises(ValueError):
        restrict(affine([0, 0, 0], [[0, 0, 1], [0, 1, 0], [1, 0, 0]]), v, i3)


def test_restrict_translation_splits():
    i2 = GramForm(identity(2))
    v = subspace([(1, 1)], 2)
    bar, prime = restrict(affine([3, 1]), v, i2)
    assert bar.trans == (2,) and prime.trans[0] in (1, -1)


@pytest.mark.parametrize("name", ["it113", "it163", "p6m", "it64b"])
def test_gram_invariant_builtins(name):
    g = builtin(name)
    for b in g.point_group:
        assert matmul(transpose(b), matmul(g.gram.G, b)) == g.gram.G


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4))
def test_double_complement(idxs):
    g = builtin("it163")
    vecs = [g.lattice.basis[i - 1] for i in idxs]
    v = subspace(vecs, 3)
    assert orthogonal_complement(orthogonal_complement(v, g.gram), g.gram) == v
    w = orthogonal_complement(v, g.gram)
    assert v.dim + w.dim == 3
    for a in v.basis:
        for b in w.basis:
            assert g.gram.pair(a, b) == 0


@given(st.lists(st.tuples(st.integers(0, 5), st.sampled_from([1, -1])), min_size=1, max_size=6),
       st.lists(st.tuples(st.integers(0, 5), st.sampled_from([1, -1])), min_size=1, max_size=6))
def test_restrict_homomorphism(w1, w2):
    grp = builtin("it113")
    gens = list(grp.generators)
    v = subspace([(0, 0, 1)], 3)
    g, h = word(gens, w1), word(gens, w2)
    gb, gp = restrict(g, v, grp.gram)
    hb, hp = restrict(h, v, grp.gram)
    ghb, ghp = restrict(compose(g, h), v, grp.gram)
    assert ghb == compose(gb, hb) and ghp == compose(gp, hp)
