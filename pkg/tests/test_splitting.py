from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from flatfiber.catalog import BUILTIN_NAMES, builtin, builtin_file
from flatfiber.isometry import affine
from flatfiber.normal import analyze
from flatfiber.spacegroup import GroupError, build, contains
from flatfiber.splitting import (
    center_split, common_fixed_set, fixed_ordinary_point, fixed_point_obstruction, lift_coxeter_generators,
    lift_cyclic_generator, orthogonal_split, split_verdict, stabilizes_slice, seifert_splits,
    verify_split,
)

H = F(1, 2)


def _an(name, tag=""):
    gf = builtin_file(name)
    return analyze(gf.group(), gf.normal_generators(tag))


def test_trivial_structure_has_ordinary_point():
    an = analyze(builtin("p1"), [affine([1, 0])])
    assert fixed_ordinary_point(an) is not None
    assert split_verdict(an).splits_orthogonally


def test_pointed_hood_cone_point():
    an = _an("it113")
    pieces = common_fixed_set(an)
    assert len(pieces) == 1
    (pc,) = pieces
    assert pc.dim == 0 and not pc.ordinary
    assert fixed_ordinary_point(an) is None
    assert orthogonal_split(an) is None


def test_interval_midpoint():
    # N infinite dihedral on the line: the structure group fixes the midpoint
    g = build(2, [affine([1, 0]), affine([0, 1]), affine([0, 0], [[-1, 0], [0, 1]]), affine([0, 0], [[1, 0], [0, -1]])])
    an = analyze(g, [affine([1, 0]), affine([0, 0], [[-1, 0], [0, 1]])])
    v0 = fixed_ordinary_point(an)
    assert v0 is not None and v0[0] % H != 0


def test_orthogonal_split_examples():
    sp = orthogonal_split(_an("p2", "table1"))
    assert sp is not None
    assert orthogonal_split(_an("it5")) is None


def test_fixed_point_obstruction_examples():
    ob = fixed_point_obstruction(_an("it7"))
    assert ob is not None and ob.lin == ((1, 0, 0), (0, -1, 0), (0, 0, 1))
    assert fixed_point_obstruction(analyze(builtin("p1"), [affine([1, 0])])) is None
    assert fixed_point_obstruction(_an("pg", "table1")) is not None


def test_seifert_splits_examples():
    assert seifert_splits(_an("it7")) is False
    assert seifert_splits(_an("it5")) is False
    t3 = build(3, [affine([1, 0, 0]), affine([0, 1, 0]), affine([0, 0, 1])])
    assert seifert_splits(analyze(t3, [affine([0, 0, 1])])) is True
    with pytest.raises(GroupError, match="applicability"):
        seifert_splits(_an("it113"))


def test_center_split():
    assert center_split(builtin("p1")) is True
    # pg is torsion-free but pg/Z is infinite dihedral, so no complement exists
    assert center_split(builtin("pg")) is False
    # a lattice is its own center
    assert center_split(build(2, [affine([1, 0]), affine([H, 1])])) is True
    with pytest.raises(GroupError, match="center trivial"):
        center_split(builtin("p2"))


def test_lift_cyclic_trivial():
    an = analyze(builtin("p1"), [affine([1, 0])])
    got = lift_cyclic_generator(an)
    assert got is not None and got[0] in (0, 1)


def test_lift_coxeter_pillow():
    an = analyze(builtin("p2"), [affine([1, 0])])
    got = lift_coxeter_generators(an)
    assert got is not None
    (i, j), (g1, g2) = got
    assert contains(an.parent, g1) and contains(an.parent, g2)


def test_verdict_examples():
    sv = split_verdict(_an("it113"))
    assert sv.splits_orthogonally is False and sv.splits is None
    sv = split_verdict(_an("it5"))
    assert sv.splits_orthogonally is False and sv.splits is False
    sv = split_verdict(_an("it7"))
    assert sv.fixed_point_obstruction is not None and sv.splits is False


def _cases():
    for name in BUILTIN_NAMES:
        gf = builtin_file(name)
        for tag in gf.normals:
            yield name, tag


@pytest.mark.parametrize("name,tag", list(_cases()))
def test_witnesses_sound(name, tag):
    an = _an(name, tag)
    if not an.dual_exists or an.V.dim > 2:
        return
    sv = split_verdict(an)
    if sv.fixed_point_obstruction is not None:
        assert not sv.splits_orthogonally
        ob = sv.fixed_point_obstruction
        assert contains(an.parent, ob)
    if sv.witness is not None:
        verify_split(an, sv.witness, radius=1)
        for g in sv.witness.sigma_generators:
            assert stabilizes_slice(an, g, sv.witness.v0)
    if sv.seifert_criterion is not None and sv.splits_orthogonally is not None:
        # the Seifert criterion agrees with the fixed-point criterion
        assert sv.seifert_criterion == sv.splits_orthogonally


@settings(max_examples=100)
@given(st.integers(-4, 4), st.integers(-4, 4), st.sampled_from(["p1", "p2", "pm", "pmm", "cmm", "p4m"]))
def test_random_line_subgroups(a, b, name):
    from math import gcd

    if gcd(a, b) != 1:
        return
    g = builtin(name)
    try:
        an = analyze(g, [affine([a, b])])
    except GroupError:
        return
    if not an.dual_exists:
        return
    sv = split_verdict(an)
    if sv.witness is not None:
        verify_split(an, sv.witness)
    if sv.fixed_point_obstruction is not None:
        assert sv.splits_orthogonally is False
