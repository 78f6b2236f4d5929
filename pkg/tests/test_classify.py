from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings, strategies as st

from flatfiber.classify import (
    A, B, C, CLASS_REPS, NEG_I, PILLOW_ELEMENTS, TORUS_DIHEDRAL, TORUS_ELEMENTS, TORUS_SHIFTABLE,
    aff_equivalent, build_extension, class_key, classifying_pair,
    enumerate_pair_classes, fiber_generators, finite_order_matrices, gl2z_finite_order_class,
    named_element, pair_from_label, pillow_element_class, pillow_pair_class,
    standard_group, torus_order2_class, torus_pair_class,
)
from flatfiber.exact import identity, mat, matmul, mat_order
from flatfiber.fibration import Fibration
from flatfiber.isometry import affine, compose, conjugate, inverse_iso
from flatfiber.normal import analyze
from flatfiber.spacegroup import GroupError

H = F(1, 2)
I2 = identity(2)


def test_gl2z_examples():
    assert gl2z_finite_order_class(mat([[0, -1], [1, 0]])).label == "A"
    assert gl2z_finite_order_class(mat([[1, 0], [0, -1]])).label == "CA"
    assert gl2z_finite_order_class(mat([[0, 1], [1, 0]])).label == "C"
    c = gl2z_finite_order_class(mat([[0, -1], [1, 1]]))
    assert (c.label, c.order, c.det) == ("B", 6, 1)
    assert gl2z_finite_order_class(I2).label == "I"


def test_gl2z_errors():
    with pytest.raises(ValueError, match="not unimodular"):
        gl2z_finite_order_class(mat([[2, 0], [0, 1]]))
    with pytest.raises(ValueError, match="infinite order"):
        gl2z_finite_order_class(mat([[1, 1], [0, 1]]))


def test_class_reps_consistent():
    for label, m in CLASS_REPS.items():
        c = gl2z_finite_order_class(m)
        assert c.label == label and c.representative == m
        assert mat_order(m) == c.order


def test_finite_order_matrix_count():
    ms = finite_order_matrices(2)
    assert all(mat_order(m) is not None for m in ms)
    assert len(set(ms)) == len(ms)


def test_maximal_finite_subgroups():
    # <A, C> dihedral of order 8, <B, C> of order 12, meeting in <-I, C>
    def closure(gens):
        seen = {I2}
        todo = [I2]
        while todo:
            x = todo.pop()
            for g in gens:
                y = matmul(x, g)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    ac, bc = closure([A, C]), closure([B, C])
    assert len(ac) == 8 and len(bc) == 12
    assert ac & bc == closure([NEG_I, C])
    assert len(ac & bc) == 4


def test_torus_element_examples():
    assert torus_order2_class(affine([H, 0])) == "h-rot"
    assert torus_order2_class(affine([0, 0], NEG_I)) == "2-rot"
    assert torus_order2_class(affine([H, 0], [[1, 0], [0, -1]])) == "h-grf"
    assert torus_order2_class(affine([0, 0], [[1, 0], [0, -1]])) == "v-ref"
    with pytest.raises(GroupError):
        torus_order2_class(affine([F(1, 3), 0]))


def test_pillow_elements():
    for name in PILLOW_ELEMENTS:
        cls = pillow_element_class(PILLOW_ELEMENTS[name])
        assert cls in PILLOW_ELEMENTS


def test_torus_pair_examples():
    assert torus_pair_class(affine([H, 0]), affine([0, H])).label == "{h-rot, v-rot}"
    assert torus_pair_class(affine([0, 0], C), affine([0, 0], matmul(C, A))).label in ("{h-ref, d-ref}",)
    assert torus_pair_class(affine([0, 0], C), affine([0, 0], matmul(C, B))).label == "{d-ref, m-aff}"


def test_named_elements():
    assert named_element("torus", "h-ref'") == compose(TORUS_ELEMENTS["h-rot"], TORUS_ELEMENTS["h-ref"])
    assert named_element("torus", "4-rot^-1") == inverse_iso(TORUS_ELEMENTS["4-rot"])
    assert named_element("torus", "d-ref.") == TORUS_ELEMENTS["d-ref"]
    with pytest.raises(KeyError):
        named_element("torus", "q-rot")


def test_labels_round_trip():
    for lab in TORUS_DIHEDRAL:
        assert torus_pair_class(*pair_from_label("torus", lab)).label == lab


def test_pillow_pair_label():
    assert pillow_pair_class(PILLOW_ELEMENTS["idt"], PILLOW_ELEMENTS["d-ref"]).label == "{idt, d-ref}"


def _rand_phi(rng):
    m = [[1, 0], [0, 1]]
    for _ in range(6):
        i = rng.randrange(2)
        c = rng.randint(-3, 3)
        m[i] = [a + c * b for a, b in zip(m[i], m[1 - i])]
    if rng.random() < 0.5:
        m[0] = [-x for x in m[0]]
    t = [F(rng.randint(-9, 9), rng.choice([1, 2, 3, 4, 7])) for _ in range(2)]
    return affine(t, m)


def test_pair_class_conjugation_invariance():
    rng = random.Random(7)
    for lab in TORUS_DIHEDRAL[::3]:
        pair = pair_from_label("torus", lab)
        for _ in range(5):
            phi = _rand_phi(rng)
            moved = [conjugate(phi, g) for g in pair]
            assert torus_pair_class(*moved).label == lab


@settings(max_examples=50)
@given(st.randoms(use_true_random=False), st.sampled_from(TORUS_DIHEDRAL))
def test_pair_class_invariance_property(rng, lab):
    phi = _rand_phi(rng)
    pair = pair_from_label("torus", lab)
    assert torus_pair_class(*[conjugate(phi, g) for g in pair]).label == lab


def test_pillow_invariance():
    rng = random.Random(11)
    for lab in ("{c-ref, m-ref}", "{d-ref, d-rot′}", "{m-rot′, 2-sym}", "{d-ref, 2-aff}"):
        pair = pair_from_label("pillow", lab)
        for _ in range(5):
            # the pillow normalizer only allows half-lattice shifts
            phi = affine([F(rng.randint(-3, 3), 2) for _ in range(2)], _rand_phi(rng).lin)
            assert pillow_pair_class(*[conjugate(phi, p) for p in pair]).label == lab


def test_aff_equivalence_ignores_shift():
    p = pair_from_label("torus", "{2-rot, 2-rot}")
    q = (p[0], compose(affine([H, 0]), p[1]))
    assert class_key("torus", "dihedral", p) == class_key("torus", "dihedral", q)
    assert not aff_equivalent("torus", p, q)


def test_build_extension_examples():
    p1 = standard_group("torus")
    g = build_extension(p1, "cyclic", [TORUS_ELEMENTS["4-rot"]])
    an = analyze(g, fiber_generators(p1))
    fib = Fibration(an)
    assert (an.structure.label, fib.fiber, fib.quotient_fiber, fib.quotient_base) == ("C4", "∘", "442", "O")
    g = build_extension(p1, "cyclic", [TORUS_ELEMENTS["idt"]])
    assert analyze(g, fiber_generators(p1)).structure.order == 1
    g = build_extension(p1, "dihedral", [TORUS_ELEMENTS["h-ref"], TORUS_ELEMENTS["d-ref"]])
    an = analyze(g, fiber_generators(p1))
    fib = Fibration(an)
    assert (an.structure.label, fib.quotient_fiber, fib.quotient_base) == ("D4", "*442", "I")


def test_build_extension_errors():
    p2 = standard_group("pillow")
    with pytest.raises(GroupError, match="normalize"):
        build_extension(p2, "cyclic", [affine([F(1, 3), 0])])
    with pytest.raises(GroupError):
        build_extension(standard_group("torus"), "dihedral", [TORUS_ELEMENTS["4-rot"], TORUS_ELEMENTS["idt"]])


def test_classifying_pair_examples():
    p1 = standard_group("torus")
    g = build_extension(p1, "dihedral", [TORUS_ELEMENTS["2-rot"], TORUS_ELEMENTS["2-rot"]])
    cp = classifying_pair(analyze(g, fiber_generators(p1)))
    assert cp.kind == "dihedral" and cp.label == "{2-rot, 2-rot}" and cp.e_dim == 2
    g = build_extension(p1, "cyclic", [TORUS_ELEMENTS["4-rot"]])
    cp = classifying_pair(analyze(g, fiber_generators(p1)))
    assert cp.kind == "cyclic" and cp.label == "{4-rot, 4-rot^-1}" and cp.e_dim is None
    g = build_extension(p1, "dihedral", [TORUS_ELEMENTS["idt"], TORUS_ELEMENTS["idt"]])
    cp = classifying_pair(analyze(g, fiber_generators(p1)))
    assert cp.label == "{idt, idt}"
    assert all(t == (1, True, True) for t in cp.invariants)


def test_shiftable_set():
    p1 = standard_group("torus")
    nonzero = set()
    for lab in TORUS_DIHEDRAL:
        g = build_extension(p1, "dihedral", pair_from_label("torus", lab))
        cp = classifying_pair(analyze(g, fiber_generators(p1)))
        if cp.e_dim:
            nonzero.add(lab)
    assert nonzero == set(TORUS_SHIFTABLE)


def test_enumerate_errors():
    with pytest.raises(ValueError):
        enumerate_pair_classes("torus", "triangle")
    with pytest.raises((ValueError, KeyError)):
        enumerate_pair_classes("klein", "cyclic")
