"""Acceptance criteria 1-10.

Each criterion is a plain function that raises AssertionError on failure and
returns a one-line summary.  Under pytest every criterion is its own test and
the terminal summary prints one PASS/FAIL line per criterion; run this file
directly to get the same lines without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction as F
from math import gcd

import pytest

from flatfiber.catalog import (
    BUILTIN_NAMES, SPACE_NAMES, builtin, builtin_file, builtin_rows, compare_row, fixtures,
    verify_builtin_row, verify_round_trip,
)
from flatfiber.classify import (
    PILLOW_CYCLIC, PILLOW_DIHEDRAL, TORUS_CYCLIC, TORUS_DIHEDRAL, TORUS_SHIFTABLE, brute_force_class,
    build_extension, classifying_pair, enumerate_pair_classes, fiber_generators, finite_order_matrices,
    gl2z_finite_order_class, pair_from_label, standard_group,
)
from flatfiber.exact import hnf, matmul, transpose
from flatfiber.fibration import Fibration
from flatfiber.isometry import affine, conjugate, subspace
from flatfiber.normal import analyze, completion, direct_product_check
from flatfiber.spacegroup import (
    GroupError, build, center_generators, first_betti, isom_finite, isom_rank, same_group,
)
from flatfiber.splitting import common_fixed_set, split_verdict, verify_split

RESULTS: dict[int, tuple[bool, str]] = {}

TABLE1_GROUPS = {1: "p1", 2: "p2", 3: "pm", 4: "pg", 5: "cm", 6: "pmm", 7: "pmg", 8: "pgg", 9: "cmm"}


def _analysis(name, tag=""):
    gf = builtin_file(name)
    return analyze(gf.group(), gf.normal_generators(tag))


def _norm(t):
    return t.replace("∗", "*").replace("x", "×")


# -- criteria ----------------------------------------------------------------

def criterion_1() -> str:
    rows = fixtures(1)
    assert len(rows) == 9
    for fix in rows:
        an = _analysis(TABLE1_GROUPS[fix.it], "table1")
        fib = Fibration(an)
        d = fix.data
        got = {
            "fibers": [fib.fiber, fib.base],
            "grp": an.structure.label,
            "quotients": [fib.quotient_fiber, fib.quotient_base],
            "split": split_verdict(an).splits,
            "dual_split": split_verdict(analyze(an.parent, an.K.generators)).splits,
        }
        want = {k: d[k] for k in got}
        assert got == want, f"row {fix.key}: {got} != {want}"
        assert not compare_row(fix, an), f"row {fix.key}: actions differ"
    return "9/9 rows (fiber, base, structure, both split flags, quotients, actions)"


def criterion_2() -> str:
    p1 = build(2, [affine([1, 0]), affine([0, 1])])
    for a, b in [(1, 0), (1, 1), (2, 1), (3, 2), (5, 3)]:
        an = analyze(p1, [affine([a, b])])
        st = an.structure
        assert st.order == a * a + b * b, (a, b, st.order)
        assert st.kind in ("cyclic", "trivial"), (a, b, st.kind)
        k = build(2, [affine([b, -a])], require_cocompact=False)
        assert same_group(an.K, k), (a, b)
    return "5/5 (a,b): cyclic of order a^2+b^2, K = <t1^b t2^-a>"


def criterion_3() -> str:
    t1 = affine([1, 0])
    for a, b in [(1, 2), (1, 3), (2, 5)]:
        g = build(2, [t1, affine([F(a, b), 1])])
        an = analyze(g, [t1])
        assert an.dual_exists and an.complete
        assert an.structure.order == b, (a, b, an.structure.order)
    return "x in {1/2, 1/3, 2/5}: dual exists, structure order b"


def criterion_4() -> str:
    an = _analysis("it113")
    sv = split_verdict(an)
    assert sv.splits_orthogonally is False and sv.witness is None
    pieces = common_fixed_set(an)
    assert len(pieces) == 1 and pieces[0].dim == 0 and not pieces[0].ordinary
    an = _analysis("it5")
    assert (an.structure.kind, an.structure.order) == ("dihedral", 4)
    sv = split_verdict(an)
    assert sv.splits_orthogonally is False and sv.splits is False
    an = _analysis("it7")
    sv = split_verdict(an)
    assert sv.fixed_point_obstruction is not None and sv.splits is False
    return "IT 113 single cone point, IT 5 dihedral order 4 no split, IT 7 obstruction"


def criterion_5() -> str:
    rows = {}
    for (t, key), sources in builtin_rows().items():
        if t == 1:
            continue
        for name, tag in sources:
            if name in SPACE_NAMES:
                rows[(t, key, name, tag)] = next(f for f in fixtures(t) if f.key == key)
    covered = {name for (_, _, name, _) in rows}
    assert covered == set(SPACE_NAMES), sorted(set(SPACE_NAMES) - covered)
    for (t, key, name, tag), fix in sorted(rows.items()):
        an = _analysis(name, tag)
        fib = Fibration(an)
        assert an.structure.label == fix.data["grp"], (name, tag)
        assert [fib.fiber, fib.base] == [_norm(x) for x in fix.data["fibers"]], (name, tag)
        assert [fib.quotient_fiber, fib.quotient_base] == [_norm(x) for x in fix.data["quotients"]], (name, tag)
        bad = verify_builtin_row(fix, name, tag)
        assert not bad, (name, tag, bad)
    return f"{len(rows)} rows over {len(covered)} presentations"


def criterion_6() -> str:
    mats = finite_order_matrices(3)
    assert mats
    for m in mats:
        got = gl2z_finite_order_class(m).label
        want = brute_force_class(m, bound=5)
        assert got == want, (m, got, want)
    return f"{len(mats)}/{len(mats)} finite-order matrices with entries in [-3,3]"


def criterion_7() -> str:
    counts = {}
    for fiber in ("torus", "pillow"):
        for kind in ("cyclic", "dihedral"):
            classes = enumerate_pair_classes(fiber, kind)
            assert all(c.label != "unnamed" for c in classes)
            assert len({c.key for c in classes}) == len(classes)
            counts[(fiber, kind)] = len(classes)
    want = {("torus", "cyclic"): 7, ("torus", "dihedral"): 34,
            ("pillow", "cyclic"): 10, ("pillow", "dihedral"): 40}
    assert counts == want, counts
    assert [len(TORUS_CYCLIC), len(TORUS_DIHEDRAL), len(PILLOW_CYCLIC), len(PILLOW_DIHEDRAL)] == [7, 34, 10, 40]
    return "torus 7/34, pillow 10/40"


def criterion_8() -> str:
    rows = fixtures(17) + fixtures(18)
    keys = {f.key for f in fixtures(18)}
    assert {"76", "91", "2", "43"} <= keys
    for fix in rows:
        bad = verify_round_trip(fix)
        assert not bad, (fix.table, fix.key, bad)
    # the E1 ∩ E2 flag over the whole torus dihedral list
    m = standard_group("torus")
    nonzero = set()
    for lab in TORUS_DIHEDRAL:
        g = build_extension(m, "dihedral", pair_from_label("torus", lab))
        cp = classifying_pair(analyze(g, fiber_generators(m)))
        if cp.e_dim:
            nonzero.add(lab)
    assert nonzero == set(TORUS_SHIFTABLE), nonzero ^ set(TORUS_SHIFTABLE)
    return f"{len(rows)} rows round-trip; E1∩E2 nonzero for exactly the {len(nonzero)} listed pairs"


def _random_instances(rng: random.Random, count: int):
    """(group, normal generators) pairs: conjugated wallpaper groups and p1/p2 line subgroups."""
    names = list(TABLE1_GROUPS.values())
    out = []
    while len(out) < count:
        name = rng.choice(names)
        gf = builtin_file(name)
        p = [[1, 0], [0, 1]]
        for _ in range(3):
            i = rng.randrange(2)
            c = rng.randint(-1, 1)
            p[i] = [x + c * y for x, y in zip(p[i], p[1 - i])]
        phi = affine([F(rng.randint(-3, 3), rng.randint(1, 4)), F(rng.randint(-3, 3), rng.randint(1, 4))], p)
        gens = [conjugate(phi, s) for s in gf.gens()]
        if name in ("p1", "p2"):
            a, b = rng.randint(-3, 3), rng.randint(-3, 3)
            if gcd(a, b) != 1:
                continue
            n = [conjugate(phi, affine([a, b]))]
        else:
            tag = "table1" if "table1" in gf.normals else ""
            n = [conjugate(phi, x) for x in gf.normal_generators(tag)]
        try:
            g = build(2, gens)
            an = analyze(g, n)
        except GroupError:
            continue
        out.append(an)
    return out


def _builtin_analyses():
    out = []
    for name in BUILTIN_NAMES:
        gf = builtin_file(name)
        for tag in gf.normals:
            out.append(analyze(gf.group(), gf.normal_generators(tag)))
    return out


def criterion_9() -> str:
    rng = random.Random(20240611)
    # HNF canonicality under random re-generation
    for _ in range(100):
        gens = [tuple(rng.randint(-5, 5) for _ in range(3)) for _ in range(rng.randint(1, 4))]
        lat = hnf(gens, 3)
        mixed = list(gens)
        for _ in range(6):
            i, j = rng.randrange(len(mixed)), rng.randrange(len(mixed))
            if i != j:
                c = rng.randint(-3, 3)
                mixed[i] = tuple(x + c * y for x, y in zip(mixed[i], mixed[j]))
        rng.shuffle(mixed)
        assert hnf(mixed + [tuple(0 for _ in range(3))], 3) == lat
        assert hnf(lat.basis, 3) == lat
    cases = _builtin_analyses() + _random_instances(rng, 100)
    splits = 0
    for an in cases:
        g = an.parent
        # Gram invariance
        for b in g.point_group:
            assert matmul(transpose(b), matmul(g.gram.G, b)) == g.gram.G
        # completion idempotence
        assert same_group(completion(g, an.completion), an.completion)
        # N ∩ K trivial, N and K commute
        assert direct_product_check(an)
        # finite structure group exactly when Span(K) = V-perp
        assert an.structure.finite == (subspace(an.K.lattice.basis, g.dim) == an.Vperp)
        if not an.dual_exists or an.V.dim > 2:
            continue
        fib = Fibration(an)
        # (V/N)/(G/NK) = V/(G/K) at type level
        assert fib.quotient_fiber_via_actions() == fib.quotient_fiber
        sv = split_verdict(an)
        if sv.witness is not None:
            verify_split(an, sv.witness)
            splits += 1
        if sv.fixed_point_obstruction is not None:
            assert sv.splits_orthogonally is False
    return f"7 properties over {len(cases)} cases ({len(cases) - 100} builtin + 100 random), {splits} witnesses re-verified"


def criterion_10() -> str:
    assert first_betti(builtin("p1")) == 2
    pg = builtin("pg")
    assert first_betti(pg) == 1 and center_generators(pg) == [affine([1, 0])]
    assert first_betti(builtin("p2")) == 0
    for name in BUILTIN_NAMES:
        g = builtin(name)
        assert isom_finite(g) == (not center_generators(g)) == (isom_rank(g) == 0), name
    return f"p1 -> 2, pg -> 1 with center <e1+I>, p2 -> 0; finiteness flag consistent on {len(BUILTIN_NAMES)} builtins"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def _run(i: int) -> None:
    t0 = time.perf_counter()
    try:
        detail = CRITERIA[i]()
    except AssertionError as e:
        RESULTS[i] = (False, f"{e!s}"[:300] or "assertion failed")
        raise
    RESULTS[i] = (True, f"{detail} [{time.perf_counter() - t0:.1f}s]")


@pytest.mark.parametrize("i", list(CRITERIA))
def test_criterion(i):
    _run(i)


def report_lines() -> list[str]:
    return [f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}" for i, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    start = time.perf_counter()
    for i in CRITERIA:
        try:
            _run(i)
        except AssertionError:
            pass
    print("\n".join(report_lines()))
    print(f"total {time.perf_counter() - start:.1f}s")
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
