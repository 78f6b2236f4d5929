"""Regenerate the builtin group files.

usage: python tools/make_builtins.py [OUTDIR]

OUTDIR defaults to src/flatfiber/data/groups.
"""

import argparse
from fractions import Fraction as F
from pathlib import Path

from flatfiber.catalog import GroupFile, NormalSpec, parse_word, serialize_group_file
from flatfiber.isometry import affine

OUT = Path(__file__).resolve().parents[1] / "src" / "flatfiber" / "data" / "groups"
h = F(1, 2)


def e(n, i):
    return [1 if j == i else 0 for j in range(n)]


def tr(n):
    return [(f"t{i + 1}", affine(e(n, i))) for i in range(n)]


def diag(*d):
    return [[d[i] if i == j else 0 for j in range(len(d))] for i in range(len(d))]


A2 = [[0, -1], [1, 0]]
B2 = [[0, -1], [1, 1]]
B2sq = [[-1, -1], [1, 0]]
C2 = [[0, 1], [1, 0]]
mC2 = [[0, -1], [-1, 0]]

WALL = {
    "p1": (1, "∘", [], {"table1": ["t1"]}),
    "p2": (2, "2222", [("r", affine([0, 0], diag(-1, -1)))], {"table1": ["t1"]}),
    "pm": (2, "**", [("m", affine([0, 0], diag(1, -1)))], {"table1": ["t1"]}),
    "pg": (2, "××", [("g", affine([h, 0], diag(1, -1)))], {"table1": ["t1"]}),
    "cm": (2, "*×", [("m", affine([0, 0], C2))], {"table1": ["t1 t2"]}),
    "pmm": (4, "*2222", [("m1", affine([0, 0], diag(-1, 1))), ("m2", affine([0, 0], diag(1, -1)))],
            {"table1": ["t1", "m1"]}),
    "pmg": (4, "22*", [("m", affine([h, 0], diag(-1, 1))), ("g", affine([h, 0], diag(1, -1)))],
            {"table1": ["t2"]}),
    "pgg": (4, "22×", [("r", affine([0, 0], diag(-1, -1))), ("g", affine([h, h], diag(1, -1)))],
            {"table1": ["t1"]}),
    "cmm": (4, "2*22", [("r", affine([0, 0], diag(-1, -1))), ("m", affine([0, 0], C2))],
            {"table1": ["t1 t2", "r m"]}),
    "p4": (4, "442", [("a", affine([0, 0], A2))], {}),
    "p4m": (8, "*442", [("a", affine([0, 0], A2)), ("m", affine([0, 0], C2))], {}),
    "p4g": (8, "4*2", [("a", affine([0, 0], A2)), ("g", affine([h, h], diag(1, -1)))], {}),
    "p3": (3, "333", [("b", affine([0, 0], B2sq))], {}),
    "p3m1": (6, "*333", [("b", affine([0, 0], B2sq)), ("m", affine([0, 0], C2))], {}),
    "p31m": (6, "3*3", [("b", affine([0, 0], B2sq)), ("m", affine([0, 0], mC2))], {}),
    "p6": (6, "632", [("b", affine([0, 0], B2))], {}),
    "p6m": (12, "*632", [("b", affine([0, 0], B2)), ("m", affine([0, 0], C2))], {}),
}

B3 = [[0, -1, 0], [-1, 0, 0], [0, 0, -1]]
R4 = [[0, -1, 0], [1, 0, 0], [0, 0, 1]]
mI3 = diag(-1, -1, -1)

SPACE = {
    "it5": (5, 2, [("a", affine([0, 0, 0], B3))],
            {"": ["t1 t2"], "torus_e": ["t1", "t2"], "torus_d": ["t1 t2^-1", "t3"]}),
    "it7": (7, 2, [("alpha", affine([0, 0, h], diag(1, -1, 1)))],
            {"": ["t3"], "klein": ["t2", "t3", "alpha"], "torus_v": ["t1", "t3"], "torus_h": ["t1", "t2"]}),
    "it113": (113, 8, [("alpha", affine([h, h, 0], diag(-1, -1, 1))),
                       ("beta", affine([h, 0, 0], [[0, 1, 0], [-1, 0, 0], [0, 0, -1]])),
                       ("gamma", affine([0, h, 0], diag(-1, 1, -1)))],
              {"": ["t1", "t2", "alpha", "beta gamma"]}),
    "it163": (163, 12, [("a", affine([0, 0, 0], [[0, -1, 0], [1, -1, 0], [0, 0, 1]])),
                        ("beta", affine([0, 0, h], B3)),
                        ("c", affine([0, 0, 0], mI3))],
              {"": ["t1", "t2", "a"]}),
    "it126": (126, 16, [("beta", affine([h, 0, 0], R4)),
                        ("gamma", affine([h, 0, h], diag(-1, 1, -1))),
                        ("d", affine([0, 0, 0], mI3))],
              {"": ["t1", "t2", "beta"]}),
    "it134": (134, 16, [("beta", affine([h, 0, h], R4)),
                        ("gamma", affine([h, 0, h], diag(-1, 1, -1))),
                        ("d", affine([0, 0, 0], mI3))],
              {"": ["t1", "t2", "t3^-1 beta^2", "t3^-1 beta gamma d"]}),
    "it68": (68, 8, [("alpha", affine([h, h, 0], diag(-1, -1, 1))),
                     ("beta", affine([0, 0, h], B3)),
                     ("c", affine([0, 0, 0], mI3))],
             {"": ["t1 t2", "t3", "beta", "alpha c"]}),
    # same group as it64b; the alpha printed with this normal subgroup lacks the e3/2 term
    "it64a": (64, 8, [("alpha", affine([h, h, h], diag(-1, -1, 1))),
                      ("b", affine([0, 0, 0], B3)),
                      ("c", affine([0, 0, 0], mI3))],
              {"": ["t1 t2^-1", "t3", "t2^-1 alpha c", "b c"]}),
    "it63": (63, 8, [("alpha", affine([0, 0, h], diag(-1, -1, 1))),
                     ("b", affine([0, 0, 0], B3)),
                     ("c", affine([0, 0, 0], mI3))],
             {"": ["t1 t2^-1", "t3", "alpha c", "b c"]}),
    "it64b": (64, 8, [("alpha", affine([h, h, h], diag(-1, -1, 1))),
                      ("b", affine([0, 0, 0], B3)),
                      ("c", affine([0, 0, 0], mI3))],
              {"": ["t1", "t2", "b c"]}),
}


# table rows reproduced by each builtin normal subgroup: name -> {tag: "table:key"}
TABLE_ROWS = {
    "p1": {"table1": "1:1"}, "p2": {"table1": "1:2"}, "pm": {"table1": "1:3"},
    "pg": {"table1": "1:4"}, "cm": {"table1": "1:5"}, "pmm": {"table1": "1:6"},
    "pmg": {"table1": "1:7"}, "pgg": {"table1": "1:8"}, "cmm": {"table1": "1:9"},
    "it5": {"torus_e": "18:5a", "torus_d": "18:5b"},
    "it7": {"klein": "15:7", "torus_v": "18:7a", "torus_h": "18:7b"},
    "it113": {"": "10:113"}, "it134": {"": "10:134"}, "it126": {"": "9:126"},
    "it163": {"": "6:163"}, "it68": {"": "11:68"}, "it64a": {"": "12:64"},
    "it63": {"": "13:63"}, "it64b": {"": "14:64"},
}


def table_expect(name):
    return {("table." + t if t else "table"): row for t, row in TABLE_ROWS.get(name, {}).items()}


def main(argv=None):
    ap = argparse.ArgumentParser(description="Regenerate the builtin group files.")
    ap.add_argument("outdir", nargs="?", default=str(OUT))
    out = Path(ap.parse_args(argv).outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, (order, conway, extra, normals) in WALL.items():
        ns = {tag: NormalSpec([parse_word(w) for w in ws]) for tag, ws in normals.items()}
        gf = GroupFile(name, 2, tr(2) + extra, ns, {"pointgroup_order": str(order), "conway": conway, **table_expect(name)})
        (out / f"{name}.grp").write_text(serialize_group_file(gf), encoding="utf-8")
    for name, (it, order, extra, normals) in SPACE.items():
        ns = {tag: NormalSpec([parse_word(w) for w in ws]) for tag, ws in normals.items()}
        gf = GroupFile(name, 3, tr(3) + extra, ns, {"pointgroup_order": str(order), "it": str(it), **table_expect(name)})
        (out / f"{name}.grp").write_text(serialize_group_file(gf), encoding="utf-8")


if __name__ == "__main__":
    main()
