"""Command-line front end.

    flatfiber analyze GROUP
    flatfiber fiber GROUP --normal SPEC
    flatfiber verify-tables [--table N|all]
    flatfiber conjclass "a,b;c,d"

GROUP is a builtin name (p1 ... p6m, it5, it7, ...) or a path to a group file.
SPEC is ``builtin`` (the file's default normal subgroup), the tag of a named
normal block, or generator words over the group's generator names separated
by ``;`` or ``,`` (letters inside a word are multiplied: ``t1 t2^-1``).

Every command accepts ``--json``; the text output renders the same tree.
Exit codes: 0 success, 1 verification failure, 2 input or parse error,
3 precondition violation (not normal, not unimodular, ...).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from .catalog import GroupFile, GroupFileError, load_group, parse_word, table_ids, verify_table
from .exact import fmt_frac, mat
from .isometry import AffineIso
from .spacegroup import (
    GroupError, center_generators, first_betti, isom_finite, isom_rank, orientation_preserving,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- JSON helpers ------------------------------------------------------------

def _q(x: Fraction) -> str:
    return fmt_frac(Fraction(x))


def _vec(v) -> list:
    return [_q(x) for x in v]


def _elem(g: AffineIso) -> dict:
    return {"lin": [_vec(r) for r in g.lin], "trans": _vec(g.trans)}


def _inv(t: tuple) -> dict:
    order, orient, fixed = t
    return {"order": order, "orientation_preserving": orient, "fixed_point": fixed}


# -- reports -----------------------------------------------------------------

def group_report(gf: GroupFile) -> dict:
    grp = gf.group()
    out = {
        "name": gf.name,
        "dim": grp.dim,
        "pointgroup_order": len(grp.point_group),
        "lattice": [_vec(r) for r in grp.lattice.basis],
        "betti": first_betti(grp),
        "isom_rank": isom_rank(grp),
        "isom_finite": isom_finite(grp),
        "center": [_elem(g) for g in center_generators(grp)],
        "orientation_preserving": orientation_preserving(grp),
    }
    if grp.dim == 2:
        from .fibration import wallpaper_type

        wt = wallpaper_type(grp)
        out["conway"] = wt.conway
        out["it_symbol"] = wt.symbol
    return out


def resolve_normal(gf: GroupFile, spec: str) -> tuple[str, list[AffineIso]]:
    """(description, generators) for a --normal argument."""
    if spec == "builtin":
        if "" in gf.normals:
            return "default", gf.normal_generators("")
        if len(gf.normals) == 1:
            tag = next(iter(gf.normals))
            return tag, gf.normal_generators(tag)
        raise InputError(f"group {gf.name or '?'} has no default normal subgroup; "
                         f"choose one of: {', '.join(sorted(gf.normals)) or 'none'}")
    if spec in gf.normals:
        return spec, gf.normal_generators(spec)
    words = [w.strip() for w in re.split(r"[;,]", spec) if w.strip()]
    if not words:
        raise InputError("empty normal subgroup argument")
    gens = []
    for w in words:
        try:
            gens.append(gf.evaluate(parse_word(w)))
        except GroupFileError as e:
            raise InputError(str(e)) from None
    return "; ".join(words), gens


def fiber_report(gf: GroupFile, spec: str) -> dict:
    from .classify import classifying_pair
    from .fibration import Fibration
    from .normal import analyze
    from .splitting import split_verdict

    grp = gf.group()
    desc, gens = resolve_normal(gf, spec)
    an = analyze(grp, gens)
    st = an.structure
    rep: dict[str, Any] = {
        "group": {"name": gf.name, "dim": grp.dim, "pointgroup_order": len(grp.point_group)},
        "normal": {"spec": desc, "generators": [_elem(g) for g in gens]},
        "span": [_vec(b) for b in an.V.basis],
        "complete": an.complete,
        "kernel": [_elem(g) for g in an.K.generators],
        "dual": an.dual_exists,
        "structure": {"finite": st.finite, "order": st.order, "kind": st.kind, "label": st.label},
        "fibration": None,
        "splitting": None,
        "classifying": None,
    }
    if not an.dual_exists:
        return rep
    fib = Fibration(an)
    rep["fibration"] = {
        "fiber": fib.fiber, "base": fib.base,
        "quotient_fiber": fib.quotient_fiber, "quotient_base": fib.quotient_base,
        "actions": [{"order": a.order, "fiber": _inv(a.fiber.as_tuple()), "base": _inv(a.base.as_tuple())}
                    for a in fib.actions],
    }
    if an.V.dim <= 2:
        sv = split_verdict(an)
        rep["splitting"] = {
            "orthogonal": sv.splits_orthogonally,
            "v0": _vec(sv.witness.v0) if sv.witness else None,
            "obstruction": _elem(sv.fixed_point_obstruction) if sv.fixed_point_obstruction else None,
            "seifert_criterion": sv.seifert_criterion,
            "splits": sv.splits,
        }
    if an.V.dim == grp.dim - 1 and an.V.dim <= 2:
        cp = classifying_pair(an)
        rep["classifying"] = {
            "kind": cp.kind,
            "label": cp.label,
            "affinities": [_elem(g) for g in cp.affinities],
            "invariants": [_inv(t) for t in cp.invariants],
            "e_dim": cp.e_dim,
        }
    return rep


def _row_sort(key: str) -> tuple:
    m = re.fullmatch(r"(\d+)(\D*)", key)
    return (int(m.group(1)), m.group(2)) if m else (10 ** 9, key)


def tables_report(which: str) -> tuple[dict, bool]:
    ids = table_ids() if which == "all" else [int(which)]
    out: dict[str, Any] = {"tables": {}}
    total = {"pass": 0, "fail": 0, "skip": 0}
    for t in ids:
        rows = sorted(verify_table(t), key=lambda r: _row_sort(r.key))
        out["tables"][str(t)] = [
            {"key": r.key, "status": r.status, "source": r.source, "mismatches": list(r.mismatches)}
            for r in rows
        ]
        for r in rows:
            total[r.status] += 1
    out["summary"] = total
    return out, total["fail"] == 0


def parse_matrix_literal(text: str):
    rows = [r for r in text.split(";")]
    try:
        return mat([[Fraction(x.strip()) for x in r.split(",")] for r in rows])
    except (ValueError, ZeroDivisionError):
        raise InputError(f"malformed matrix literal {text!r} (expected 'a,b;c,d')") from None


def conjclass_report(text: str) -> dict:
    from .classify import gl2z_finite_order_class

    m = parse_matrix_literal(text)
    if len(m) != 2 or any(len(r) != 2 for r in m):
        raise InputError("conjclass needs a 2x2 matrix")
    try:
        c = gl2z_finite_order_class(m)
    except ValueError as e:
        raise GroupError(str(e)) from None
    return {"matrix": [_vec(r) for r in m], "label": c.label, "order": c.order, "det": c.det}


# -- rendering ---------------------------------------------------------------

def dumps(tree: Any) -> str:
    return json.dumps(tree, sort_keys=True, indent=2, ensure_ascii=False)


def _is_elem(x: Any) -> bool:
    return isinstance(x, dict) and set(x) == {"lin", "trans"}


def render_text(tree: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(tree, dict):
        for k in sorted(tree):
            v = tree[k]
            if _is_elem(v):
                out.append(f"{pad}{k}: {_elem_text(v)}")
            elif isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out.extend(render_text(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(tree, list):
        for v in tree:
            if _is_elem(v):
                out.append(f"{pad}- {_elem_text(v)}")
            elif isinstance(v, dict):
                sub = render_text(v, indent + 1)
                out.append(f"{pad}- " + sub[0].strip())
                out.extend(sub[1:])
            elif isinstance(v, list):
                out.append(f"{pad}- [" + ", ".join(_scalar(x) for x in v) + "]")
            else:
                out.append(f"{pad}- {_scalar(v)}")
    else:
        out.append(pad + _scalar(tree))
    return out


def _scalar(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _elem_text(e: dict) -> str:
    lin = "; ".join(" ".join(r) for r in e["lin"])
    return f"({' '.join(e['trans'])}) + [{lin}]"


def _tables_text(tree: dict) -> list[str]:
    out = []
    for t, rows in tree["tables"].items():
        for r in rows:
            line = f"table {t} row {r['key']}: {r['status']}"
            if r["source"]:
                line += f" ({r['source']})"
            out.append(line)
            out.extend(f"    {m}" for m in r["mismatches"])
    s = tree["summary"]
    out.append(f"{s['pass']} pass, {s['fail']} fail, {s['skip']} skipped")
    return out


# -- entry point -------------------------------------------------------------

def _table_arg(s: str) -> str:
    if s == "all":
        return s
    if s.isdigit() and int(s) in table_ids():
        return s
    raise argparse.ArgumentTypeError(f"unknown table {s!r} (1-{max(table_ids())} or 'all')")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatfiber", description="Fibered-orbifold invariants of space groups.")
    p.add_argument("--version", action="version", version=f"flatfiber {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit the JSON report")

    a = sub.add_parser("analyze", help="group-level report")
    a.add_argument("group")
    common(a)
    f = sub.add_parser("fiber", help="analysis of a normal subgroup")
    f.add_argument("group")
    f.add_argument("--normal", default="builtin")
    common(f)
    v = sub.add_parser("verify-tables", help="check the fibration tables")
    v.add_argument("--table", type=_table_arg, default="all")
    common(v)
    c = sub.add_parser("conjclass", help="GL(2,Z) class of a finite-order matrix")
    c.add_argument("matrix")
    common(c)
    return p


def _load(source: str) -> GroupFile:
    try:
        return load_group(source)
    except OSError as e:
        raise InputError(f"cannot read {source!r}: {e.strerror or e}") from None
    except GroupFileError as e:
        raise InputError(f"{source}: {e}") from None


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    ok = True
    try:
        if args.cmd == "analyze":
            tree = group_report(_load(args.group))
            text = render_text(tree)
        elif args.cmd == "fiber":
            tree = fiber_report(_load(args.group), args.normal)
            text = render_text(tree)
        elif args.cmd == "verify-tables":
            tree, ok = tables_report(args.table)
            text = _tables_text(tree)
        else:
            tree = conjclass_report(args.matrix)
            text = [tree["label"]]
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (GroupError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(dumps(tree) if args.json else "\n".join(text))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
