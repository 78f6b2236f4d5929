"""Extract the fibration tables from a LaTeX/markdown source into tables.json.

usage: python tools/extract_tables.py SOURCE [OUT]

OUT defaults to src/flatfiber/data/tables.json.  Tables are numbered in the
order their ``\\begin{table}`` blocks appear.  Rows that share a number inside
one table get keys with a letter suffix (4a, 4b, ...) in printed order.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from collections import Counter
from pathlib import Path

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "flatfiber" / "data" / "tables.json"

_SUBS = [
    ("$''$", "″"), ("$'$", "′"), ("$^{-1}$", "^-1"), ("^{-1}", "^-1"),
    ("\\{", "{"), ("\\}", "}"), ("\\hbox{$*$}", "*"), ("{\\ast}", "*"), ("\\ast", "*"),
    ("{\\times}", "×"), ("\\times", "×"), ("\\circ", "∘"), ("\\cdot", "·"),
    ("\\mathrm{O}", "O"), ("\\mathrm{I}", "I"), ("\\rm", ""), ("\\!", ""), ("\\,", ""), ("$", ""),
]


def clean(cell: str) -> str:
    s = cell
    for a, b in _SUBS:
        s = s.replace(a, b)
    return " ".join(s.split())


def label(tok: str) -> str:
    """Canonical element label: no periods, no spaces, LaTeX primes as Unicode."""
    t = tok.strip().replace(".", "").replace(" ", "")
    return t


def split_top(s: str, sep: str = ",") -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [x.strip() for x in out if x.strip()]


def conway(s: str) -> str:
    s = s.replace("{", "").replace("}", "").replace(" ", "")
    return s


def parse_pair(s: str) -> list[str]:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"expected a parenthesised pair, got {s!r}")
    return [conway(x) for x in split_top(s[1:-1])]


def parse_actions(s: str) -> list[list[str]]:
    return [[label(x) for x in split_top(p[1:-1])] for p in split_top(s)]


def parse_set(s: str) -> list[str]:
    s = s.strip()
    if s.startswith("{") and s.endswith("}"):
        s = s[1:-1]
    return [label(x) for x in split_top(s)]


def group_label(s: str) -> str:
    m = re.fullmatch(r"([CD])_?\{?(\d+)\}?", s.replace(" ", ""))
    if not m:
        raise ValueError(f"bad structure group {s!r}")
    return m.group(1) + m.group(2)


def decode_shorthand(s: str) -> tuple[str, str]:
    """'(·)' -> ('O', 'O'): outer bracket gives the fiber, inner symbol the quotient."""
    s = s.replace(" ", "").replace("-", "−")
    if len(s) != 3 or s[0] + s[2] not in ("()", "[]") or s[1] not in "·−":
        raise ValueError(f"bad fibration shorthand {s!r}")
    return ("O" if s[0] == "(" else "I"), ("O" if s[1] == "·" else "I")


def rows_of(block: str) -> list[list[str]]:
    body = block.split("\\hline", 1)[1].split("\\end{tabular}", 1)[0]
    out = []
    for raw in body.split("\\\\"):
        if not raw.strip():
            continue
        out.append([clean(c) for c in raw.split("&")])
    return out


def table1(block: str) -> list[dict]:
    rows = []
    for cells in rows_of(block):
        no, cn, fibr, s1, dual, s2, grp, act = cells
        fib, qbase = decode_shorthand(fibr)
        base, qfib = decode_shorthand(dual)
        rows.append({
            "key": no, "it": int(no), "conway": conway(cn),
            "fibers": [fib, base], "quotients": [qfib, qbase],
            "split": s1 == "Yes", "dual_split": s2 == "Yes",
            "grp": group_label(grp), "actions": parse_actions(act),
            "shorthand": [fibr.replace(" ", ""), dual.replace(" ", "")],
        })
    return rows


def co_seifert(block: str) -> list[dict]:
    rows = []
    for cells in rows_of(block):
        if len(cells) != 6:
            raise ValueError(f"expected 6 columns, got {cells!r}")
        no, fibers, grp, quot, act, pair = cells
        rows.append({
            "key": no, "it": int(no),
            "fibers": parse_pair(fibers), "grp": group_label(grp),
            "quotients": parse_pair(quot), "actions": parse_actions(act),
            "pair": parse_set(pair),
        })
    counts = Counter(r["key"] for r in rows)
    seen: Counter = Counter()
    for r in rows:
        if counts[r["key"]] > 1:
            seen[r["key"]] += 1
            r["key"] = r["key"] + "abcdefgh"[seen[r["key"]] - 1]
    return rows


def extract(text: str) -> dict:
    blocks = re.findall(r"\\begin\{table\}(.*?)\\end\{table\}", text, re.S)
    blocks = [b for b in blocks if "\\begin{tabular}" in b]
    tables = {}
    for i, b in enumerate(blocks, 1):
        tables[str(i)] = table1(b) if i == 1 else co_seifert(b)
    return {"tables": tables}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source")
    ap.add_argument("out", nargs="?", default=str(DEFAULT_OUT))
    a = ap.parse_args(argv)
    data = extract(Path(a.source).read_text(encoding="utf-8"))
    Path(a.out).write_text(json.dumps(data, ensure_ascii=False, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    for k, rows in data["tables"].items():
        print(f"table {k}: {len(rows)} rows", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
