"""Group files, builtin presentations and table fixtures.

Group file syntax (UTF-8, ``#`` starts a comment)::

    name = pg
    dim = 2
    expect pointgroup_order = 2
    gen t1:
      1 0
      0 1
      t: 1 0
    gen g:
      1 0
      0 -1
      t: 1/2 0
    normal:
      word: t1
    normal other:
      elem:
        1 0
        0 1
        t: 0 1

``gen`` blocks may omit the name (they are then called g1, g2, ...).  A
``normal`` block holds ``word:`` lines over generator names (``a b^-1 c^2``)
and ``elem:`` blocks in matrix syntax.  An untagged block is the default
normal subgroup; tagged blocks are extra named choices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .exact import fmt_frac
from .isometry import AffineIso, compose, ident, power
from .spacegroup import GroupError, SpaceGroup, build


class GroupFileError(ValueError):
    """Syntax or shape error in a group file; carries the 1-based line number."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}" + (f", column {column}" if column else "") if line else "input"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


WordLetter = tuple[str, int]


@dataclass
class NormalSpec:
    """A normal subgroup given by words over generator names and/or explicit elements."""

    words: list = field(default_factory=list)      # list of list[WordLetter]
    elements: list = field(default_factory=list)   # list of AffineIso


@dataclass
class GroupFile:
    name: str
    dim: int
    generators: list                                # list of (name, AffineIso)
    normals: dict = field(default_factory=dict)     # tag ("" = default) -> NormalSpec
    expect: dict = field(default_factory=dict)      # key -> raw string

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.generators]

    def gens(self) -> list[AffineIso]:
        return [g for _, g in self.generators]

    def group(self) -> SpaceGroup:
        return build(self.dim, self.gens())

    def evaluate(self, letters: list) -> AffineIso:
        table = dict(self.generators)
        out = ident(self.dim)
        for name, e in letters:
            if name not in table:
                raise GroupFileError(f"unknown generator {name!r} in word")
            out = compose(out, power(table[name], e))
        return out

    def normal_generators(self, tag: str = "") -> list[AffineIso]:
        if tag not in self.normals:
            known = ", ".join(repr(t or "default") for t in self.normals) or "none"
            raise KeyError(f"no normal subgroup {tag or 'default'!r} (available: {known})")
        spec = self.normals[tag]
        return [self.evaluate(w) for w in spec.words] + list(spec.elements)


# -- parsing -----------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
_LETTER = re.compile(r"([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?$")


def _parse_frac(tok: str, line: int, col: int) -> Fraction:
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", tok):
        raise GroupFileError(f"malformed rational {tok!r}", line, col)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise GroupFileError(f"zero denominator in {tok!r}", line, col) from None


def _row(text: str, line: int, offset: int) -> tuple:
    out = []
    for m in re.finditer(r"\S+", text):
        out.append(_parse_frac(m.group(), line, offset + m.start() + 1))
    return tuple(out)


def parse_word(text: str, line: int = 0) -> list:
    letters = []
    for tok in text.split():
        m = _LETTER.match(tok)
        if not m:
            raise GroupFileError(f"malformed word letter {tok!r}", line)
        letters.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
    return letters


def parse_group_file(text: str) -> GroupFile:
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            lines.append((no, body, len(body) - len(body.lstrip())))
    name, dim = "", None
    gens: list = []
    normals: dict = {}
    expect: dict = {}
    i = 0

    def need_dim(no: int) -> int:
        if dim is None:
            raise GroupFileError("'dim = n' must come before generators", no)
        return dim

    def read_element(start: int, no: int) -> tuple[AffineIso, int]:
        n = need_dim(no)
        rows = []
        j = start
        for _ in range(n):
            if j >= len(lines):
                raise GroupFileError("unexpected end of file inside a matrix", no)
            lno, body, ind = lines[j]
            if body.strip().startswith("t:"):
                raise GroupFileError(f"expected {n} matrix rows before 't:'", lno)
            r = _row(body, lno, 0)
            if len(r) != n:
                raise GroupFileError(f"matrix row has {len(r)} entries, expected {n}", lno)
            rows.append(r)
            j += 1
        if j >= len(lines) or not lines[j][1].strip().startswith("t:"):
            lno = lines[j][0] if j < len(lines) else no
            raise GroupFileError("missing translation line 't: ...'", lno)
        lno, body, _ = lines[j]
        k = body.index("t:")
        t = _row(body[k + 2:], lno, k + 2)
        if len(t) != n:
            raise GroupFileError(f"translation has {len(t)} entries, expected {n}", lno)
        try:
            g = AffineIso(t, tuple(rows))
        except ValueError as e:
            raise GroupFileError(str(e), lno) from None
        return g, j + 1

    while i < len(lines):
        no, body, _ = lines[i]
        s = body.strip()
        if s.startswith("expect "):
            key, _, val = s[len("expect "):].partition("=")
            if not _ or not key.strip():
                raise GroupFileError("expected 'expect key = value'", no)
            expect[key.strip()] = val.strip()
            i += 1
        elif s.startswith("gen") and s.endswith(":") and (s == "gen:" or s[3] == " "):
            gname = s[3:-1].strip() or f"g{len(gens) + 1}"
            if not _NAME.match(gname):
                raise GroupFileError(f"bad generator name {gname!r}", no)
            if gname in dict(gens):
                raise GroupFileError(f"duplicate generator name {gname!r}", no)
            g, i = read_element(i + 1, no)
            gens.append((gname, g))
        elif s.startswith("normal") and s.endswith(":") and (s == "normal:" or s[6] == " "):
            tag = s[6:-1].strip()
            if tag in normals:
                raise GroupFileError(f"duplicate normal block {tag or 'default'!r}", no)
            spec = NormalSpec()
            i += 1
            while i < len(lines):
                lno, lbody, _ = lines[i]
                ls = lbody.strip()
                if ls.startswith("word:"):
                    spec.words.append(parse_word(ls[5:], lno))
                    i += 1
                elif ls == "elem:":
                    g, i = read_element(i + 1, lno)
                    spec.elements.append(g)
                else:
                    break
            normals[tag] = spec
        elif "=" in s:
            key, _, val = (x.strip() for x in s.partition("="))
            if key == "dim":
                if dim is not None:
                    raise GroupFileError("dim given twice", no)
                if not val.isdigit() or int(val) < 1:
                    raise GroupFileError(f"dim must be a positive integer, got {val!r}", no)
                dim = int(val)
            elif key == "name":
                name = val
            else:
                raise GroupFileError(f"unknown header key {key!r}", no)
            i += 1
        else:
            raise GroupFileError(f"unexpected line {s!r}", no)
    if dim is None:
        raise GroupFileError("missing 'dim = n' header")
    if not gens:
        raise GroupFileError("no generators")
    gf = GroupFile(name, dim, gens, normals, expect)
    for tag, spec in normals.items():
        for w in spec.words:
            for letter, _ in w:
                if letter not in dict(gens):
                    raise GroupFileError(f"normal block {tag or 'default'!r} uses unknown generator {letter!r}")
    return gf


# -- serializing -------------------------------------------------------------

def _fmt_element(g: AffineIso, indent: str) -> list[str]:
    out = [indent + " ".join(fmt_frac(x) for x in r) for r in g.lin]
    out.append(indent + "t: " + " ".join(fmt_frac(x) for x in g.trans))
    return out


def format_word(letters: list) -> str:
    return " ".join(n if e == 1 else f"{n}^{e}" for n, e in letters)


def serialize_group_file(gf: GroupFile) -> str:
    out = []
    if gf.name:
        out.append(f"name = {gf.name}")
    out.append(f"dim = {gf.dim}")
    for k, v in gf.expect.items():
        out.append(f"expect {k} = {v}")
    for n, g in gf.generators:
        out.append(f"gen {n}:")
        out.extend(_fmt_element(g, "  "))
    for tag, spec in gf.normals.items():
        out.append(f"normal {tag}:" if tag else "normal:")
        for w in spec.words:
            out.append("  word: " + format_word(w))
        for g in spec.elements:
            out.append("  elem:")
            out.extend(_fmt_element(g, "    "))
    return "\n".join(out) + "\n"


# -- builtins ----------------------------------------------------------------

WALLPAPER_NAMES = (
    "p1", "p2", "pm", "pg", "cm", "pmm", "pmg", "pgg", "cmm",
    "p4", "p4m", "p4g", "p3", "p3m1", "p31m", "p6", "p6m",
)
SPACE_NAMES = ("it5", "it7", "it63", "it64a", "it64b", "it68", "it113", "it126", "it134", "it163")
BUILTIN_NAMES = WALLPAPER_NAMES + SPACE_NAMES


def builtin_text(name: str) -> str:
    if name not in BUILTIN_NAMES:
        raise GroupError(f"unknown builtin group {name!r}")
    return resources.files("flatfiber").joinpath("data").joinpath("groups").joinpath(f"{name}.grp").read_text(encoding="utf-8")


def builtin_file(name: str) -> GroupFile:
    return parse_group_file(builtin_text(name))


def builtin(name: str) -> SpaceGroup:
    return builtin_file(name).group()


def load_group(source: str) -> GroupFile:
    """A builtin name or a path to a group file."""
    if source in BUILTIN_NAMES:
        return builtin_file(source)
    with open(source, encoding="utf-8") as fh:
        return parse_group_file(fh.read())


# -- table fixtures ----------------------------------------------------------

@dataclass(frozen=True)
class TableFixture:
    table: int
    key: str                      # IT number plus a row tag when rows share it
    it: int
    data: dict

    def get(self, k: str, default=None):
        return self.data.get(k, default)


_FIXTURES: Optional[dict] = None


def _load_fixtures() -> dict:
    global _FIXTURES
    if _FIXTURES is None:
        raw = json.loads(resources.files("flatfiber").joinpath("data").joinpath("tables.json").read_text(encoding="utf-8"))
        _FIXTURES = {int(k): [TableFixture(int(k), r["key"], r["it"], r) for r in rows]
                     for k, rows in raw["tables"].items()}
    return _FIXTURES


def table_ids() -> list[int]:
    return sorted(_load_fixtures())


def fixtures(table: int) -> list[TableFixture]:
    data = _load_fixtures()
    if table not in data:
        raise KeyError(f"unknown table {table}")
    return list(data[table])


# -- table verification ------------------------------------------------------
#
# Action labels are compared through invariant triples
# (order, orientation preserved, has a fixed point).  Orientation is only
# meaningful on orientable fibers; elsewhere it is reported as None and
# ignored by the comparison.

def label_invariant(fiber: str, label: str) -> Optional[tuple]:
    """Invariant triple of a printed action label on the given fiber type, or None if unknown."""
    from .classify import named_element, standard_group
    from .fibration import affinity_invariant

    lab = label.rstrip(".")
    base = lab.rstrip("'′″")
    if fiber in ("∘", "2222"):
        f = "torus" if fiber == "∘" else "pillow"
        try:
            g = named_element(f, lab)
        except KeyError:
            pass
        else:
            return affinity_invariant(g, standard_group(f)).as_tuple()
    if base == "idt":
        return (1, True, True)
    if fiber in ("O", "I"):
        if base == "ref":
            return (2, False, True)
        m = re.fullmatch(r"(\d+)-rot", base)
        return (int(m.group(1)), True, False) if m else None
    if base.endswith("-grf"):
        return (2, False, False)
    if base.endswith("-ref") or base == "ref":
        return (2, False, True)
    m = re.fullmatch(r"(\d+)-rot", base)
    if m:
        return (int(m.group(1)), True, True)
    return None


def _inv_match(expected: Optional[tuple], got: tuple) -> bool:
    if expected is None:
        return False
    if expected[0] != got[0] or expected[2] != got[2]:
        return False
    return expected[1] is None or got[1] is None or expected[1] == got[1]


def _norm_type(s: str) -> str:
    from .fibration import normalize_conway

    return s if s in ("O", "I", "pt") else normalize_conway(s)


@dataclass(frozen=True)
class RowResult:
    table: int
    key: str
    status: str                     # pass | fail | skip
    source: str = ""                # what was analysed
    mismatches: tuple = ()

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def builtin_rows() -> dict:
    """(table, key) -> [(builtin name, normal tag)] from the builtins' ``expect table`` lines."""
    out: dict = {}
    for name in BUILTIN_NAMES:
        gf = builtin_file(name)
        for k, v in gf.expect.items():
            if k != "table" and not k.startswith("table."):
                continue
            tag = k[len("table."):] if k.startswith("table.") else ""
            t, _, key = v.partition(":")
            out.setdefault((int(t), key.strip()), []).append((name, tag))
    return out


def _generator_choices(an, fib) -> list[tuple]:
    """All standard generating tuples of the structure group: (g,) or (involution, rotation)."""
    st = an.structure
    m = st.order
    if m == 1:
        return [(0,)]
    if st.kind == "cyclic":
        return [(i,) for i in range(m) if st.element_order(i) == m]
    out = []
    for r in range(m):
        if st.element_order(r) != st.n:
            continue
        cyc = st.generated([r])
        for s in range(m):
            if s not in cyc and st.element_order(s) == 2 and len(st.generated([s, r])) == m:
                out.append((s, r))
    return out


def _actions_match(fix: TableFixture, an, fib) -> bool:
    want = fix.data["actions"]
    ftype, btype = fix.data["fibers"]
    expected = [(label_invariant(ftype, a), label_invariant(btype, b)) for a, b in want]
    for choice in _generator_choices(an, fib):
        if len(choice) != len(expected):
            continue
        if all(_inv_match(ef, fib.actions[i].fiber.as_tuple()) and _inv_match(eb, fib.actions[i].base.as_tuple())
               for i, (ef, eb) in zip(choice, expected)):
            return True
    return False


def compare_row(fix: TableFixture, an, split_flags: Optional[tuple] = None) -> list[str]:
    """Mismatches between a fixture row and an analysis of (G, N)."""
    from .fibration import Fibration

    bad = []
    if not an.dual_exists:
        return ["orthogonal dual does not exist"]
    fib = Fibration(an)
    got_f = [fib.fiber, fib.base]
    if got_f != [_norm_type(x) for x in fix.data["fibers"]]:
        bad.append(f"fibers {got_f} != {fix.data['fibers']}")
    got_q = [fib.quotient_fiber, fib.quotient_base]
    if got_q != [_norm_type(x) for x in fix.data["quotients"]]:
        bad.append(f"quotients {got_q} != {fix.data['quotients']}")
    if an.structure.label != fix.data["grp"]:
        bad.append(f"structure {an.structure.label} != {fix.data['grp']}")
    elif not _actions_match(fix, an, fib):
        bad.append(f"no generating tuple acts as {fix.data['actions']}")
    if split_flags is not None:
        got = split_flags
        want = (fix.data["split"], fix.data["dual_split"])
        if got != want:
            bad.append(f"split flags {got} != {want}")
    return bad


def _classifying_mismatches(fix: TableFixture, an) -> list[str]:
    from .classify import class_key, classifying_pair, pair_from_label

    ftype = fix.data["fibers"][0]
    cp = classifying_pair(an)
    kind = "cyclic" if fix.data["quotients"][1] == "O" else "dihedral"
    if cp.kind != kind:
        return [f"classifying kind {cp.kind} != {kind}"]
    if ftype in ("∘", "2222"):
        f = "torus" if ftype == "∘" else "pillow"
        want = class_key(f, kind, pair_from_label(f, "{" + ", ".join(fix.data["pair"]) + "}"))
        got = class_key(f, kind, cp.affinities)
        return [] if want == got else [f"classifying pair {cp.label} != {{{', '.join(fix.data['pair'])}}}"]
    exp = [label_invariant(ftype, p) for p in fix.data["pair"]]
    got = list(cp.invariants)
    if kind == "cyclic":
        exp, got = exp[:1], got[:1]
    for perm in (got, got[::-1]):
        if len(perm) == len(exp) and all(_inv_match(e, g) for e, g in zip(exp, perm)):
            return []
    return [f"classifying invariants {got} do not match {fix.data['pair']}"]


def _split_flags(an) -> tuple:
    from .normal import analyze
    from .splitting import split_verdict

    dual = analyze(an.parent, an.K.generators)
    return (split_verdict(an).splits, split_verdict(dual).splits)


def verify_builtin_row(fix: TableFixture, name: str, tag: str) -> list[str]:
    from .normal import analyze

    gf = builtin_file(name)
    an = analyze(gf.group(), gf.normal_generators(tag))
    if fix.table == 1:
        return compare_row(fix, an, _split_flags(an))
    bad = compare_row(fix, an)
    if not bad:
        bad = _classifying_mismatches(fix, an)
    return bad


def verify_round_trip(fix: TableFixture) -> list[str]:
    """Build the extension from the printed classifying pair and compare the analysis."""
    from .classify import (
        build_extension, class_key, classifying_pair, fiber_generators, pair_from_label, shiftable_keys,
        standard_group,
    )
    from .normal import analyze

    ftype = fix.data["fibers"][0]
    f = "torus" if ftype == "∘" else "pillow"
    kind = "cyclic" if fix.data["quotients"][1] == "O" else "dihedral"
    pair = pair_from_label(f, "{" + ", ".join(fix.data["pair"]) + "}")
    m = standard_group(f)
    grp = build_extension(m, kind, pair[:1] if kind == "cyclic" else pair)
    an = analyze(grp, fiber_generators(m))
    bad = compare_row(fix, an)
    bad += _classifying_mismatches(fix, an)
    if f == "torus" and kind == "dihedral":
        want = class_key(f, kind, pair) in shiftable_keys()
        got = classifying_pair(an).e_dim > 0
        if want != got:
            bad.append(f"E1 ∩ E2 nonzero is {got}, expected {want}")
    return bad


def verify_table(table: int) -> list[RowResult]:
    rows = fixtures(table)
    presented = builtin_rows()
    out = []
    for fix in rows:
        sources = presented.get((table, fix.key), [])
        results = []
        for name, tag in sources:
            results.append((f"{name}" + (f" [{tag}]" if tag else ""), verify_builtin_row(fix, name, tag)))
        if table in (17, 18):
            results.append(("extension from classifying pair", verify_round_trip(fix)))
        if not results:
            out.append(RowResult(table, fix.key, "skip", "presentation unavailable"))
            continue
        bad = tuple(m for _, ms in results for m in ms)
        out.append(RowResult(table, fix.key, "fail" if bad else "pass", "; ".join(s for s, _ in results), bad))
    return out
