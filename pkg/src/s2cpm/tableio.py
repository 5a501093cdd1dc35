"""CSV and JSON table documents.

CSV uses a header row of pairs, ``pair,(1,2),(2,3),...``
in canonical pair order, then one row per Y outcome whose first cell is a
label.  Optional leading ``# key=value`` lines carry ``kind`` and ``d``.
Joint count tables use a header ``x,2,3,...,s`` instead.

JSON is ``{"kind", "s", "d", "labels", "columns": {"i,j": [...]}}`` with
every rational written as a string.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .completion import PartialFamily, RefinementMap
from .exterior_det import rational
from .probmodel import JointDistribution
from .s2rank import PairFamily, S2Error, canonical_pairs

KINDS = ("conditional", "partial-conditional", "joint-counts")
UNKNOWN = "?"

_PAIR_RE = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*\)$")


class ParseError(S2Error, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class BadHeader(ParseError):
    pass


def format_rational(x: Fraction | None) -> str:
    """Exact decimal when the denominator allows it, else ``p/q``."""
    if x is None:
        return UNKNOWN
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    scaled = abs(x) * 10**places
    sign = "-" if x < 0 else ""
    digits = str(int(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")


def parse_cell(text: str, line: int | None = None, column: int | None = None) -> Fraction | None:
    text = text.strip()
    if text == UNKNOWN:
        return None
    try:
        return rational(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ParseError(f"not an exact decimal or fraction: {text!r}", line, column) from None


def _default_labels(kind: str, d: int) -> tuple[str, ...]:
    return tuple(f"Y={a}" for a in range(1, d + 1))


@dataclass(frozen=True)
class TableDocument:
    """A parsed table.  ``columns`` is keyed by pair (i, j) for the
    conditional kinds and by x (2..s) for joint counts."""

    kind: str
    s: int
    d: int
    columns: Mapping[Any, tuple[Fraction | None, ...]]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown table kind {self.kind!r}")
        keys = self.keys()
        if set(self.columns) != set(keys):
            raise ValueError("columns do not match the index set for this kind")
        cols = {k: tuple(self.columns[k]) for k in keys}
        if any(len(c) != self.d for c in cols.values()):
            raise ValueError("every column must have d entries")
        if self.kind != "partial-conditional" and any(x is None for c in cols.values() for x in c):
            raise ValueError("unknown entries are only allowed in partial-conditional tables")
        object.__setattr__(self, "columns", cols)
        labels = tuple(self.labels) or _default_labels(self.kind, self.d)
        if len(labels) != self.d:
            raise ValueError("need one label per Y outcome")
        object.__setattr__(self, "labels", labels)

    def keys(self) -> list:
        if self.kind == "joint-counts":
            return list(range(2, self.s + 1))
        return canonical_pairs(self.s)

    def rows(self) -> list[list[Fraction | None]]:
        return [[self.columns[k][a] for k in self.keys()] for a in range(self.d)]

    # conversions

    @classmethod
    def from_family(cls, fam: PairFamily, labels: Sequence[str] = ()) -> "TableDocument":
        return cls("conditional", fam.s, fam.d, dict(fam.columns), tuple(labels))

    @classmethod
    def from_partial(cls, pf: PartialFamily, labels: Sequence[str] = ()) -> "TableDocument":
        kind = "conditional" if pf.is_complete() else "partial-conditional"
        return cls(kind, pf.s, pf.d, dict(pf.columns), tuple(labels))

    @classmethod
    def from_counts(cls, counts: Sequence[Sequence[Fraction | int]], labels: Sequence[str] = ()) -> "TableDocument":
        """``counts[a][x - 2]`` as in :meth:`JointDistribution.from_counts`."""
        d = len(counts)
        s = len(counts[0]) + 1
        cols = {x: tuple(Fraction(counts[a][x - 2]) for a in range(d)) for x in range(2, s + 1)}
        return cls("joint-counts", s, d, cols, tuple(labels))

    def to_family(self) -> PairFamily:
        if self.kind == "joint-counts":
            raise ValueError("joint count table is not a conditional table")
        if self.kind == "partial-conditional":
            return self.to_partial().to_family()
        return PairFamily(self.s, self.d, dict(self.columns))

    def to_partial(self) -> PartialFamily:
        if self.kind == "joint-counts":
            raise ValueError("joint count table is not a conditional table")
        return PartialFamily(self.s, self.d, dict(self.columns))

    def to_joint(self) -> JointDistribution:
        if self.kind != "joint-counts":
            raise ValueError(f"{self.kind} table is not a joint count table")
        return JointDistribution.from_counts(self.rows())


# CSV


def split_row(line: str) -> list[str]:
    """Split on commas that are outside parentheses and double quotes, so
    the unquoted pair header ``pair,(1,2),(2,3)`` reads as intended."""
    cells = []
    buf = []
    depth = 0
    quoted = False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        elif ch == "(" and not quoted:
            depth += 1
        elif ch == ")" and not quoted and depth:
            depth -= 1
        elif ch == "," and not quoted and depth == 0:
            cells.append("".join(buf))
            buf = []
            continue
        buf.append(ch)
    cells.append("".join(buf))
    return [c.strip().strip('"') if c.strip().startswith('"') else c for c in cells]


def _join_row(cells: Sequence[str]) -> str:
    out = []
    for c in cells:
        if any(ch in c for ch in ',()"') and not _PAIR_RE.match(c):
            c = '"' + c.replace('"', "") + '"'
        out.append(c)
    return ",".join(out)


def _read_directives(lines: list[str]) -> tuple[dict[str, str], int]:
    directives = {}
    n = 0
    for n, raw in enumerate(lines):
        text = raw.strip()
        if not text:
            continue
        if not text.startswith("#"):
            return directives, n
        body = text.lstrip("#").strip()
        if "=" in body:
            key, _, value = body.partition("=")
            directives[key.strip().lower()] = value.strip()
    return directives, len(lines)


def _parse_pair_header(cells: list[str], line: int) -> int:
    pairs = []
    for col, cell in enumerate(cells, start=2):
        m = _PAIR_RE.match(cell.strip())
        if not m:
            raise BadHeader(f"expected a pair like (1,2), got {cell!r}", line, col)
        pairs.append((int(m.group(1)), int(m.group(2))))
    n = len(pairs)
    s = 2
    while s * (s - 1) // 2 < n:
        s += 1
    if s * (s - 1) // 2 != n:
        raise BadHeader(f"{n} pair columns is not s(s-1)/2 for any s", line)
    expected = canonical_pairs(s)
    for col, (got, want) in enumerate(zip(pairs, expected), start=2):
        if got != want:
            raise BadHeader(f"pair column out of order: got {got}, expected {want}", line, col)
    return s


def _parse_x_header(cells: list[str], line: int) -> int:
    for col, cell in enumerate(cells, start=2):
        if cell.strip() != str(col):
            raise BadHeader(f"expected x value {col}, got {cell!r}", line, col)
    if not cells:
        raise BadHeader("joint count table needs at least one x column", line)
    return len(cells) + 1


def parse_csv(text: str) -> TableDocument:
    lines = text.splitlines()
    directives, start = _read_directives(lines)
    body = [
        (n + 1, split_row(line))
        for n, line in enumerate(lines[start:], start=start)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not body:
        raise ParseError("no header row")
    hline, header = body[0]
    data = body[1:]
    first = header[0].strip().lower()
    if first == "x":
        kind = "joint-counts"
        s = _parse_x_header(header[1:], hline)
    elif first == "pair":
        kind = "conditional"
        s = _parse_pair_header(header[1:], hline)
    else:
        raise BadHeader(f"header must start with 'pair' or 'x', got {header[0]!r}", hline, 1)
    if "kind" in directives:
        if directives["kind"] not in KINDS:
            raise ParseError(f"unknown kind {directives['kind']!r}")
        if (directives["kind"] == "joint-counts") != (kind == "joint-counts"):
            raise BadHeader(f"header does not match kind={directives['kind']}", hline, 1)
        kind = directives["kind"]

    width = len(header)
    labels = []
    rows = []
    for n, row in data:
        if len(row) != width:
            raise ParseError(f"expected {width} cells, got {len(row)}", n)
        labels.append(row[0].strip())
        rows.append([parse_cell(c, n, col) for col, c in enumerate(row[1:], start=2)])
    if not rows:
        raise ParseError("table has no data rows", hline)

    try:
        d = int(directives.get("d", 2 if len(rows) == 1 and kind != "joint-counts" else len(rows)))
    except ValueError:
        raise ParseError(f"bad d directive {directives['d']!r}") from None
    has_unknown = any(x is None for row in rows for x in row)
    if has_unknown:
        if kind == "joint-counts":
            raise ParseError("joint count tables cannot contain '?'")
        if kind == "conditional" and "kind" in directives:
            raise ParseError("'?' cells require kind=partial-conditional")
        kind = "partial-conditional"
    if len(rows) == 1 and d == 2 and kind != "joint-counts":
        rows.append([None if x is None else 1 - x for x in rows[0]])
        labels.append("Y=2")
    if len(rows) != d:
        raise ParseError(f"table declares d={d} but has {len(rows)} rows")
    keys = list(range(2, s + 1)) if kind == "joint-counts" else canonical_pairs(s)
    cols = {k: tuple(row[n] for row in rows) for n, k in enumerate(keys)}
    try:
        return TableDocument(kind, s, d, cols, tuple(labels))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_csv(doc: TableDocument) -> str:
    lines = [f"# kind={doc.kind}", f"# d={doc.d}"]
    if doc.kind == "joint-counts":
        lines.append(_join_row(["x", *map(str, doc.keys())]))
    else:
        lines.append(_join_row(["pair", *(f"({i},{j})" for i, j in doc.keys())]))
    for label, row in zip(doc.labels, doc.rows()):
        lines.append(_join_row([label, *map(format_rational, row)]))
    return "\n".join(lines) + "\n"


# JSON


def _key_str(key) -> str:
    return f"{key[0]},{key[1]}" if isinstance(key, tuple) else str(key)


def serialize_json(doc: TableDocument) -> str:
    obj = {
        "kind": doc.kind,
        "s": doc.s,
        "d": doc.d,
        "labels": list(doc.labels),
        "columns": {_key_str(k): [format_rational(x) for x in doc.columns[k]] for k in doc.keys()},
    }
    return json.dumps(obj, indent=2) + "\n"


def parse_json(text: str) -> TableDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    try:
        kind = obj["kind"]
        s = int(obj["s"])
        d = int(obj["d"])
        raw = obj["columns"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from None
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}")
    keys = list(range(2, s + 1)) if kind == "joint-counts" else canonical_pairs(s)
    wanted = {_key_str(k): k for k in keys}
    if set(raw) != set(wanted):
        missing = sorted(set(wanted) - set(raw))
        extra = sorted(set(raw) - set(wanted))
        raise BadHeader(f"column keys mismatch: missing={missing} extra={extra}")
    cols = {}
    for ks, k in wanted.items():
        entries = raw[ks]
        if not isinstance(entries, list):
            raise ParseError(f"column {ks} must be a list")
        cols[k] = tuple(parse_cell(str(x)) for x in entries)
    try:
        return TableDocument(kind, s, d, cols, tuple(obj.get("labels") or ()))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_table(text: str, format: str = "csv") -> TableDocument:
    if format == "csv":
        return parse_csv(text)
    if format == "json":
        return parse_json(text)
    raise ValueError(f"unknown format {format!r}")


def serialize_table(doc: TableDocument, format: str = "csv") -> str:
    if format == "csv":
        return serialize_csv(doc)
    if format == "json":
        return serialize_json(doc)
    raise ValueError(f"unknown format {format!r}")


def parse_refinement_map(text: str) -> RefinementMap:
    """JSON list of injections, one per source table, e.g. ``[[1,2,4,5],[1,2,3,4]]``.
    A ``{"maps": [...]}`` wrapper is also accepted."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(obj, dict):
        obj = obj.get("maps")
    if not isinstance(obj, list) or not all(isinstance(m, list) for m in obj):
        raise ParseError("refinement map must be a JSON list of integer lists")
    try:
        return RefinementMap(tuple(tuple(m) for m in obj))
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from None
