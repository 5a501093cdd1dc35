from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from s2cpm.tableio import (
    BadHeader,
    ParseError,
    TableDocument,
    format_rational,
    parse_refinement_map,
    parse_table,
    serialize_table,
    split_row,
)

from .conftest import DATA


def test_split_row_keeps_pairs_together():
    assert split_row("pair,(1,2),(2,3)") == ["pair", "(1,2)", "(2,3)"]
    assert split_row('"a, b",1/2') == ["a, b", "1/2"]


class TestCsv:
    def test_student_b_single_row(self, fam_b):
        doc = parse_table((DATA / "student_b.csv").read_text())
        assert doc.kind == "conditional" and doc.s == 4 and doc.d == 2
        assert doc.to_family() == fam_b
        assert doc.labels[0] == "P(Y=1|i<X<=j)"

    def test_unknown_cell(self):
        doc = parse_table((DATA / "combined.csv").read_text())
        assert doc.kind == "partial-conditional"
        assert doc.columns[(3, 5)] == (None, None)

    def test_d3_partial(self, partial_a_new):
        doc = parse_table((DATA / "student_a_new.csv").read_text())
        assert doc.d == 3
        assert doc.to_partial() == partial_a_new

    def test_fraction_cells(self):
        doc = parse_table("pair,(1,2),(2,3),(1,3)\nY=1,1/3,2/3,1/2\n")
        assert doc.columns[(1, 2)] == (F(1, 3), F(2, 3))

    def test_nonterminating_decimal_rejected(self):
        with pytest.raises(ParseError) as exc:
            parse_table("pair,(1,2),(2,3),(1,3)\nY=1,0.333…,2/3,1/2\n")
        assert exc.value.line == 2 and exc.value.column == 2

    def test_header_order(self):
        with pytest.raises(BadHeader) as exc:
            parse_table("pair,(1,2),(1,3),(2,3)\nY=1,0.5,0.5,0.5\n")
        assert exc.value.column == 3

    def test_header_incomplete(self):
        with pytest.raises(BadHeader):
            parse_table("pair,(1,2),(2,3)\nY=1,0.5,0.5\n")

    def test_declared_d_mismatch(self):
        with pytest.raises(ParseError):
            parse_table("# d=3\npair,(1,2)\nY=1,0.5\nY=2,0.5\n")

    def test_ragged_row(self):
        with pytest.raises(ParseError) as exc:
            parse_table("pair,(1,2),(2,3),(1,3)\nY=1,0.5,0.5\n")
        assert exc.value.line == 2

    def test_joint_counts(self, joint_b):
        doc = parse_table((DATA / "student_b_counts.csv").read_text())
        assert doc.kind == "joint-counts"
        assert doc.to_joint() == joint_b

    def test_unknown_in_declared_conditional(self):
        with pytest.raises(ParseError):
            parse_table("# kind=conditional\npair,(1,2)\nY=1,?\n")


class TestJson:
    def test_roundtrip_b(self, fam_b):
        doc = TableDocument.from_family(fam_b)
        text = serialize_table(doc, "json")
        assert '"1,2": [\n      "0.5"' in text
        assert parse_table(text, "json") == doc

    def test_missing_column(self):
        with pytest.raises(BadHeader):
            parse_table('{"kind": "conditional", "s": 3, "d": 1, "columns": {"1,2": ["1"]}}', "json")

    def test_bad_json(self):
        with pytest.raises(ParseError):
            parse_table("{", "json")


def test_format_rational():
    assert format_rational(F(-7, 1000)) == "-0.007"
    assert format_rational(F(1, 3)) == "1/3"
    assert format_rational(F(5)) == "5"
    assert format_rational(F(5, 8)) == "0.625"
    assert format_rational(None) == "?"


def test_refinement_map_file():
    rm = parse_refinement_map((DATA / "b_c_map.json").read_text())
    assert rm.maps == ((1, 2, 4, 5), (1, 2, 3, 4))
    assert parse_refinement_map('{"maps": [[1, 2]]}').maps == ((1, 2),)
    with pytest.raises(ParseError):
        parse_refinement_map('[[1, 3, 2]]')


probability = st.fractions(min_value=0, max_value=1, max_denominator=40)


@st.composite
def documents(draw):
    s = draw(st.integers(2, 5))
    d = draw(st.integers(1, 4))
    kind = draw(st.sampled_from(["conditional", "partial-conditional", "joint-counts"]))
    if kind == "joint-counts":
        keys = list(range(2, s + 1))
        entry = st.integers(0, 50).map(F)
    else:
        keys = [(i, i + g) for g in range(1, s) for i in range(1, s - g + 1)]
        entry = probability if kind == "conditional" else st.one_of(st.none(), probability)
    cols = {k: tuple(draw(entry) for _ in range(d)) for k in keys}
    if kind == "partial-conditional" and all(x is not None for c in cols.values() for x in c):
        k0 = keys[0]
        cols[k0] = (None,) + cols[k0][1:]
    labels = tuple(draw(st.text("abcXY =|<(),", min_size=1, max_size=8).filter(lambda t: t.strip() == t and not t.startswith("#"))) for _ in range(d))
    return TableDocument(kind, s, d, cols, labels)


@settings(max_examples=150, deadline=None)
@given(documents(), st.sampled_from(["csv", "json"]))
def test_parse_serialize_roundtrip(doc, fmt):
    assert parse_table(serialize_table(doc, fmt), fmt) == doc
