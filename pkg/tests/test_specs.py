import pytest
from hypothesis import given, strategies as st

from domsets.cantor import CantorCube, SymCantor
from domsets.numerics import Value
from domsets.specs import SpecError, parse_gauge, parse_seq, parse_set


@pytest.mark.parametrize("text,n,expected", [
    ("geom(1/2)", 3, Value(1, 8)),
    ("harm(1)", 3, Value(1, 4)),
    ("pow2exp(2)", 2, Value.pow2(-4)),
    ("dblexp(1/2)", 3, Value.pow2(-8)),
    ("factexp(1/2)", 3, Value.pow2(-6)),
    ("mshift(2, geom(1/2))", 3, Value.pow2(-6)),
    ("ashift(2,harm(1))", 1, Value(1, 4)),
    ("scale(1/4, geom(1/2))", 1, Value(1, 8)),
    ("power(2,harm(1))", 1, Value(1, 4)),
])
def test_seq_specs(text, n, expected):
    assert parse_seq(text).at(n) == expected


def test_gauge_specs():
    assert parse_gauge("pow(1/2)").eval(Value(1, 16)) == Value(1, 4)
    assert parse_gauge("reclog()").eval(Value.pow2(-8)) == Value(1, 8)
    assert parse_gauge("recloglog()").eval(Value.pow2(-16)) == Value(1, 4)
    assert parse_gauge("tau(2,pow(1))").eval(Value(1, 4)) == Value(1, 16)
    assert parse_gauge("fromseq(geom(1/2))").eval(Value(1, 4)) == Value(1, 2)
    assert parse_gauge("scale(3, pow(1))").eval(Value(1, 4)) == Value(3, 4)


def test_set_specs():
    X = parse_set("symcantor(geom(1/4), 3)")
    assert isinstance(X, SymCantor) and X.depth == 3
    assert isinstance(parse_set("cube(2,dblexp(1/2))"), CantorCube)


@pytest.mark.parametrize("text,column", [
    ("geom(1/2", 9),
    ("gem(1/2)", 1),
    ("geom(2)", 1),
    ("mshift(x,geom(1/2))", 8),
    ("geom(1/2) junk", 11),
])
def test_seq_errors_report_column(text, column):
    with pytest.raises(SpecError) as e:
        parse_seq(text)
    assert e.value.pos + 1 == column
    assert f"column {column}" in str(e.value)


def test_gauge_and_set_errors():
    with pytest.raises(SpecError):
        parse_gauge("pow()")
    with pytest.raises(SpecError):
        parse_gauge("nolog()")
    with pytest.raises(SpecError):
        parse_set("symcantor(geom(3/4), 2)")  # ratio condition fails


def test_table_file(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("# a comment\n# zero 1\n1/2\n\n1/8\n2^-5\n# tail 1/4\n", encoding="utf-8")
    s = parse_seq("table:t.txt", tmp_path)
    assert [s.at(n) for n in (1, 2, 3)] == [Value(1, 2), Value(1, 8), Value.pow2(-5)]
    assert s.radius(0) == 1
    assert s.at(4) == Value.pow2(-7)  # geometric continuation


def test_table_file_errors(tmp_path):
    (tmp_path / "up.txt").write_text("1/4\n1/2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        parse_seq("table:up.txt", tmp_path)
    (tmp_path / "bad.txt").write_text("1/4\nzzz\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":2:"):
        parse_seq("table:bad.txt", tmp_path)
    with pytest.raises(ValueError):
        parse_seq("table:missing.txt", tmp_path)


def test_table_without_tail_ends(tmp_path):
    (tmp_path / "t.txt").write_text("1/2\n1/4\n", encoding="utf-8")
    s = parse_seq("table:t.txt", tmp_path)
    with pytest.raises(IndexError):
        s.at(3)


def test_pwl_file(tmp_path):
    (tmp_path / "g.txt").write_text("1/2 1/2\n1/4 1/8\n", encoding="utf-8")
    g = parse_gauge("pwl:g.txt", tmp_path)
    assert g.eval(Value(3, 8)) == Value(5, 16)
    (tmp_path / "h.txt").write_text("1/4 1/8\n1/2 1/2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        parse_gauge("pwl:h.txt", tmp_path)


@given(st.integers(1, 50), st.integers(2, 60))
def test_geom_spec_roundtrip(num, extra):
    den = num + extra
    s = parse_seq(f"geom({num}/{den})")
    assert s.at(2) == Value(num * num, den * den)
    assert parse_seq(s.describe()).at(3) == s.at(3)
