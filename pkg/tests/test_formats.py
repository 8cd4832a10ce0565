import pytest
from hypothesis import given
from hypothesis import strategies as st

from strongclones.core import PartialFunction, Relation
from strongclones.formats import (
    FormatError,
    format_function,
    format_relation,
    parse_function,
    parse_relation,
    read_relation,
    write_relation,
)


@given(st.integers(1, 4).flatmap(lambda h: st.tuples(st.just(h), st.integers(0, (1 << (1 << h)) - 1))))
def test_relation_roundtrip(hm):
    rho = Relation(*hm)
    assert parse_relation(format_relation(rho)) == rho


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << (1 << n)) - 1), st.integers(0, (1 << (1 << n)) - 1))))
def test_function_roundtrip(t):
    n, d, v = t
    f = PartialFunction(n, d, v & d)
    assert parse_function(format_function(f)) == f


def test_comments_and_blank_lines():
    text = "# a comment\narity 2\n\n01\n  10  \n# end\n"
    assert parse_relation(text) == Relation.from_tuples(2, ["01", "10"])


def test_empty_relation_file():
    assert parse_relation("arity 3\n") == Relation.empty(3)


@pytest.mark.parametrize("text, line", [
    ("arity 2\n01\n1x\n", 3),
    ("arity 2\n011\n", 2),
    ("arty 2\n", 1),
    ("arity 25\n", 1),
])
def test_relation_errors_carry_line(text, line):
    with pytest.raises(FormatError) as e:
        parse_relation(text)
    assert e.value.line == line


@pytest.mark.parametrize("text, line", [
    ("arity 1\n0 -> 2\n", 2),
    ("arity 1\n0 1\n", 2),
    ("arity 1\n0 -> 1\n0 -> 0\n", 3),
    ("arity 2\n0 -> 1\n", 2),
])
def test_function_errors_carry_line(text, line):
    with pytest.raises(FormatError) as e:
        parse_function(text)
    assert e.value.line == line


def test_empty_file():
    with pytest.raises(FormatError):
        parse_relation("")


def test_file_helpers(tmp_path):
    rho = Relation.from_tuples(3, ["000", "111"])
    path = tmp_path / "r.rel"
    write_relation(rho, path)
    assert path.read_text() == "arity 3\n000\n111\n"
    assert read_relation(path) == rho
    (tmp_path / "bad.rel").write_text("arity 2\n2\n")
    with pytest.raises(FormatError, match="bad.rel:2"):
        read_relation(tmp_path / "bad.rel")
