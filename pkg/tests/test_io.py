import pytest

from linnorm import LinearSystem, ParseError
from linnorm.catalog import k23
from linnorm.cayley import complete_bipartite, octahedron
from linnorm.harmonic import FunctionOnG
from linnorm.io import (
    format_hypergraph,
    format_system,
    load_function,
    load_system,
    parse_function,
    parse_hypergraph,
    parse_system,
    save_function,
    save_hypergraph,
    save_system,
)


def test_system_round_trip(tmp_path):
    path = tmp_path / "k23.txt"
    save_system(k23(5), path)
    assert load_system(path) == k23(5)
    assert parse_system(format_system(k23(5))) == k23(5)


def test_system_comments_and_negatives():
    text = "# U2\n\n5 1 4\n1 -1 -1 1\n"
    assert parse_system(text) == LinearSystem([[1, 4, 4, 1]], 5)


@pytest.mark.parametrize(
    "text,message",
    [
        ("", "empty"),
        ("5 1\n1 1\n", "header"),
        ("4 1 2\n1 1\n", "not prime"),
        ("5 2 2\n1 1\n", "expected 2 matrix rows"),
        ("5 1 3\n1 1\n", "expected 3 entries"),
        ("5 1 2\n1 x\n", "expected an integer"),
        ("5 2 3\n1 1 0\n2 2 0\n", "rows not independent"),
    ],
)
def test_system_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_system(text)


def test_function_round_trip(tmp_path):
    f = FunctionOnG([1.5, -2, 0.25j], 3, 1)
    path = tmp_path / "f.fn"
    save_function(f, path)
    g = load_function(path)
    assert (g.q, g.n) == (3, 1)
    assert list(g.values) == list(f.values)


def test_function_parse_errors():
    with pytest.raises(ParseError, match="expected 9 values"):
        parse_function("3 2\n1\n2\n")
    with pytest.raises(ParseError, match="malformed"):
        parse_function("2 1\n1\nabc\n")


def test_hypergraph_round_trip(tmp_path):
    for h in (complete_bipartite(2, 3), octahedron()):
        path = tmp_path / "h.txt"
        save_hypergraph(h, path)
        assert parse_hypergraph(path.read_text()) == h
    assert format_hypergraph(complete_bipartite(1, 2)) == "3 2\n1 2\n1 3\n"


@pytest.mark.parametrize(
    "text,message",
    [
        ("3 2\n", "edge list non-empty required"),
        ("3 2\n1 4\n", "out of range"),
        ("3 2\n1 2 3\n", "edge must list 2"),
        ("3 2\n1 2\n2 1\n", "duplicate"),
    ],
)
def test_hypergraph_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_hypergraph(text)
