import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import graphs

from chromasum.core.coloring import (
    EdgeColoring,
    greedy_distinguishing_color,
    read_coloring,
    shift,
    weighted_degrees,
    write_coloring,
)
from chromasum.core.graph import Graph
from chromasum.core.verify import verify
from chromasum.errors import ArithmeticOverflow, IsolatedEdge, NonPositiveColor, ParseError


def test_coloring_must_be_total(p3):
    with pytest.raises(ValueError):
        EdgeColoring(p3, {(0, 1): 1})
    with pytest.raises(ValueError):
        EdgeColoring(p3, {(0, 1): 1, (1, 2): 2, (0, 2): 3})
    with pytest.raises(NonPositiveColor):
        EdgeColoring.from_list(p3, [0, 1])


def test_weighted_degrees(p3):
    c = EdgeColoring.from_list(p3, [1, 2])
    assert weighted_degrees(p3, c) == [1, 3, 2]
    assert weighted_degrees(Graph(2, []), EdgeColoring(Graph(2, []), {})) == [0, 0]


def test_weighted_degrees_overflow(p3):
    c = EdgeColoring.from_list(p3, [2**62, 1])
    with pytest.raises(ArithmeticOverflow):
        weighted_degrees(p3, c)


def test_shift(p3):
    c = EdgeColoring.from_list(p3, [1, 2])
    assert shift(c, 10).as_list() == [11, 12]
    with pytest.raises(NonPositiveColor):
        shift(c, -1)


def test_coloring_text_format(petersen_graph):
    c = EdgeColoring.from_list(petersen_graph, range(1, petersen_graph.m + 1))
    assert read_coloring(petersen_graph, write_coloring(c)) == c


@pytest.mark.parametrize(
    "text, line",
    [
        ("0 1 1\n", None),
        ("0 1 1\n1 2\n", 2),
        ("0 1 1\n0 2 1\n", 2),
        ("0 1 1\n1 0 2\n", 2),
        ("0 1 0\n1 2 1\n", 1),
    ],
)
def test_read_coloring_errors(p3, text, line):
    with pytest.raises(ParseError) as info:
        read_coloring(p3, text)
    assert info.value.line == line


def test_greedy_rejects_isolated_edge():
    with pytest.raises(IsolatedEdge):
        greedy_distinguishing_color(Graph(2, [(0, 1)]), 1)


@settings(max_examples=80, deadline=None)
@given(g=graphs(max_vertices=8, allow_isolated_edges=False), r=st.integers(min_value=1, max_value=3))
def test_greedy_is_always_valid(g, r):
    c = greedy_distinguishing_color(g, r)
    assert verify(g, c, r).valid


def test_greedy_on_named_graphs(petersen_graph, k4, c6):
    for g in (petersen_graph, k4, c6):
        for r in (1, 2, 3):
            assert verify(g, greedy_distinguishing_color(g, r), r).valid
