import pytest

from chromasum.core.generate import complete
from chromasum.core.io import normalize_format, parse_graph, parse_graph_catalog, read_graph_file, serialize_graph
from chromasum.errors import DuplicateEdge, LoopEdge, ParseError


def test_edgelist(p3):
    assert parse_graph("3 2\n0 1\n1 2\n") == p3
    assert parse_graph(b"# a path\n3 2\n\n0 1  # first\n2 1\n") == p3


def test_graph6_star():
    g = parse_graph("D?{", "graph6")
    assert g.n == 5
    assert set(g.edges) == {(0, 4), (1, 4), (2, 4), (3, 4)}
    assert parse_graph(">>graph6<<D?{", "g6") == g


def test_graph6_catalog():
    graphs = list(parse_graph_catalog("D?{\n\nBw\n"))
    assert len(graphs) == 2
    assert graphs[1] == complete(3)


def test_graph6_rejects_bytes_outside_range():
    with pytest.raises(ParseError) as info:
        parse_graph(b"D\x7f{", "graph6")
    assert info.value.position == 1


def test_graph6_single_record_expected():
    with pytest.raises(ParseError):
        parse_graph("D?{\nBw\n", "graph6")


@pytest.mark.parametrize(
    "text, error, line",
    [
        ("2 1\n0 0\n", LoopEdge, 2),
        ("3 2\n0 1\n1 0\n", DuplicateEdge, 3),
        ("3 1\n0 3\n", ParseError, 2),
        ("3 2\n0 1\n", ParseError, 1),
        ("3 1\n0 x\n", ParseError, 2),
        ("3 1\n0 1 2\n", ParseError, 2),
    ],
)
def test_edgelist_errors(text, error, line):
    with pytest.raises(error) as info:
        parse_graph(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_empty_edgelist():
    with pytest.raises(ParseError):
        parse_graph("   \n# nothing\n")


def test_serialize(petersen_graph, c5):
    assert serialize_graph(c5) == "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n"
    assert parse_graph(serialize_graph(petersen_graph, "graph6"), "graph6") == petersen_graph
    assert parse_graph(serialize_graph(petersen_graph)) == petersen_graph


def test_format_names():
    assert normalize_format("G6") == "graph6"
    assert normalize_format("edge-list") == "edgelist"
    with pytest.raises(ValueError):
        normalize_format("dot")


def test_read_graph_file_guesses_format(tmp_path, petersen_graph):
    g6 = tmp_path / "petersen.g6"
    g6.write_text(serialize_graph(petersen_graph, "graph6"))
    assert read_graph_file(g6) == petersen_graph

    listed = tmp_path / "petersen.txt"
    listed.write_text(serialize_graph(petersen_graph))
    assert read_graph_file(listed) == petersen_graph
