"""Graph and coloring text formats: graph6 and the plain ``n m`` edge list."""

import logging
from pathlib import Path
from typing import Iterator, List, Optional, Union

import networkx as nx

from chromasum.core.graph import Graph, canonical_edge
from chromasum.errors import DuplicateEdge, LoopEdge, ParseError

logger = logging.getLogger(__name__)

GRAPH6_HEADER = b">>graph6<<"

# Accepted spellings -> canonical format name
_FORMAT_ALIASES = {
    "graph6": "graph6",
    "g6": "graph6",
    "edgelist": "edgelist",
    "edge-list": "edgelist",
    "el": "edgelist",
}


def normalize_format(fmt: str) -> str:
    """Map a user-supplied format name to ``graph6`` or ``edgelist``."""
    try:
        return _FORMAT_ALIASES[fmt.lower()]
    except KeyError:
        raise ValueError(f"Unknown graph format '{fmt}' (expected graph6 or edgelist)") from None


def format_from_path(path: Union[str, Path], default: str = "edgelist") -> str:
    """Guess the format from a file suffix (.g6 / .graph6 -> graph6)."""
    suffix = Path(path).suffix.lower().lstrip(".")
    return _FORMAT_ALIASES.get(suffix, default)


def _as_bytes(data: Union[bytes, str]) -> bytes:
    return data.encode("ascii") if isinstance(data, str) else data


# graph6
def _parse_graph6_line(line: bytes, offset: int = 0, line_no: Optional[int] = None) -> Graph:
    body = line
    if body.startswith(GRAPH6_HEADER):
        body = body[len(GRAPH6_HEADER) :]
        offset += len(GRAPH6_HEADER)
    if not body:
        raise ParseError("Empty graph6 record", line=line_no, position=offset)

    for i, byte in enumerate(body):
        if not 63 <= byte <= 126:
            raise ParseError(f"Byte {byte!r} outside graph6 range 63..126", line=line_no, position=offset + i)

    try:
        graph = nx.from_graph6_bytes(body)
    except (nx.NetworkXError, ValueError, IndexError) as e:
        raise ParseError(f"Invalid graph6 record: {e}", line=line_no, position=offset) from e
    return Graph.from_networkx(graph)


def parse_graph_catalog(data: Union[bytes, str]) -> Iterator[Graph]:
    """Yield every graph of a newline-separated graph6 catalog."""
    offset = 0
    for line_no, raw in enumerate(_as_bytes(data).split(b"\n"), start=1):
        line = raw.strip()
        if line:
            yield _parse_graph6_line(line, offset=offset, line_no=line_no)
        offset += len(raw) + 1


# edge list
def _parse_edgelist(text: str) -> Graph:
    rows: List[tuple] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"Expected two integers, got '{line}'", line=line_no)
        try:
            rows.append((line_no, int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"Non-integer token in '{line}'", line=line_no) from None

    if not rows:
        raise ParseError("Missing 'n m' header line", line=1)

    _, n, m = rows[0]
    if n < 0 or m < 0:
        raise ParseError(f"Header values must be non-negative, got n={n} m={m}", line=rows[0][0])
    edge_rows = rows[1:]
    if len(edge_rows) != m:
        raise ParseError(f"Header announces {m} edges but {len(edge_rows)} were given", line=rows[0][0])

    edges = []
    seen = set()
    for line_no, u, v in edge_rows:
        if u == v:
            raise LoopEdge(f"Loop at vertex {u}", line=line_no)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"Edge ({u}, {v}) outside vertex range 0..{n - 1}", line=line_no)
        edge = canonical_edge(u, v)
        if edge in seen:
            raise DuplicateEdge(f"Duplicate edge {edge}", line=line_no)
        seen.add(edge)
        edges.append(edge)
    return Graph(n, edges)


def parse_graph(data: Union[bytes, str], fmt: str = "edgelist") -> Graph:
    """Parse a single graph in the declared format.

    Args:
        data: Raw input (bytes or text).
        fmt: ``graph6`` or ``edgelist`` (aliases accepted).

    Returns:
        The parsed Graph.

    Raises:
        ParseError, DuplicateEdge, LoopEdge: on malformed input.
    """
    fmt = normalize_format(fmt)
    if fmt == "graph6":
        graphs = list(parse_graph_catalog(data))
        if len(graphs) != 1:
            raise ParseError(f"Expected exactly one graph6 record, found {len(graphs)}")
        return graphs[0]

    try:
        text = data.decode("ascii") if isinstance(data, bytes) else data
    except UnicodeDecodeError as e:
        raise ParseError("Edge list must be ASCII", position=e.start) from e
    return _parse_edgelist(text)


def serialize_graph(g: Graph, fmt: str = "edgelist") -> str:
    """Serialize to graph6 (no header) or the ``n m`` edge list."""
    fmt = normalize_format(fmt)
    if fmt == "graph6":
        return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii")

    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph_file(path: Union[str, Path], fmt: Optional[str] = None) -> Graph:
    """Read a graph file, guessing the format from the suffix when not given."""
    path = Path(path)
    fmt = fmt or format_from_path(path)
    logger.debug(f"Reading {fmt} graph from {path}")
    return parse_graph(path.read_bytes(), fmt)
