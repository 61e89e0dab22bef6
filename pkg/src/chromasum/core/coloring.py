"""Edge colorings, weighted degrees and the greedy distinguishing coloring."""

import logging
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from chromasum.core.graph import Edge, Graph, NeighborhoodCache, canonical_edge
from chromasum.errors import ArithmeticOverflow, IsolatedEdge, NonPositiveColor, ParseError

logger = logging.getLogger(__name__)

_INT64_MAX = np.iinfo(np.int64).max


class EdgeColoring:
    """Total map from the edges of one graph to positive integer colors.

    The mapping is mutable so the pipeline can edit a working copy in place; use ``copy``
    to take a snapshot.
    """

    def __init__(self, graph: Graph, colors: Mapping[Edge, int]):
        self.graph = graph
        self._colors: Dict[Edge, int] = {}
        for edge, color in colors.items():
            self[edge] = color

        missing = [e for e in graph.edges if e not in self._colors]
        if missing:
            raise ValueError(f"Coloring is not total: {len(missing)} edges uncolored, first {missing[0]}")
        if len(self._colors) != graph.m:
            extra = next(e for e in self._colors if not graph.has_edge(*e))
            raise ValueError(f"Colored pair {extra} is not an edge of the graph")

    @classmethod
    def from_list(cls, graph: Graph, colors: Iterable[int]) -> "EdgeColoring":
        """Colors given in canonical edge order."""
        colors = list(colors)
        if len(colors) != graph.m:
            raise ValueError(f"Expected {graph.m} colors, got {len(colors)}")
        return cls(graph, dict(zip(graph.edges, colors)))

    def __getitem__(self, edge: Edge) -> int:
        return self._colors[canonical_edge(*edge)]

    def __setitem__(self, edge: Edge, color: int) -> None:
        color = int(color)
        if color < 1:
            raise NonPositiveColor(f"Color {color} on edge {edge} is not positive")
        self._colors[canonical_edge(*edge)] = color

    def __len__(self) -> int:
        return len(self._colors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return self.graph == other.graph and self._colors == other._colors

    def items(self) -> Iterator[Tuple[Edge, int]]:
        """(edge, color) pairs in canonical edge order."""
        for edge in self.graph.edges:
            yield edge, self._colors[edge]

    def as_list(self) -> List[int]:
        return [self._colors[e] for e in self.graph.edges]

    def as_dict(self) -> Dict[Edge, int]:
        return dict(self._colors)

    def copy(self) -> "EdgeColoring":
        return EdgeColoring(self.graph, self._colors)

    @property
    def max_color(self) -> int:
        return max(self._colors.values(), default=0)

    @property
    def min_color(self) -> int:
        return min(self._colors.values(), default=0)

    def palette(self) -> List[int]:
        return sorted(set(self._colors.values()))

    def __repr__(self) -> str:
        return f"EdgeColoring(m={len(self)}, colors={self.min_color}..{self.max_color})"


class SumProfile:
    """Per-vertex weighted degrees d_c(v)."""

    def __init__(self, sums: Iterable[int]):
        self.sums: List[int] = [int(s) for s in sums]

    def __getitem__(self, v: int) -> int:
        return self.sums[v]

    def __setitem__(self, v: int, value: int) -> None:
        self.sums[v] = int(value)

    def __len__(self) -> int:
        return len(self.sums)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sums)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SumProfile):
            return self.sums == other.sums
        if isinstance(other, (list, tuple)):
            return self.sums == list(other)
        return NotImplemented

    def copy(self) -> "SumProfile":
        return SumProfile(self.sums)

    def __repr__(self) -> str:
        return f"SumProfile({self.sums})"


def weighted_degrees(g: Graph, c: EdgeColoring) -> SumProfile:
    """Sum of incident colors at every vertex, in checked int64 arithmetic.

    Raises:
        ArithmeticOverflow: if a sum could leave the signed 64-bit range.
    """
    if g.m == 0:
        return SumProfile([0] * g.n)

    if c.max_color > _INT64_MAX // max(1, g.max_degree):
        raise ArithmeticOverflow(f"Sums up to {g.max_degree} * {c.max_color} exceed int64")

    ends = np.asarray(g.edges, dtype=np.int64)
    colors = np.asarray(c.as_list(), dtype=np.int64)
    sums = np.zeros(g.n, dtype=np.int64)
    np.add.at(sums, ends[:, 0], colors)
    np.add.at(sums, ends[:, 1], colors)
    return SumProfile(sums.tolist())


def shift(c: EdgeColoring, offset: int) -> EdgeColoring:
    """Add ``offset`` to every color.

    Raises:
        NonPositiveColor: if the smallest shifted color would drop below 1.
    """
    if len(c) and c.min_color + offset < 1:
        raise NonPositiveColor(f"Shifting min color {c.min_color} by {offset} leaves the positive range")
    return EdgeColoring(c.graph, {e: color + offset for e, color in c.items()})


# "u v color" text format
def write_coloring(c: EdgeColoring) -> str:
    return "".join(f"{u} {v} {color}\n" for (u, v), color in c.items())


def read_coloring(g: Graph, text: str) -> EdgeColoring:
    """Parse one "u v color" line per edge (comments after '#')."""
    colors: Dict[Edge, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"Expected 'u v color', got '{line}'", line=line_no)
        try:
            u, v, color = (int(p) for p in parts)
        except ValueError:
            raise ParseError(f"Non-integer token in '{line}'", line=line_no) from None
        if not g.has_edge(u, v):
            raise ParseError(f"({u}, {v}) is not an edge of the graph", line=line_no)
        edge = canonical_edge(u, v)
        if edge in colors:
            raise ParseError(f"Edge {edge} colored twice", line=line_no)
        if color < 1:
            raise ParseError(f"Color {color} is not positive", line=line_no)
        colors[edge] = color

    if len(colors) != g.m:
        raise ParseError(f"Coloring covers {len(colors)} of {g.m} edges")
    return EdgeColoring(g, colors)


# Greedy r-distant sum-distinguishing coloring
def greedy_distinguishing_color(g: Graph, r: int, cache: Optional[NeighborhoodCache] = None) -> EdgeColoring:
    """Always-succeeding greedy coloring: proper and r-distant sum-distinguishing.

    Edges are colored in canonical order with the smallest color that keeps the coloring
    proper and, for every endpoint that becomes closed, gives it a sum unused by its closed
    r-neighbours. When an edge closes both endpoints with equal partial sums, another edge
    at one endpoint is bumped first.

    Raises:
        IsolatedEdge: the two ends of an isolated edge always have equal sums.
    """
    if g.has_isolated_edge():
        raise IsolatedEdge("A graph with an isolated edge has no sum-distinguishing coloring")
    cache = cache or NeighborhoodCache(g, r)

    colors: Dict[Edge, int] = {}
    used_at: List[Dict[int, Edge]] = [{} for _ in g.vertices()]
    partial = [0] * g.n
    remaining = g.degrees()
    closed = [False] * g.n

    def closed_sums(v: int) -> set:
        return {partial[u] for u in cache.members(v) if closed[u]}

    def smallest_color(edge: Edge, start: int, closing: Tuple[int, ...]) -> int:
        u, v = edge
        forbidden = {w: closed_sums(w) for w in closing}
        color = start
        while True:
            taken_u = used_at[u].get(color)
            taken_v = used_at[v].get(color)
            proper = taken_u in (None, edge) and taken_v in (None, edge)
            if proper and all(partial[w] - colors.get(edge, 0) + color not in forbidden[w] for w in closing):
                return color
            color += 1

    def assign(edge: Edge, color: int) -> None:
        u, v = edge
        old = colors.get(edge)
        if old is not None:
            del used_at[u][old]
            del used_at[v][old]
            partial[u] -= old
            partial[v] -= old
        colors[edge] = color
        used_at[u][color] = edge
        used_at[v][color] = edge
        partial[u] += color
        partial[v] += color

    for edge in g.edges:
        u, v = edge
        closing = tuple(w for w in edge if remaining[w] == 1)

        if len(closing) == 2 and partial[u] == partial[v]:
            # Both ends close together with equal sums: bump another edge at u (deg(u) >= 2 here).
            pivot = u if g.degree(u) >= 2 else v
            other = next(e for e in (canonical_edge(pivot, w) for w in g.neighbors(pivot)) if e != edge)
            far = other[0] if other[1] == pivot else other[1]
            far_closing = (far,) if closed[far] else ()
            assign(other, smallest_color(other, colors[other] + 1, far_closing))
            logger.debug(f"Bumped {other} to {colors[other]} to separate {u} and {v}")

        assign(edge, smallest_color(edge, 1, closing))
        for w in edge:
            remaining[w] -= 1
        for w in closing:
            closed[w] = True

    return EdgeColoring(g, colors)
