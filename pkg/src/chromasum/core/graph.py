"""Immutable simple graphs and r-neighbourhood queries."""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from chromasum.errors import DuplicateEdge, LoopEdge, ParseError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    """Return the edge as a (min, max) pair."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on the dense vertex set 0..n-1.

    Edges are stored canonically as (min, max) pairs in sorted order, which gives stable keys
    for colorings and golden files. A frozen networkx view is built lazily for BFS queries.
    """

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]]):
        if n < 0:
            raise ValueError(f"Vertex count must be non-negative, got {n}")

        seen = set()
        adjacency: List[List[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise LoopEdge(f"Loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"Edge ({u}, {v}) outside vertex range 0..{n - 1}")
            edge = canonical_edge(u, v)
            if edge in seen:
                raise DuplicateEdge(f"Duplicate edge {edge}")
            seen.add(edge)
            adjacency[u].append(v)
            adjacency[v].append(u)

        self._n = n
        self._edges: Tuple[Edge, ...] = tuple(sorted(seen))
        self._adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adjacency)
        self._edge_index: Dict[Edge, int] = {e: i for i, e in enumerate(self._edges)}
        self._nx: Optional[nx.Graph] = None

    # Basic access
    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adjacency

    def vertices(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def degrees(self) -> List[int]:
        return [len(a) for a in self._adjacency]

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adjacency), default=0)

    @property
    def min_degree(self) -> int:
        return min((len(a) for a in self._adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self._edge_index

    def edge_index(self, edge: Edge) -> int:
        return self._edge_index[canonical_edge(*edge)]

    def incident_edges(self, v: int) -> List[Edge]:
        return [canonical_edge(v, u) for u in self._adjacency[v]]

    # Derived graphs
    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph keeping every vertex id but only edges with both ends in ``vertices``."""
        keep = set(vertices)
        return Graph(self._n, [(u, v) for u, v in self._edges if u in keep and v in keep])

    def edge_subgraph(self, edges: Iterable[Edge]) -> "Graph":
        """Spanning subgraph on the same vertex ids with the given edges."""
        return Graph(self._n, edges)

    def has_isolated_edge(self) -> bool:
        """True if some component is a single edge."""
        return any(self.degree(u) == 1 and self.degree(v) == 1 for u, v in self._edges)

    # networkx interop
    def to_networkx(self) -> nx.Graph:
        """Frozen networkx view (shared, do not mutate)."""
        if self._nx is None:
            graph = nx.Graph()
            graph.add_nodes_from(range(self._n))
            graph.add_edges_from(self._edges)
            self._nx = nx.freeze(graph)
        return self._nx

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """Build from any simple networkx graph, relabelling nodes to 0..n-1 in iteration order."""
        if graph.is_directed() or graph.is_multigraph():
            raise ParseError("Only simple undirected graphs are supported")
        relabelled = nx.convert_node_labels_to_integers(graph, ordering="default")
        return cls(relabelled.number_of_nodes(), relabelled.edges())

    # Value semantics
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m}, Δ={self.max_degree})"


@dataclass(frozen=True)
class RNeighborhood:
    """Vertices u with 1 <= d(u, source) <= radius."""

    source: int
    radius: int
    members: FrozenSet[int]

    def __contains__(self, u: object) -> bool:
        return u in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


def r_neighbors(g: Graph, v: int, r: int) -> RNeighborhood:
    """Truncated BFS from ``v`` up to depth ``r``."""
    if r < 1:
        raise ValueError(f"Radius must be positive, got {r}")
    if not 0 <= v < g.n:
        raise ValueError(f"Vertex {v} not in graph with {g.n} vertices")

    lengths = nx.single_source_shortest_path_length(g.to_networkx(), v, cutoff=r)
    members = frozenset(u for u, dist in lengths.items() if dist >= 1)
    return RNeighborhood(source=v, radius=r, members=members)


class NeighborhoodCache:
    """Memoized r-neighbourhoods of one graph.

    Memory is only spent for vertices actually queried; ``precompute`` fills everything up
    front for the pipeline, which asks for the same neighbourhoods repeatedly.
    """

    def __init__(self, g: Graph, r: int):
        if r < 1:
            raise ValueError(f"Radius must be positive, got {r}")
        self.graph = g
        self.r = r
        self._members: Dict[int, FrozenSet[int]] = {}

    def members(self, v: int) -> FrozenSet[int]:
        cached = self._members.get(v)
        if cached is None:
            cached = r_neighbors(self.graph, v, self.r).members
            self._members[v] = cached
        return cached

    def neighborhood(self, v: int) -> RNeighborhood:
        return RNeighborhood(source=v, radius=self.r, members=self.members(v))

    def precompute(self) -> "NeighborhoodCache":
        for v in self.graph.vertices():
            self.members(v)
        logger.debug(f"Precomputed {self.r}-neighbourhoods for {self.graph.n} vertices")
        return self

    def pairs(self) -> Iterator[Tuple[int, int]]:
        """Every r-neighbour pair once, as (u, v) with u < v."""
        for u in self.graph.vertices():
            for v in sorted(self.members(u)):
                if u < v:
                    yield u, v
