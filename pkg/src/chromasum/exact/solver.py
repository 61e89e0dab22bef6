"""Exact r-distant sum-distinguishing index by iterative deepening and backtracking."""

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Optional

from chromasum.core.coloring import EdgeColoring, greedy_distinguishing_color
from chromasum.core.graph import Edge, Graph, NeighborhoodCache
from chromasum.errors import IsolatedEdge

logger = logging.getLogger(__name__)

_CLOCK_STRIDE = 1024


@dataclass
class ExactResult:
    """Least k with a witness, or the best known upper bound when the search timed out."""

    k: int
    witness: EdgeColoring
    nodes_explored: int = 0
    timed_out: bool = False


class _Timeout(Exception):
    pass


class _Search:
    """Depth-first search over proper k-colorings with sum-conflict pruning.

    A vertex is closed once all its edges are colored; its sum is then compared with every
    closed r-neighbour. Open vertices are pruned when too few free colors remain, and when
    the free colors are exactly enough their forced sum is checked as if closed.
    """

    def __init__(self, g: Graph, cache: NeighborhoodCache, deadline: Optional[float]):
        self.g = g
        self.cache = cache
        self.deadline = deadline
        self.order: List[Edge] = sorted(g.edges, key=lambda e: (-(g.degree(e[0]) + g.degree(e[1])), e))
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % _CLOCK_STRIDE == 0 and time.monotonic() > self.deadline:
            raise _Timeout()

    def solve(self, k: int) -> Optional[Dict[Edge, int]]:
        g = self.g
        self.k = k
        self.colors: Dict[Edge, int] = {}
        self.used = [set() for _ in g.vertices()]
        self.partial = [0] * g.n
        self.remaining = g.degrees()
        self.closed = [g.degree(v) == 0 for v in g.vertices()]
        if any(d > k for d in self.remaining):
            return None
        return dict(self.colors) if self._dfs(0) else None

    def _clashes(self, w: int, total: int) -> bool:
        return any(self.closed[x] and self.partial[x] == total for x in self.cache.members(w))

    def _open_ok(self, w: int) -> bool:
        free = [c for c in range(1, self.k + 1) if c not in self.used[w]]
        need = self.remaining[w]
        if len(free) < need:
            return False
        if len(free) == need:
            return not self._clashes(w, self.partial[w] + sum(free))
        return True

    def _dfs(self, index: int) -> bool:
        if index == len(self.order):
            return True
        self._tick()
        u, v = edge = self.order[index]
        for color in range(1, self.k + 1):
            if color in self.used[u] or color in self.used[v]:
                continue
            self.colors[edge] = color
            closing = []
            for w in edge:
                self.used[w].add(color)
                self.partial[w] += color
                self.remaining[w] -= 1

            feasible = True
            for w in edge:
                if self.remaining[w] == 0:
                    if self._clashes(w, self.partial[w]):
                        feasible = False
                        break
                    self.closed[w] = True
                    closing.append(w)
            if feasible:
                feasible = all(self.remaining[w] == 0 or self._open_ok(w) for w in edge)
            if feasible and self._dfs(index + 1):
                return True

            for w in closing:
                self.closed[w] = False
            for w in edge:
                self.used[w].discard(color)
                self.partial[w] -= color
                self.remaining[w] += 1
            del self.colors[edge]
        return False


def exact_index(
    g: Graph,
    r: int,
    time_budget: Optional[float] = None,
    cache: Optional[NeighborhoodCache] = None,
) -> ExactResult:
    """Least k admitting a proper, r-distant sum-distinguishing coloring with colors 1..k.

    Deepens from k = Δ up to the greedy coloring's maximum color, which bounds the answer.
    On timeout the greedy coloring is returned with ``timed_out=True``.

    Raises:
        IsolatedEdge: if some component is a single edge.
    """
    if g.has_isolated_edge():
        raise IsolatedEdge("Graphs with an isolated edge have no sum-distinguishing coloring")
    if g.m == 0:
        return ExactResult(k=0, witness=EdgeColoring(g, {}))
    if cache is None or cache.graph is not g or cache.r != r:
        cache = NeighborhoodCache(g, r)

    upper = greedy_distinguishing_color(g, r, cache)
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    search = _Search(g, cache, deadline)

    for k in range(g.max_degree, upper.max_color):
        try:
            found = search.solve(k)
        except _Timeout:
            logger.warning(f"Exact search timed out at k={k} after {search.nodes} nodes; reporting upper bound {upper.max_color}")
            return ExactResult(k=upper.max_color, witness=upper, nodes_explored=search.nodes, timed_out=True)
        logger.debug(f"k={k}: {'feasible' if found else 'infeasible'} ({search.nodes} nodes so far)")
        if found is not None:
            return ExactResult(k=k, witness=EdgeColoring(g, found), nodes_explored=search.nodes)

    return ExactResult(k=upper.max_color, witness=upper, nodes_explored=search.nodes)


def naive_index(g: Graph, r: int, max_edges: int = 8) -> ExactResult:
    """Reference enumerator: every coloring in {1..k}^E for k = 1, 2, ... without pruning.

    Raises:
        ValueError: if the graph has more than ``max_edges`` edges.
        IsolatedEdge: if some component is a single edge.
    """
    if g.m > max_edges:
        raise ValueError(f"naive_index is limited to {max_edges} edges, got {g.m}")
    if g.has_isolated_edge():
        raise IsolatedEdge("Graphs with an isolated edge have no sum-distinguishing coloring")
    if g.m == 0:
        return ExactResult(k=0, witness=EdgeColoring(g, {}))

    edges = g.edges
    incident = [[i for i, e in enumerate(edges) if v in e] for v in g.vertices()]
    pairs = list(NeighborhoodCache(g, r).pairs())
    explored = 0

    for k in itertools.count(1):
        for colors in itertools.product(range(1, k + 1), repeat=len(edges)):
            explored += 1
            if any(len({colors[i] for i in at}) < len(at) for at in incident):
                continue
            sums = [sum(colors[i] for i in at) for at in incident]
            if all(sums[u] != sums[v] for u, v in pairs):
                return ExactResult(k=k, witness=EdgeColoring.from_list(g, colors), nodes_explored=explored)
