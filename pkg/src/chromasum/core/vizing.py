"""Constructive (Δ+1)-edge-coloring by fan rotation and cd-path inversion (Misra–Gries)."""

import logging
from typing import Dict, List, Optional

from chromasum.core.coloring import EdgeColoring
from chromasum.core.graph import Edge, Graph, canonical_edge

logger = logging.getLogger(__name__)


class _PartialColoring:
    """Working state: edge colors plus, per vertex, which neighbour holds each color."""

    def __init__(self, g: Graph, palette: int):
        self.g = g
        self.palette = palette
        self.color: Dict[Edge, int] = {}
        self.at: List[Dict[int, int]] = [{} for _ in g.vertices()]

    def is_free(self, v: int, c: int) -> bool:
        return c not in self.at[v]

    def free_color(self, v: int) -> int:
        return next(c for c in range(1, self.palette + 1) if c not in self.at[v])

    def edge_color(self, u: int, v: int) -> Optional[int]:
        return self.color.get(canonical_edge(u, v))

    def set(self, u: int, v: int, c: int) -> None:
        self.color[canonical_edge(u, v)] = c
        self.at[u][c] = v
        self.at[v][c] = u

    def unset(self, u: int, v: int) -> int:
        c = self.color.pop(canonical_edge(u, v))
        del self.at[u][c]
        del self.at[v][c]
        return c

    def maximal_fan(self, u: int, v: int) -> List[int]:
        at_u = self.at[u]
        fan = [v]
        members = {v}
        while True:
            last_colors = self.at[fan[-1]]
            nxt = next((w for c, w in at_u.items() if c not in last_colors and w not in members), None)
            if nxt is None:
                return fan
            fan.append(nxt)
            members.add(nxt)

    def invert_path(self, u: int, c: int, d: int) -> None:
        """Swap c and d along the maximal c/d alternating path that leaves u on a d edge."""
        path = []
        x, cur = u, d
        while cur in self.at[x]:
            y = self.at[x][cur]
            path.append((x, y, cur))
            x, cur = y, (c if cur == d else d)
        for x, y, _ in path:
            self.unset(x, y)
        for x, y, old in path:
            self.set(x, y, c if old == d else d)

    def rotation_end(self, u: int, fan: List[int], d: int) -> int:
        """First fan vertex with d free whose prefix is still a fan after the path inversion."""
        for i, w in enumerate(fan):
            if i and not self.is_free(fan[i - 1], self.edge_color(u, w)):
                break
            if self.is_free(w, d):
                return i
        raise RuntimeError(f"No rotation point in fan of vertex {u}")

    def color_edge(self, u: int, v: int) -> None:
        fan = self.maximal_fan(u, v)
        c = self.free_color(u)
        d = self.free_color(fan[-1])
        if c != d:
            self.invert_path(u, c, d)

        end = self.rotation_end(u, fan, d)

        # rotate the fan prefix, leaving (u, fan[end]) uncolored
        for j in range(end):
            shifted = self.unset(u, fan[j + 1])
            self.set(u, fan[j], shifted)
        self.set(u, fan[end], d)


def vizing_color(g: Graph) -> EdgeColoring:
    """Proper edge coloring of a simple graph with colors in 1..Δ+1."""
    state = _PartialColoring(g, g.max_degree + 1)
    for u, v in g.edges:
        state.color_edge(u, v)
    logger.debug(f"Vizing colored {g.m} edges with {len(set(state.color.values()))} colors (Δ={g.max_degree})")
    return EdgeColoring(g, state.color)
