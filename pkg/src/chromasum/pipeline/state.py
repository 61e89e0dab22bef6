"""Mutable working state of one pipeline run."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from chromasum.core.coloring import EdgeColoring, SumProfile, weighted_degrees
from chromasum.core.graph import Edge, Graph, NeighborhoodCache, canonical_edge
from chromasum.core.params import PlanParams, SumPair, pair_of
from chromasum.errors import InvariantViolation
from chromasum.lemmas.ordering import BAND_A, BAND_B, BAND_C, OrderingPartition

logger = logging.getLogger(__name__)


class Stage(str, Enum):
    INIT = "init"
    A_PROCESSED = "A"
    B_PROCESSED = "B"
    EPP_DONE = "epp"
    LISTS_ASSIGNED = "lists"
    RECOLORED = "recolor"
    B_LOWERED = "lower_B"
    DONE = "finalize_C"

    @property
    def rank(self) -> int:
        return list(Stage).index(self)

    def reached(self, other: "Stage") -> bool:
        return self.rank >= other.rank


@dataclass
class PipelineState:
    """Coloring, incrementally maintained sums, the pinned pairs S_v and stage bookkeeping."""

    graph: Graph
    params: PlanParams
    partition: OrderingPartition
    cache: NeighborhoodCache
    coloring: EdgeColoring
    sums: SumProfile
    s_pairs: List[Optional[SumPair]]
    anchor_edge: Dict[int, Edge]
    stage: Stage = Stage.INIT
    processed: List[int] = field(default_factory=list)
    e_prime: FrozenSet[Edge] = frozenset()
    e_dprime: Tuple[Edge, ...] = ()
    lists: Dict[Edge, int] = field(default_factory=dict)
    finalized: Set[int] = field(default_factory=set)

    # Edge mutation
    def color(self, u: int, v: int) -> int:
        return self.coloring[(u, v)]

    def set_color(self, edge: Edge, color: int) -> None:
        """Recolor one edge, keep sums current and enforce the color window."""
        edge = canonical_edge(*edge)
        low, high = self.params.color_window
        if not low <= color <= high:
            raise InvariantViolation(f"Color {color} for {edge} leaves the window [{low}, {high}]", stage=self.stage.value)
        delta = color - self.coloring[edge]
        self.coloring[edge] = color
        self.sums[edge[0]] += delta
        self.sums[edge[1]] += delta

    def add_to_color(self, edge: Edge, amount: int) -> None:
        self.set_color(edge, self.coloring[edge] + amount)

    # Queries
    def band(self, v: int) -> int:
        return self.partition.band[v]

    def is_processed(self, v: int) -> bool:
        return self.s_pairs[v] is not None

    def pin(self, v: int) -> SumPair:
        """Fix S_v to the pair containing the current sum."""
        pair = pair_of(self.sums[v], self.params.Q)
        self.s_pairs[v] = pair
        self.processed.append(v)
        return pair

    def at_low(self, v: int) -> bool:
        return self.sums[v] == self.s_pairs[v].low

    def neighbors_in(self, v: int, band: int) -> List[int]:
        """Neighbours in one band, in processing order."""
        position = self.partition.position
        return sorted((u for u in self.graph.neighbors(v) if self.partition.band[u] == band), key=position.__getitem__)

    def c_edges(self) -> List[Edge]:
        """Edges with both ends in C."""
        band = self.partition.band
        return [e for e in self.graph.edges if band[e[0]] == BAND_C and band[e[1]] == BAND_C]

    def recomputed_sums(self) -> SumProfile:
        return weighted_degrees(self.graph, self.coloring)

    def copy(self) -> "PipelineState":
        """Checkpoint for local retries (graph, params, partition and cache are shared)."""
        return PipelineState(
            graph=self.graph,
            params=self.params,
            partition=self.partition,
            cache=self.cache,
            coloring=self.coloring.copy(),
            sums=self.sums.copy(),
            s_pairs=list(self.s_pairs),
            anchor_edge=dict(self.anchor_edge),
            stage=self.stage,
            processed=list(self.processed),
            e_prime=self.e_prime,
            e_dprime=self.e_dprime,
            lists=dict(self.lists),
            finalized=set(self.finalized),
        )

    def counts(self) -> Dict[str, int]:
        part = self.partition
        return {
            "A": sum(1 for v in self.processed if part.band[v] == BAND_A),
            "B": sum(1 for v in self.processed if part.band[v] == BAND_B),
            "C_final": len(self.finalized),
            "E_prime": len(self.e_prime),
            "E_dprime": len(self.e_dprime),
        }
