"""Sparse spanning subgraph sampler: every vertex picks one incident edge uniformly."""

import logging
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, List, Optional

from chromasum.core.graph import Edge, Graph, canonical_edge
from chromasum.core.models import LemmaCheckReport, LemmaFailure
from chromasum.core.params import ScaleProfile
from chromasum.errors import BudgetExhausted, IsolatedVertex
from chromasum.util.rng import SeedLike, as_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SparseSubgraph:
    """Spanning subgraph F' of a host graph, on the host's vertex ids."""

    host: Graph
    edges: FrozenSet[Edge]

    def degree(self, v: int) -> int:
        return sum(1 for u in self.host.neighbors(v) if canonical_edge(u, v) in self.edges)

    def complement(self) -> List[Edge]:
        """Host edges not in F', in canonical order."""
        return [e for e in self.host.edges if e not in self.edges]

    def as_graph(self) -> Graph:
        return self.host.edge_subgraph(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def _support(host: Graph, support: Optional[Iterable[int]]) -> List[int]:
    return sorted(support) if support is not None else list(host.vertices())


def degree_bound(d_host: int, delta: int, profile: ScaleProfile) -> float:
    """max(1, ρ·d/λ3(Δ)): the chosen edge plus at most d/λ3 picks by neighbours."""
    return max(1.0, profile.relax * d_host / profile.lambda3(delta))


def draw_sparse_subgraph(host: Graph, seed: SeedLike, support: Optional[Iterable[int]] = None) -> SparseSubgraph:
    """One raw draw: each support vertex picks one of its incident host edges.

    Raises:
        IsolatedVertex: if a support vertex has no incident edge.
    """
    rng = as_generator(seed)
    vertices = _support(host, support)
    degrees = [host.degree(v) for v in vertices]
    for v, d in zip(vertices, degrees):
        if d == 0:
            raise IsolatedVertex(f"Vertex {v} has no incident edge to choose")
    if not vertices:
        return SparseSubgraph(host, frozenset())

    picks = rng.integers(0, degrees)
    chosen = {canonical_edge(v, host.neighbors(v)[int(i)]) for v, i in zip(vertices, picks)}
    return SparseSubgraph(host, frozenset(chosen))


def check_sparse_subgraph(
    sub: SparseSubgraph,
    delta: int,
    profile: ScaleProfile,
    support: Optional[Iterable[int]] = None,
) -> LemmaCheckReport:
    failures = []
    for v in _support(sub.host, support):
        bound = degree_bound(sub.host.degree(v), delta, profile)
        observed = sub.degree(v)
        if observed > bound:
            failures.append(LemmaFailure(vertex=v, tag="sparse", observed=observed, bound=bound))
    return LemmaCheckReport(lemma="sparse", failures=failures)


@dataclass
class SparseSample:
    subgraph: SparseSubgraph
    report: LemmaCheckReport
    iterations: int


def sample_sparse_subgraph(
    g_prime: Graph,
    delta_max: int,
    profile: ScaleProfile,
    seed: SeedLike,
    budget: int,
    strict: bool = False,
    support: Optional[Iterable[int]] = None,
    extra_check: Optional[Callable[[SparseSubgraph], List[LemmaFailure]]] = None,
) -> SparseSample:
    """Redraw until every support vertex meets the degree bound (and ``extra_check`` is empty).

    Raises:
        BudgetExhausted: strict mode only, after exactly ``budget`` draws.
        IsolatedVertex: if a support vertex has no incident edge.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = as_generator(seed)
    vertices = _support(g_prime, support)

    best: Optional[SparseSample] = None
    for iteration in range(1, budget + 1):
        sub = draw_sparse_subgraph(g_prime, rng, vertices)
        report = check_sparse_subgraph(sub, delta_max, profile, vertices)
        if extra_check is not None:
            report.failures.extend(extra_check(sub))
        report.iterations = iteration
        if report.passed:
            logger.debug(f"Sparse subgraph with {len(sub)} edges accepted after {iteration} draws")
            return SparseSample(sub, report, iteration)
        if best is None or report.severity() < best.report.severity():
            best = SparseSample(sub, report, iteration)

    if strict:
        raise BudgetExhausted(f"No sparse subgraph passed in {budget} draws")
    logger.warning(f"Sparse budget {budget} exhausted; keeping draw with {len(best.report.failures)} failures")
    best.iterations = budget
    best.report.iterations = budget
    return best
