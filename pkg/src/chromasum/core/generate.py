"""Seeded test-instance generators."""

import logging
from typing import Optional

import networkx as nx
import numpy as np

from chromasum.core.graph import Graph
from chromasum.errors import GenerationBudgetExhausted

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ("cycle", "path", "complete", "star", "petersen", "regular", "gnp")


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"A cycle needs at least 3 vertices, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError(f"A path needs at least 1 vertex, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with the centre at vertex 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen() -> Graph:
    return Graph.from_networkx(nx.petersen_graph())


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform-ish random d-regular graph (networkx pairing model with restarts)."""
    if (n * d) % 2 != 0:
        raise ValueError("n * d must be even")
    if not 0 <= d < n:
        raise ValueError("the 0 <= d < n inequality must be satisfied")
    return Graph.from_networkx(nx.random_regular_graph(d, n, seed=seed))


def gnp_min_degree(n: int, p: float, min_degree: int, seed: int, budget: int = 1000) -> Graph:
    """G(n, p) resampled until its minimum degree reaches ``min_degree``.

    Every attempt draws from its own child seed so the result only depends on ``seed``.

    Raises:
        GenerationBudgetExhausted: if no attempt within ``budget`` qualifies.
    """
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    if budget < 1:
        raise ValueError("budget must be at least 1")

    attempt_seeds = np.random.SeedSequence(seed).generate_state(budget)
    for attempt, attempt_seed in enumerate(attempt_seeds, start=1):
        g = Graph.from_networkx(nx.gnp_random_graph(n, p, seed=int(attempt_seed)))
        if g.min_degree >= min_degree:
            logger.debug(f"G({n}, {p}) reached min degree {g.min_degree} after {attempt} attempts")
            return g
    raise GenerationBudgetExhausted(f"No G({n}, {p}) sample with min degree >= {min_degree} in {budget} attempts")


def generate(
    kind: str,
    n: int,
    d: Optional[int] = None,
    p: Optional[float] = None,
    min_degree: int = 0,
    seed: int = 0,
    budget: int = 1000,
) -> Graph:
    """Dispatch on the generator name used by the CLI."""
    if kind == "cycle":
        return cycle(n)
    if kind == "path":
        return path(n)
    if kind == "complete":
        return complete(n)
    if kind == "star":
        return star(n)
    if kind == "petersen":
        return petersen()
    if kind == "regular":
        if d is None:
            raise ValueError("regular graphs need a degree d")
        return random_regular(n, d, seed)
    if kind == "gnp":
        if p is None:
            raise ValueError("gnp graphs need an edge probability p")
        return gnp_min_degree(n, p, min_degree, seed, budget)
    raise ValueError(f"Unknown generator '{kind}' (expected one of {', '.join(GENERATOR_KINDS)})")


def atlas_catalog(max_vertices: int, connected: bool = True):
    """All graphs with at most ``max_vertices`` vertices (<= 7) from the networkx atlas."""
    if max_vertices > 7:
        raise ValueError("The graph atlas only covers graphs with up to 7 vertices")
    for graph in nx.graph_atlas_g():
        if graph.number_of_nodes() == 0 or graph.number_of_nodes() > max_vertices:
            continue
        if connected and not nx.is_connected(graph):
            continue
        yield Graph.from_networkx(graph)
