import time

import networkx as nx
import pytest
from hypothesis import given, settings
from strategies import graphs

from chromasum.core.generate import random_regular
from chromasum.core.graph import Graph
from chromasum.core.verify import verify
from chromasum.core.vizing import vizing_color


def _assert_vizing(g: Graph) -> None:
    c = vizing_color(g)
    assert len(c) == g.m
    assert verify(g, c, 1).proper
    assert c.max_color <= g.max_degree + 1


def _sweep_graph(seed: int) -> Graph:
    n = 20 + (seed * 37) % 481
    if seed % 2:
        return Graph.from_networkx(nx.fast_gnp_random_graph(n, 8.0 / n, seed=seed))
    d = 3 + seed % 10
    if (n * d) % 2:
        n -= 1
    return random_regular(n, d, seed=seed)


@settings(max_examples=100, deadline=None)
@given(g=graphs(max_vertices=9))
def test_vizing_is_proper_with_delta_plus_one_colors(g):
    _assert_vizing(g)


def test_vizing_named_graphs(petersen_graph, k6):
    for g in (petersen_graph, k6):
        c = vizing_color(g)
        assert verify(g, c, 1).proper
        assert g.max_degree <= len(c.palette()) <= g.max_degree + 1


def test_vizing_empty_graph():
    assert len(vizing_color(Graph(4, []))) == 0


@pytest.mark.parametrize("n", [50, 200, 500])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_vizing_seeded_random_graphs(n, seed):
    _assert_vizing(Graph.from_networkx(nx.gnp_random_graph(n, 10.0 / n, seed=seed)))
    _assert_vizing(random_regular(n, 6, seed=seed))


def test_vizing_dense_graph():
    _assert_vizing(Graph.from_networkx(nx.gnp_random_graph(120, 0.5, seed=3)))


@pytest.mark.slow
def test_vizing_thousand_graph_sweep():
    start = time.perf_counter()
    for seed in range(1000):
        _assert_vizing(_sweep_graph(seed))
    assert time.perf_counter() - start < 60.0
