import io
import itertools
from types import SimpleNamespace

import pytest

from chromasum.core.coloring import weighted_degrees
from chromasum.core.generate import atlas_catalog, path
from chromasum.core.graph import Graph
from chromasum.core.params import theorem2_bound
from chromasum.core.verify import verify
from chromasum.errors import IsolatedEdge
from chromasum.exact import solver
from chromasum.exact.scan import SCAN_COLUMNS, conjecture_scan, write_scan_csv
from chromasum.exact.solver import exact_index, naive_index


def test_triangle(k3):
    result = exact_index(k3, 1)
    assert result.k == 3
    assert not result.timed_out
    assert sorted(weighted_degrees(k3, result.witness)) == [3, 4, 5]


def test_path(p3):
    result = exact_index(p3, 2)
    assert result.k == 2
    assert verify(p3, result.witness, 2).valid


def test_no_edges_and_isolated_edges():
    assert exact_index(Graph(3, []), 2).k == 0
    with pytest.raises(IsolatedEdge):
        exact_index(Graph(2, [(0, 1)]), 1)
    with pytest.raises(IsolatedEdge):
        naive_index(Graph(2, [(0, 1)]), 1)


def test_naive_edge_limit(petersen_graph):
    with pytest.raises(ValueError):
        naive_index(petersen_graph, 1)


def _small_catalog(max_vertices):
    return [g for g in atlas_catalog(max_vertices) if g.m and not g.has_isolated_edge()]


@pytest.mark.parametrize("r", [1, 2])
def test_pruned_search_matches_enumeration(r):
    for g in _small_catalog(4):
        pruned = exact_index(g, r)
        assert pruned.k == naive_index(g, r).k
        assert pruned.k >= g.max_degree
        assert pruned.witness.max_color <= pruned.k
        assert verify(g, pruned.witness, r).valid


@pytest.mark.parametrize("r", [1, 2, 3])
def test_pruned_search_matches_enumeration_on_six_vertices(r):
    compared = 0
    for g in _small_catalog(6):
        if g.m <= 8:
            assert exact_index(g, r).k == naive_index(g, r).k
            compared += 1
    assert compared >= 80


def test_index_grows_with_distance(c5):
    p6 = path(6)
    for g in (p6, c5):
        ks = [exact_index(g, r).k for r in (1, 2, 3)]
        assert ks == sorted(ks)


def test_timeout_reports_the_greedy_bound(k3, monkeypatch):
    clock = itertools.chain([0.0], itertools.repeat(1e9))
    monkeypatch.setattr(solver, "_CLOCK_STRIDE", 1)
    monkeypatch.setattr(solver, "time", SimpleNamespace(monotonic=lambda: next(clock)))
    result = exact_index(k3, 1, time_budget=1.0)
    assert result.timed_out
    assert result.k == result.witness.max_color == 3
    assert result.nodes_explored >= 1


# Catalog scans
def test_scan_small_atlas():
    report = conjecture_scan(atlas_catalog(3), 2)
    statuses = [record.status for record in report.records]
    assert statuses == ["skipped", "skipped", "exact", "exact"]
    ks = sorted(record.k for record in report.records if record.k is not None)
    assert ks == [2, 3]
    assert report.max_ratio == pytest.approx(3 / theorem2_bound(2, 2))
    assert report.count("exact") == 2


def test_scan_with_custom_bound(k4):
    report = conjecture_scan([k4], 1, bound_fn=lambda delta, r: 100.0)
    (record,) = report.records
    assert record.bound == 100.0
    assert record.ratio == pytest.approx(record.k / 100)


def test_scan_csv():
    report = conjecture_scan(atlas_catalog(3), 2)
    out = io.StringIO()
    write_scan_csv(report, out)
    lines = out.getvalue().splitlines()
    assert lines[0] == ",".join(SCAN_COLUMNS)
    assert len(lines) == 1 + len(report.records)
    # skipped graphs leave k and ratio empty
    assert lines[1].split(",")[4] == ""
    assert lines[-1].split(",")[-1] == "exact"


def test_scan_csv_to_path(tmp_path):
    target = tmp_path / "scan.csv"
    write_scan_csv(conjecture_scan(atlas_catalog(3), 1), target)
    assert target.read_text().startswith("n,m,")


@pytest.mark.slow
def test_scan_six_vertex_atlas_stays_under_the_degree_bound():
    report = conjecture_scan(_small_catalog(6), 4, bound_fn=theorem2_bound, time_budget=60.0)
    assert report.count("timeout") == 0
    exact = [record for record in report.records if record.status == "exact"]
    assert exact
    for record in exact:
        assert record.k <= record.bound == theorem2_bound(record.delta_max, 4)
    assert report.max_ratio <= 1.0
