from chromasum.core.coloring import EdgeColoring
from chromasum.core.graph import NeighborhoodCache
from chromasum.core.verify import verify


def test_valid_path(p3):
    report = verify(p3, EdgeColoring.from_list(p3, [1, 2]), 2)
    assert report.valid
    assert report.violating_pairs == []
    assert (report.min_color, report.max_color) == (1, 2)


def test_improper_path(p3):
    report = verify(p3, EdgeColoring.from_list(p3, [1, 1]), 2)
    assert not report.proper
    assert not report.distinguishing_r
    kinds = sorted(v.kind for v in report.violating_pairs)
    assert kinds == ["color", "sum"]
    assert report.sum_conflicts()[0].value == 1


def test_distance_matters(p4):
    c = EdgeColoring.from_list(p4, [1, 2, 1])
    # sums 1, 3, 3, 1: ends are 3 apart, middle vertices adjacent
    assert not verify(p4, c, 1).distinguishing_r
    c = EdgeColoring.from_list(p4, [2, 1, 3])
    # sums 2, 3, 4, 3: vertices 1 and 3 are at distance 2
    assert verify(p4, c, 1).valid
    assert not verify(p4, c, 2).valid


def test_modular_properness(k3):
    c = EdgeColoring(k3, {(0, 1): 1, (0, 2): 2, (1, 2): 4})
    report = verify(k3, c, 1, modulus=3)
    assert report.valid
    assert report.proper_mod == (3, False)
    assert {v.kind for v in report.violating_pairs} == {"color_mod"}
    assert verify(k3, c, 1, modulus=5).proper_mod == (5, True)


def test_summary_and_cache_reuse(petersen_graph):
    c = EdgeColoring.from_list(petersen_graph, range(1, 16))
    cache = NeighborhoodCache(petersen_graph, 2)
    report = verify(petersen_graph, c, 2, cache=cache)
    summary = report.summary()
    assert summary.proper
    assert summary.violations == len(report.violating_pairs)
    assert summary.max_color == 15
