import pytest

from chromasum.config import PipelineConfig
from chromasum.core.params import ScaleProfile
from chromasum.util.rng import child_seed
from chromasum.workers.bench import BenchRow, BenchSummary, bench_job, run_bench
from chromasum.workers.run_manager import PoolRunManager, SerialRunManager, create_run_manager

FAST = PipelineConfig(budget=1, sampler_budget=20, local_retries=0)


def collector():
    results = {}

    def callback(key, result, error):
        results[key] = (result, error)

    return results, callback


def test_serial_manager_runs_in_order():
    manager = SerialRunManager()
    order = []
    for key in range(4):
        manager.submit(key, pow, (2, key), lambda k, result, error: order.append((k, result, error)))
    manager.wait()
    assert order == [(0, 1, None), (1, 2, None), (2, 4, None), (3, 8, None)]
    status = manager.get_status()
    assert status["active_jobs"] == 0
    assert status["pending_queue"] == 0
    assert status["class_name"] == "SerialRunManager"


def test_serial_manager_reports_errors():
    manager = SerialRunManager()
    results, callback = collector()
    manager.submit(7, int, ("seven",), callback)
    manager.wait()
    result, error = results[7]
    assert result is None
    assert error.startswith("ValueError:")


def test_pool_manager_collects_every_result():
    manager = PoolRunManager(max_concurrent_workers=2)
    results, callback = collector()
    try:
        for key in range(6):
            manager.submit(key, pow, (3, key), callback)
        manager.wait()
    finally:
        manager.shutdown()
    assert results == {key: (3**key, None) for key in range(6)}


def test_manager_factory_and_limits():
    assert isinstance(create_run_manager(0), SerialRunManager)
    assert isinstance(create_run_manager(1), SerialRunManager)
    pool = create_run_manager(2)
    try:
        assert isinstance(pool, PoolRunManager)
        assert pool.get_status()["max_concurrent"] == 2
    finally:
        pool.shutdown()
    with pytest.raises(ValueError):
        PoolRunManager(max_concurrent_workers=0)


def test_set_max_concurrent_workers():
    manager = SerialRunManager()
    with pytest.raises(ValueError):
        manager.set_max_concurrent_workers(0)
    assert manager.get_status()["max_concurrent"] == 1

    pool = PoolRunManager(max_concurrent_workers=1)
    try:
        pool.set_max_concurrent_workers(3)
        assert pool.get_status()["max_concurrent"] == 3
        with pytest.raises(ValueError):
            pool.set_max_concurrent_workers(-1)
        assert pool.get_status()["max_concurrent"] == 3
    finally:
        pool.shutdown()


def test_bench_job_is_deterministic():
    args = (0, 11, "cycle", 6, None, None, 0, 2, ScaleProfile.desk().model_dump(), FAST.model_dump())
    first = bench_job(*args)
    assert bench_job(*args) == first
    row = BenchRow.model_validate(first)
    assert (row.n, row.m) == (6, 6)
    assert row.outcome in {"success", "fallback-greedy"}


def test_run_bench_merges_rows_in_seed_order():
    summary = run_bench("cycle", 6, 2, seeds=3, base_seed=5, config=FAST)
    assert [row.index for row in summary.rows] == [0, 1, 2]
    assert [row.seed for row in summary.rows] == [child_seed(5, i) for i in range(3)]
    assert sum(summary.outcomes().values()) == 3
    assert 0.0 <= summary.success_rate <= 1.0
    assert summary.table().splitlines()[-1].startswith("runs=3 ")


def test_pool_bench_matches_serial_bench():
    serial = run_bench("cycle", 6, 2, seeds=3, config=FAST)
    pooled = run_bench("cycle", 6, 2, seeds=3, config=FAST, workers=2)
    assert pooled.rows == serial.rows


def test_failed_jobs_become_rows():
    # 5 * 3 is odd, so no 3-regular graph on 5 vertices exists
    summary = run_bench("regular", 5, 2, seeds=2, d=3, config=FAST)
    assert [row.outcome for row in summary.rows] == ["failed", "failed"]
    assert all(row.error.startswith("ValueError") for row in summary.rows)
    assert summary.mean_max_color == 0.0


def test_empty_summary():
    summary = BenchSummary(family="cycle", r=2)
    assert summary.success_rate == 0.0
    assert summary.mean_retries == 0.0
