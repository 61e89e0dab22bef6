"""Concurrent execution of independent seeded runs."""

from chromasum.workers.bench import BenchRow, BenchSummary, bench_job, run_bench
from chromasum.workers.run_manager import (
    AbstractRunManager,
    PoolRunManager,
    RunJob,
    SerialRunManager,
    create_run_manager,
)
