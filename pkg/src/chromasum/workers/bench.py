"""Seeded benchmark fan-out: one generated graph and one pipeline run per seed."""

import logging
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field
from tqdm import tqdm

from chromasum.config import PipelineConfig
from chromasum.core.generate import generate
from chromasum.core.params import ScaleProfile
from chromasum.pipeline.runner import run_pipeline
from chromasum.util.rng import child_seed
from chromasum.workers.run_manager import create_run_manager

logger = logging.getLogger(__name__)


class BenchRow(BaseModel):
    index: int
    seed: int
    n: int = 0
    m: int = 0
    outcome: str
    max_color: int = 0
    bound_2Q_plus_2q: int = 0
    attempts: int = 0
    retries: int = 0
    error: Optional[str] = None


class BenchSummary(BaseModel):
    family: str
    r: int
    rows: List[BenchRow] = Field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return sum(1 for row in self.rows if row.outcome == "success") / len(self.rows) if self.rows else 0.0

    @property
    def mean_max_color(self) -> float:
        colored = [row.max_color for row in self.rows if row.error is None]
        return sum(colored) / len(colored) if colored else 0.0

    @property
    def mean_retries(self) -> float:
        return sum(row.retries for row in self.rows) / len(self.rows) if self.rows else 0.0

    def outcomes(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for row in self.rows:
            counts[row.outcome] = counts.get(row.outcome, 0) + 1
        return counts

    def table(self) -> str:
        """Plain-text table, one line per run followed by the aggregates."""
        lines = [f"{'seed':>12} {'n':>5} {'m':>6} {'outcome':<16} {'max':>7} {'2Q+2q':>7} {'retries':>7}"]
        for row in self.rows:
            outcome = row.outcome if row.error is None else "error"
            lines.append(
                f"{row.seed:>12} {row.n:>5} {row.m:>6} {outcome:<16} {row.max_color:>7} {row.bound_2Q_plus_2q:>7} {row.retries:>7}"
            )
        lines.append(
            f"runs={len(self.rows)} success_rate={self.success_rate:.3f} "
            f"mean_max_color={self.mean_max_color:.1f} mean_retries={self.mean_retries:.2f}"
        )
        return "\n".join(lines)


def bench_job(
    index: int,
    seed: int,
    family: str,
    n: int,
    d: Optional[int],
    p: Optional[float],
    min_degree: int,
    r: int,
    profile: Dict[str, Any],
    config: Dict[str, Any],
) -> Dict[str, Any]:
    """Generate one graph and run the pipeline on it; plain-data arguments so it pickles."""
    g = generate(family, n, d=d, p=p, min_degree=min_degree, seed=seed)
    _, report = run_pipeline(
        g, r, profile=ScaleProfile.model_validate(profile), seed=seed, config=PipelineConfig.model_validate(config)
    )
    return BenchRow(
        index=index,
        seed=seed,
        n=g.n,
        m=g.m,
        outcome=report.outcome,
        max_color=report.max_color,
        bound_2Q_plus_2q=report.bound_2Q_plus_2q,
        attempts=report.attempts,
        retries=sum(report.stage_retries.values()),
    ).model_dump()


def run_bench(
    family: str,
    n: int,
    r: int,
    seeds: int,
    base_seed: int = 0,
    d: Optional[int] = None,
    p: Optional[float] = None,
    min_degree: int = 0,
    profile: Optional[ScaleProfile] = None,
    config: Optional[PipelineConfig] = None,
    workers: int = 0,
    progress: bool = False,
) -> BenchSummary:
    """Run ``seeds`` independent (graph, pipeline) pairs and merge the rows in seed order."""
    profile = profile or ScaleProfile.desk()
    config = config or PipelineConfig()
    rows: Dict[int, BenchRow] = {}
    bar = tqdm(total=seeds, desc=f"bench {family}", unit="run", disable=not progress)

    def collect(index: int, result: Optional[Dict[str, Any]], error: Optional[str]) -> None:
        if error is not None:
            logger.warning(f"Bench run {index} failed: {error}")
            rows[index] = BenchRow(index=index, seed=child_seed(base_seed, index), outcome="failed", error=error)
        else:
            rows[index] = BenchRow.model_validate(result)
        bar.update(1)

    manager = create_run_manager(workers)
    try:
        for index in range(seeds):
            args = (
                index,
                child_seed(base_seed, index),
                family,
                n,
                d,
                p,
                min_degree,
                r,
                profile.model_dump(),
                config.model_dump(),
            )
            manager.submit(index, bench_job, args, collect)
        manager.wait()
    finally:
        manager.shutdown()
        bar.close()

    return BenchSummary(family=family, r=r, rows=[rows[i] for i in sorted(rows)])
