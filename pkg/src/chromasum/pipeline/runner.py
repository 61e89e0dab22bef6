"""Whole-run orchestration: attempts, local stage retries and the fallback policy."""

import logging
import time
from typing import Callable, Dict, List, Optional, Tuple

from chromasum.config import PipelineConfig, resolve_profile
from chromasum.core.coloring import EdgeColoring, greedy_distinguishing_color
from chromasum.core.graph import Graph, NeighborhoodCache
from chromasum.core.models import Outcome, RunReport
from chromasum.core.params import PlanParams, ScaleProfile, compute_params, feasibility_issues, theorem3_bound
from chromasum.core.verify import verify
from chromasum.errors import (
    BudgetExhausted,
    InfeasiblePartition,
    InvariantViolation,
    IsolatedEdge,
    PipelineFailed,
    StageError,
)
from chromasum.lemmas.ordering import frame_delta, sample_until_ordering
from chromasum.pipeline.stages import (
    assign_lists,
    check_stage_invariants,
    finalize_C,
    init_state,
    lower_B,
    partition_failures,
    process_A,
    process_B,
    process_epp,
    recolor_lists,
    split_c_edges,
)
from chromasum.pipeline.state import PipelineState
from chromasum.util.rng import StageStreams

logger = logging.getLogger(__name__)

STAGE_KEYS = (
    "ordering",
    "partition",
    "A",
    "B",
    "sparse",
    "epp",
    "lists",
    "recolor",
    "lower_B",
    "finalize_C",
    "invariants",
    "verify",
)

_RECOVERABLE = (StageError, InfeasiblePartition, BudgetExhausted)


class _Attempt:
    """One attempt: fresh ordering, then every stage from a checkpoint with local retries."""

    def __init__(
        self,
        g: Graph,
        params: PlanParams,
        cache: NeighborhoodCache,
        streams: StageStreams,
        config: PipelineConfig,
        retries: Dict[str, int],
    ):
        self.g = g
        self.params = params
        self.cache = cache
        self.streams = streams
        self.config = config
        self.retries = retries

    def _count(self, error: Exception, default: str) -> None:
        stage = getattr(error, "stage", default)
        key = stage if stage in self.retries else default
        self.retries[key] += 1

    def _stage(
        self,
        name: str,
        state: PipelineState,
        step: Callable[[PipelineState, int], None],
    ) -> PipelineState:
        """Run ``step`` on a copy of ``state``; retry k is handed the index k (0 = first try)."""
        last: Optional[Exception] = None
        for k in range(self.config.local_retries + 1):
            candidate = state.copy()
            try:
                step(candidate, k)
                if self.config.check_invariants:
                    check_stage_invariants(candidate, previous=state)
                return candidate
            except InvariantViolation:
                self.retries["invariants"] += 1
                raise
            except _RECOVERABLE as e:
                self._count(e, name)
                logger.debug(f"Stage {name} try {k} failed: {e}")
                last = e
        raise last

    def _ties(self, k: int):
        return None if k == 0 else self.streams.retry("ties", k)

    def _stream(self, name: str, k: int):
        return getattr(self.streams, name) if k == 0 else self.streams.retry(name, k)

    def _ordering(self):
        r, profile = self.params.r, self.params.profile
        last: Optional[Exception] = None
        for k in range(self.config.local_retries + 1):
            sample = sample_until_ordering(
                self.g,
                r,
                profile,
                self._stream("ordering", k),
                self.config.sampler_budget,
                strict=self.config.strict_lemmas,
                cache=self.cache,
                extra_check=lambda part: partition_failures(self.g, part),
            )
            structural, _ = sample.report.severity()
            if not structural:
                logger.debug(f"Ordering accepted after {sample.iterations} samples: {sample.partition}")
                return sample.partition
            self.retries["partition"] += 1
            last = InfeasiblePartition(f"Best ordering still has {structural} structural failures")
        raise last

    def run(self) -> EdgeColoring:
        config = self.config
        try:
            partition = self._ordering()
        except BudgetExhausted:
            self.retries["ordering"] += 1
            raise

        state = init_state(self.g, self.params, partition, self.cache)
        state = self._stage("A", state, lambda s, k: process_A(s, self._ties(k), config.audit))
        state = self._stage("B", state, lambda s, k: process_B(s, self._ties(k), config.audit))

        def split(s: PipelineState, k: int) -> None:
            split_c_edges(s, self._stream("sparse", k), config.sampler_budget, strict=config.strict_lemmas)
            process_epp(s)

        state = self._stage("sparse", state, split)

        def lists(s: PipelineState, k: int) -> None:
            assign_lists(s, self._stream("lists", k), config.sampler_budget, strict=config.strict_lemmas)
            recolor_lists(s)

        state = self._stage("lists", state, lists)
        state = self._stage("lower_B", state, lambda s, k: lower_B(s))
        state = self._stage("finalize_C", state, lambda s, k: finalize_C(s, self._ties(k)))

        report = verify(self.g, state.coloring, self.params.r, modulus=self.params.Q, cache=self.cache)
        low, high = self.params.color_window
        in_window = state.coloring.min_color >= low and state.coloring.max_color <= high
        if not (report.valid and in_window):
            self.retries["verify"] += 1
            raise InvariantViolation(
                f"Final coloring failed verification ({len(report.violating_pairs)} violations)", stage="verify"
            )
        return state.coloring


def _fallback(
    g: Graph,
    r: int,
    config: PipelineConfig,
    cache: NeighborhoodCache,
    failures: List[str],
) -> Tuple[EdgeColoring, Outcome]:
    if config.fallback == "fail":
        raise PipelineFailed(f"No attempt succeeded; last failure: {failures[-1] if failures else 'none'}", stage="pipeline")

    if config.fallback == "exact":
        if g.m <= config.exact_edge_limit:
            from chromasum.exact.solver import exact_index

            logger.info(f"Falling back to the exact solver ({g.m} edges)")
            result = exact_index(g, r, time_budget=config.exact_time_budget, cache=cache)
            return result.witness, "fallback-exact"
        logger.warning(f"{g.m} edges exceed the exact limit {config.exact_edge_limit}; using the greedy fallback")

    logger.info("Falling back to the greedy coloring")
    return greedy_distinguishing_color(g, r, cache), "fallback-greedy"


def run_pipeline(
    g: Graph,
    r: int,
    profile: Optional[ScaleProfile] = None,
    seed: int = 0,
    budget: Optional[int] = None,
    config: Optional[PipelineConfig] = None,
    q_override: Optional[int] = None,
    Q_override: Optional[int] = None,
    command: Optional[str] = None,
    timing: bool = False,
) -> Tuple[EdgeColoring, RunReport]:
    """Construct an r-distant sum-distinguishing coloring with colors in [q−Δ, 2Q+2q].

    Each of ``budget`` attempts draws a fresh ordering from its own seeded streams and runs
    every stage with up to ``config.local_retries`` re-runs from the stage's checkpoint.
    When all attempts fail the configured fallback produces the coloring instead.

    Raises:
        IsolatedEdge: before any work, if some component is a single edge.
        PipelineFailed: if every attempt fails and the fallback is ``fail``.
    """
    config = config or PipelineConfig()
    if budget is not None:
        config = config.model_copy(update={"budget": budget})
    profile = profile or resolve_profile()
    started = time.perf_counter()

    if g.has_isolated_edge():
        raise IsolatedEdge("Graphs with an isolated edge have no sum-distinguishing coloring")

    params = compute_params(frame_delta(g), r, profile, q_override=q_override, Q_override=Q_override)
    cache = NeighborhoodCache(g, r)
    retries = {key: 0 for key in STAGE_KEYS}
    failures: List[str] = []
    attempts = 0
    coloring: Optional[EdgeColoring] = None
    outcome: Outcome = "success"

    if g.m == 0:
        coloring = EdgeColoring(g, {})
    else:
        issues = feasibility_issues(params)
        if issues:
            failures.extend(issues)
            logger.warning(f"Frame q={params.q}, Q={params.Q} unusable: {'; '.join(issues)}")
        else:
            cache.precompute()
            for attempt in range(config.budget):
                attempts = attempt + 1
                try:
                    coloring = _Attempt(g, params, cache, StageStreams(seed, attempt), config, retries).run()
                    logger.info(f"Attempt {attempt} succeeded")
                    break
                except _RECOVERABLE as e:
                    failures.append(f"attempt {attempt}: {e}")
                    logger.info(f"Attempt {attempt} failed: {e}")

        if coloring is None:
            coloring, outcome = _fallback(g, r, config, cache, failures)

    report = verify(g, coloring, r, modulus=params.Q if outcome == "success" else None, cache=cache)
    run_report = RunReport(
        command=command,
        seed=seed,
        params=params,
        outcome=outcome,
        attempts=attempts,
        stage_retries=retries,
        failures=failures,
        verify=report.summary(),
        max_color=coloring.max_color,
        bound_2Q_plus_2q=params.color_bound,
        theorem3_bound=theorem3_bound(params.delta_max, r),
        wall_time=time.perf_counter() - started if timing else None,
    )
    logger.info(f"Run finished: {outcome} after {attempts} attempts, max color {coloring.max_color}")
    return coloring, run_report
