"""Random vertex ordering with the A/B/C band partition, its six-property checker and sampler."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence

import numpy as np

from chromasum.core.graph import Graph, NeighborhoodCache
from chromasum.core.models import LemmaCheckReport, LemmaFailure
from chromasum.core.params import ScaleProfile
from chromasum.errors import BudgetExhausted
from chromasum.util.rng import SeedLike, as_generator

logger = logging.getLogger(__name__)

BAND_A, BAND_B, BAND_C = 0, 1, 2
BAND_NAMES = ("A", "B", "C")
_KEY_SCALE = 2.0**64


def frame_delta(g: Graph) -> int:
    """Maximum degree used for thresholds (at least 2 so ln Δ stays positive)."""
    return max(2, g.max_degree)


class OrderingPartition:
    """Vertex values X_v, the induced order and the A/B/C bands.

    A = {X_v < 1/λ2}, C = {X_v > 1 − 1/λ3} ∖ A, B = the rest. The order sorts by
    (key, vertex id); ``position[v]`` is the index of v in that order.
    """

    def __init__(self, graph: Graph, x: Sequence[float], keys: Sequence, profile: ScaleProfile, delta: int):
        if len(x) != graph.n:
            raise ValueError(f"Expected {graph.n} values, got {len(x)}")
        self.graph = graph
        self.profile = profile
        self.delta = delta
        self.x: List[float] = [float(value) for value in x]
        self.order: List[int] = sorted(graph.vertices(), key=lambda v: (keys[v], v))
        self.position: List[int] = [0] * graph.n
        for i, v in enumerate(self.order):
            self.position[v] = i

        self.a_threshold = 1 / profile.lambda2(delta)
        self.c_threshold = 1 - 1 / profile.lambda3(delta)
        self.band: List[int] = []
        for value in self.x:
            if value < self.a_threshold:
                self.band.append(BAND_A)
            elif value > self.c_threshold:
                self.band.append(BAND_C)
            else:
                self.band.append(BAND_B)

        self.A: FrozenSet[int] = frozenset(v for v in graph.vertices() if self.band[v] == BAND_A)
        self.B: FrozenSet[int] = frozenset(v for v in graph.vertices() if self.band[v] == BAND_B)
        self.C: FrozenSet[int] = frozenset(v for v in graph.vertices() if self.band[v] == BAND_C)

    @classmethod
    def from_values(cls, g: Graph, x: Sequence[float], profile: ScaleProfile, delta: Optional[int] = None):
        """Partition from hand-picked values (ties broken by vertex id)."""
        return cls(g, x, keys=list(x), profile=profile, delta=delta or frame_delta(g))

    def band_of(self, v: int) -> str:
        return BAND_NAMES[self.band[v]]

    def in_band(self, v: int, band: int) -> bool:
        return self.band[v] == band

    def ordered(self, band: int) -> List[int]:
        """Vertices of one band in processing order."""
        return [v for v in self.order if self.band[v] == band]

    def is_backward(self, u: int, v: int) -> bool:
        """True if u precedes v."""
        return self.position[u] < self.position[v]

    # Derived counts
    def d_minus(self, v: int) -> int:
        return sum(1 for u in self.graph.neighbors(v) if self.position[u] < self.position[v])

    def dr_minus(self, v: int, cache: NeighborhoodCache) -> int:
        return sum(1 for u in cache.members(v) if self.position[u] < self.position[v])

    def d_in(self, v: int, band: int) -> int:
        return sum(1 for u in self.graph.neighbors(v) if self.band[u] == band)

    def dr_in(self, v: int, band: int, cache: NeighborhoodCache) -> int:
        return sum(1 for u in cache.members(v) if self.band[u] == band)

    def sizes(self) -> Dict[str, int]:
        return {"A": len(self.A), "B": len(self.B), "C": len(self.C)}

    def __repr__(self) -> str:
        return f"OrderingPartition(n={self.graph.n}, A={len(self.A)}, B={len(self.B)}, C={len(self.C)})"


def sample_ordering(g: Graph, r: int, profile: ScaleProfile, seed: SeedLike) -> OrderingPartition:
    """Draw X_v as independent uniform 64-bit integers mapped to [0, 1]."""
    rng = as_generator(seed)
    keys = rng.integers(0, np.iinfo(np.uint64).max, size=g.n, dtype=np.uint64, endpoint=True)
    key_list = [int(k) for k in keys]
    x = [k / _KEY_SCALE for k in key_list]
    return OrderingPartition(g, x, keys=key_list, profile=profile, delta=frame_delta(g))


def _scaled(value: float, factor: float) -> float:
    """value * factor with 0 * inf taken as 0."""
    return 0.0 if value == 0 else value * factor


def check_ordering(
    g: Graph,
    part: OrderingPartition,
    r: int,
    profile: ScaleProfile,
    cache: Optional[NeighborhoodCache] = None,
) -> LemmaCheckReport:
    """Evaluate the six ordering properties at every vertex and list each violation.

    Upper bounds are multiplied by ρ and lower bounds divided by it; the square-root
    slack of the backward counts is scaled by ρ as well. In the desk profile, band lower
    bounds below 1 are relaxed to 0.
    """
    cache = cache or NeighborhoodCache(g, r)
    delta = part.delta
    rho = profile.relax
    log_delta = math.log(delta)
    span = float(delta) ** (r - 1)
    lam2, lam3 = profile.lambda2(delta), profile.lambda3(delta)

    failures: List[LemmaFailure] = []

    def require_at_most(v: int, tag: str, observed: int, bound: float) -> None:
        if observed > bound:
            failures.append(LemmaFailure(vertex=v, tag=tag, observed=observed, bound=bound))

    def require_at_least(v: int, tag: str, observed: int, bound: float) -> None:
        if observed < bound:
            failures.append(LemmaFailure(vertex=v, tag=tag, observed=observed, bound=bound))

    def band_lower(d: int, lam: float) -> float:
        bound = d / (2 * lam) / rho
        if profile.kind == "desk" and bound < 1:
            return 0.0
        return bound

    for v in g.vertices():
        d = g.degree(v)
        require_at_most(v, "i", part.dr_in(v, BAND_A, cache), _scaled(2 * d * span / lam2, rho))
        require_at_most(v, "ii", part.dr_in(v, BAND_C, cache), _scaled(2 * d * span / lam3, rho))

        d_a = part.d_in(v, BAND_A)
        require_at_least(v, "iii", d_a, band_lower(d, lam2))
        require_at_most(v, "iii", d_a, _scaled(2 * d / lam2, rho))

        d_c = part.d_in(v, BAND_C)
        require_at_least(v, "iv", d_c, band_lower(d, lam3))
        require_at_most(v, "iv", d_c, _scaled(2 * d / lam3, rho))

        if part.band[v] != BAND_B:
            continue
        mean = part.x[v] * d
        lower = mean - _scaled(math.sqrt(mean) * log_delta, rho)
        require_at_least(v, "v", part.d_minus(v), math.ceil(lower) if math.isfinite(lower) else lower)
        mean_r = mean * span
        upper = mean_r + _scaled(math.sqrt(mean_r) * log_delta, rho)
        require_at_most(v, "vi", part.dr_minus(v, cache), math.floor(upper) if math.isfinite(upper) else upper)

    return LemmaCheckReport(lemma="ordering", failures=failures)


@dataclass
class OrderingSample:
    partition: OrderingPartition
    report: LemmaCheckReport
    iterations: int


def sample_until_ordering(
    g: Graph,
    r: int,
    profile: ScaleProfile,
    seed: SeedLike,
    budget: int,
    strict: bool = False,
    cache: Optional[NeighborhoodCache] = None,
    extra_check: Optional[Callable[[OrderingPartition], List[LemmaFailure]]] = None,
) -> OrderingSample:
    """Resample the whole ordering until the checker passes.

    Returns the first passing sample. On exhaustion, the strict mode raises and the
    lenient mode returns the sample with the fewest failures, structural ones from
    ``extra_check`` counting first.

    Raises:
        BudgetExhausted: strict mode only, after exactly ``budget`` samples.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = as_generator(seed)
    cache = cache or NeighborhoodCache(g, r)

    best: Optional[OrderingSample] = None
    for iteration in range(1, budget + 1):
        part = sample_ordering(g, r, profile, rng)
        report = check_ordering(g, part, r, profile, cache)
        if extra_check is not None:
            report.failures.extend(extra_check(part))
        report.iterations = iteration
        logger.debug(f"Ordering sample {iteration}: {len(report.failures)} failures {report.count_by_tag()}")
        if report.passed:
            return OrderingSample(part, report, iteration)
        if best is None or report.severity() < best.report.severity():
            best = OrderingSample(part, report, iteration)

    if strict:
        raise BudgetExhausted(f"No ordering passed all properties in {budget} samples")
    logger.warning(f"Ordering budget {budget} exhausted; keeping sample with {len(best.report.failures)} failures")
    best.iterations = budget
    best.report.iterations = budget
    return best
