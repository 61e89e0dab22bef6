"""Numeric frame of the construction: q, Q, admissible-sum pairs and scale profiles."""

import logging
import math
from decimal import ROUND_CEILING, Decimal, localcontext
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from chromasum.errors import InfeasibleParams, MixedQ

logger = logging.getLogger(__name__)

LIST_SIZE = 32
LIST_STRIDE = 3
LIST_SPAN = LIST_SIZE * LIST_STRIDE  # 96
MAX_LIST_OFFSET = (LIST_SIZE - 1) * LIST_STRIDE  # 93


class ScaleProfile(BaseModel):
    """Replacement for the ln-power thresholds at a given maximum degree.

    ``paper`` evaluates λ_k(Δ) = ln^k Δ literally. ``desk`` uses the constants
    λ_k(Δ) = max(1, c_k) so that every checker stays meaningful for realizable degrees.
    ``relax`` is the slack factor ρ >= 1 applied to every lemma inequality.
    """

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    kind: Literal["paper", "desk"] = "desk"
    c2: float = Field(default=4.0, gt=0)
    c3: float = Field(default=2.0, gt=0)
    c5: float = Field(default=2.0, gt=0)
    c8: float = Field(default=1.0, gt=0)
    relax: float = 2.0

    @field_validator("relax")
    @classmethod
    def _relax_at_least_one(cls, value: float) -> float:
        if not value >= 1:
            raise ValueError(f"relax must be >= 1, got {value}")
        return value

    @classmethod
    def paper(cls, relax: float = 1.0) -> "ScaleProfile":
        return cls(kind="paper", relax=relax)

    @classmethod
    def desk(cls, c2: float = 4.0, c3: float = 2.0, c5: float = 2.0, c8: float = 1.0, relax: float = 2.0):
        return cls(kind="desk", c2=c2, c3=c3, c5=c5, c8=c8, relax=relax)

    @classmethod
    def from_name(cls, name: str, relax: Optional[float] = None) -> "ScaleProfile":
        if name == "paper":
            return cls.paper() if relax is None else cls.paper(relax=relax)
        if name == "desk":
            return cls.desk() if relax is None else cls.desk(relax=relax)
        raise ValueError(f"Unknown scale profile '{name}' (expected paper or desk)")

    def lam(self, k: int, delta: int) -> float:
        """λ_k(Δ) for k in {2, 3, 5, 8}."""
        if self.kind == "paper":
            return math.log(delta) ** k
        constant = {2: self.c2, 3: self.c3, 5: self.c5, 8: self.c8}[k]
        return max(1.0, constant)

    def lambda2(self, delta: int) -> float:
        return self.lam(2, delta)

    def lambda3(self, delta: int) -> float:
        return self.lam(3, delta)

    def lambda5(self, delta: int) -> float:
        return self.lam(5, delta)

    def lambda8(self, delta: int) -> float:
        return self.lam(8, delta)


class SumPair(BaseModel):
    """An element {low, low+Q} of the admissible-sum family for one Q."""

    model_config = ConfigDict(frozen=True)

    low: int
    Q: int

    @property
    def high(self) -> int:
        return self.low + self.Q

    def __contains__(self, s: object) -> bool:
        return s == self.low or s == self.high

    def __iter__(self):
        return iter((self.low, self.high))

    def __repr__(self) -> str:
        return f"SumPair({{{self.low}, {self.high}}})"


def pair_low(s: int, Q: int) -> int:
    """Lower element of the pair containing ``s``."""
    return s if s % (2 * Q) < Q else s - Q


def pair_of(s: int, Q: int) -> SumPair:
    """The unique pair of the family containing ``s`` (Euclidean mod, so negatives work)."""
    if Q < 1:
        raise ValueError(f"Q must be positive, got {Q}")
    return SumPair(low=pair_low(s, Q), Q=Q)


def pairs_disjoint(a: SumPair, b: SumPair) -> bool:
    """Family pairs are either identical or disjoint.

    Raises:
        MixedQ: if the pairs come from different Q.
    """
    if a.Q != b.Q:
        raise MixedQ(f"Cannot compare pairs for Q={a.Q} and Q={b.Q}")
    return a.low != b.low


def _ceil_multiple(x: Decimal, step: int) -> int:
    return int((x / step).to_integral_value(rounding=ROUND_CEILING)) * step


def q_target(delta: int, r: int) -> Decimal:
    """Δ^{r−1}/lnΔ as a 60-digit decimal."""
    with localcontext() as ctx:
        ctx.prec = 60
        return Decimal(delta) ** (r - 1) / Decimal(delta).ln()


class PlanParams(BaseModel):
    """The numeric frame (r, Δ, q, Q, profile) governing one pipeline run."""

    model_config = ConfigDict(frozen=True)

    r: int
    delta_max: int
    q: int
    Q: int
    profile: ScaleProfile = Field(default_factory=ScaleProfile)

    @property
    def color_window(self) -> Tuple[int, int]:
        return self.q - self.delta_max, 2 * self.Q + 2 * self.q

    @property
    def color_bound(self) -> int:
        return 2 * self.Q + 2 * self.q

    @property
    def initial_offset(self) -> int:
        """Shift moving Vizing colors 1..Δ+1 onto Q+q−Δ..Q+q."""
        return self.Q + self.q - self.delta_max - 1

    @property
    def degree_class_factor(self) -> float:
        """Degree ratio above which two vertices are certainly sum-distinguished."""
        low, high = self.color_window
        exact = high / low if low > 0 else math.inf
        if self.profile.kind == "paper":
            return max(5 * math.log(self.delta_max) * self.profile.relax, exact)
        return exact

    def comparable(self, du: int, dv: int) -> bool:
        """False when the degree gap alone keeps the sums apart."""
        low, high = self.color_window
        small, large = sorted((du, dv))
        if self.profile.kind == "desk":
            return not large * low > small * high
        return large < small * self.degree_class_factor

    def pair(self, s: int) -> SumPair:
        return pair_of(s, self.Q)


def compute_params(
    delta_max: int,
    r: int,
    profile: Optional[ScaleProfile] = None,
    q_override: Optional[int] = None,
    Q_override: Optional[int] = None,
) -> PlanParams:
    """q = least multiple of 96 at least Δ^{r−1}/lnΔ; Q = least multiple of q at least 2Δ^{r−1}+Δ^{r−1}/lnΔ.

    Overrides replace the computed values for experiments; Q must stay a multiple of q.
    """
    if delta_max < 2:
        raise ValueError(f"Maximum degree must be at least 2, got {delta_max}")
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    profile = profile or ScaleProfile()

    x = q_target(delta_max, r)
    q = q_override if q_override is not None else _ceil_multiple(x, LIST_SPAN)
    if q < 1:
        raise InfeasibleParams(f"q must be positive, got {q}")

    if Q_override is not None:
        Q = Q_override
    else:
        with localcontext() as ctx:
            ctx.prec = 60
            Q = _ceil_multiple(2 * Decimal(delta_max) ** (r - 1) + x, q)
    if Q < 1 or Q % q:
        raise InfeasibleParams(f"Q={Q} must be a positive multiple of q={q}")

    params = PlanParams(r=r, delta_max=delta_max, q=q, Q=Q, profile=profile)
    logger.debug(f"Params for Δ={delta_max}, r={r}: q={q}, Q={Q}, window={params.color_window}")
    return params


def feasibility_issues(params: PlanParams) -> List[str]:
    """Reasons the frame cannot carry the construction (empty when usable)."""
    issues = []
    delta, q, Q = params.delta_max, params.q, params.Q
    if q - delta < 1:
        issues.append(f"q - Δ = {q - delta} < 1: lowered colors would not be positive")
    if delta + 1 > q:
        issues.append(f"Δ + 1 = {delta + 1} > q = {q}: the initial coloring is not proper mod q")
    if 6 * delta >= q:
        issues.append(f"6Δ = {6 * delta} >= q = {q}: E'' additions could wrap modulo q")
    if q % LIST_STRIDE:
        issues.append(f"q = {q} is not divisible by 3: mod-3 channels break")
    if Q % LIST_SPAN:
        issues.append(f"Q = {Q} is not divisible by 96: the addition lists do not tile [0, Q)")
    return issues


def list_family(Q: int) -> List[Tuple[int, ...]]:
    """The Q/96 lists of 32 consecutive multiples of 3 tiling {0, 3, ..., Q−3}."""
    if Q % LIST_SPAN:
        raise ValueError(f"Q={Q} is not divisible by {LIST_SPAN}")
    return [tuple(LIST_SPAN * i + LIST_STRIDE * j for j in range(LIST_SIZE)) for i in range(Q // LIST_SPAN)]


def theorem2_bound(delta: int, r: int) -> int:
    """General upper bound 6Δ^{r−1}."""
    return 6 * delta ** (r - 1)


def theorem3_bound(delta: int, r: int) -> float:
    """Asymptotic bound 4Δ^{r−1}(1 + 3/(2lnΔ)) + 384 for large minimum degree."""
    return 4 * delta ** (r - 1) * (1 + 3 / (2 * math.log(delta))) + 384
