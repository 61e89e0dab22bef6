"""Run configuration and environment-driven defaults."""

import logging
import os
from typing import Literal, Optional

from pydantic import BaseModel, Field

from chromasum.core.params import ScaleProfile

logger = logging.getLogger(__name__)

PROFILE_ENV = "CHROMASUM_PROFILE"
PROFILE_NAMES = ("paper", "desk")

Fallback = Literal["exact", "greedy", "fail"]


def default_profile_name() -> str:
    """Profile selected by ``CHROMASUM_PROFILE`` (``desk`` when unset or invalid)."""
    name = os.environ.get(PROFILE_ENV, "desk").strip().lower()
    if name not in PROFILE_NAMES:
        logger.warning(f"Ignoring {PROFILE_ENV}={name!r}; expected one of {', '.join(PROFILE_NAMES)}")
        return "desk"
    return name


def resolve_profile(name: Optional[str] = None, relax: Optional[float] = None) -> ScaleProfile:
    return ScaleProfile.from_name(name or default_profile_name(), relax=relax)


class PipelineConfig(BaseModel):
    """Retry budgets and failure policy of one pipeline invocation."""

    budget: int = Field(default=20, ge=1, description="whole-run attempts, each with a fresh ordering")
    sampler_budget: int = Field(default=200, ge=1, description="samples per Las-Vegas sampler")
    local_retries: int = Field(default=3, ge=0, description="re-runs of a failed stage with random tie-breaks")
    fallback: Fallback = "greedy"
    strict_lemmas: bool = False
    exact_edge_limit: int = Field(default=20, ge=0)
    exact_time_budget: float = Field(default=60.0, gt=0)
    check_invariants: bool = True
    audit: bool = Field(default=False, description="enumerate every attainable sum per vertex and log the count")
