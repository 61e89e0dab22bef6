"""Serializable report models shared by the library and the CLI."""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from chromasum.core.params import PlanParams

ViolationKind = Literal["color", "color_mod", "sum"]


class Violation(BaseModel):
    """One offending pair: two edges sharing a (residue) color at ``vertex``, or two r-neighbours with equal sums."""

    kind: ViolationKind
    u: int
    v: int
    vertex: Optional[int] = None
    value: int
    detail: str = ""


class VerifySummary(BaseModel):
    proper: bool
    proper_mod: Optional[Tuple[int, bool]] = None
    distinguishing_r: bool
    violations: int
    max_color: int
    min_color: int


class VerifyReport(BaseModel):
    """Outcome of checking properness and r-distant sum distinction."""

    r: int
    proper: bool
    proper_mod: Optional[Tuple[int, bool]] = None
    distinguishing_r: bool
    violating_pairs: List[Violation] = Field(default_factory=list)
    max_color: int
    min_color: int

    @property
    def valid(self) -> bool:
        """Proper and distinguishing (mod-properness is informational)."""
        return self.proper and self.distinguishing_r

    def sum_conflicts(self) -> List[Violation]:
        return [v for v in self.violating_pairs if v.kind == "sum"]

    def summary(self) -> VerifySummary:
        return VerifySummary(
            proper=self.proper,
            proper_mod=self.proper_mod,
            distinguishing_r=self.distinguishing_r,
            violations=len(self.violating_pairs),
            max_color=self.max_color,
            min_color=self.min_color,
        )


# Probabilistic lemma checkers
LemmaTag = Literal["i", "ii", "iii", "iv", "v", "vi", "sparse", "R", "T", "partition"]


class LemmaFailure(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    vertex: int
    tag: LemmaTag
    observed: float
    bound: float
    detail: str = ""


class LemmaCheckReport(BaseModel):
    """Every violated inequality of one sample; ``passed`` iff there are none."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    lemma: Literal["ordering", "sparse", "lists"]
    failures: List[LemmaFailure] = Field(default_factory=list)
    iterations: int = 1

    @property
    def passed(self) -> bool:
        return not self.failures

    def severity(self) -> Tuple[int, int]:
        """Ranking key: structural (partition) failures first, then the total count."""
        structural = sum(1 for failure in self.failures if failure.tag == "partition")
        return structural, len(self.failures)

    def count_by_tag(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for failure in self.failures:
            counts[failure.tag] = counts.get(failure.tag, 0) + 1
        return counts


class ListEventReport(BaseModel):
    """Same-list adjacency (R) and residue-window crowding (T) events of one list assignment."""

    max_same_list_edges: int
    max_window_count: int
    failures: List[LemmaFailure] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


# Pipeline runs
Outcome = Literal["success", "fallback-exact", "fallback-greedy", "failed"]


class RunReport(BaseModel):
    """Everything a pipeline run did; byte-identical for identical inputs unless wall time is recorded."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    command: Optional[str] = None
    seed: int
    params: PlanParams
    outcome: Outcome
    attempts: int
    stage_retries: Dict[str, int] = Field(default_factory=dict)
    failures: List[str] = Field(default_factory=list)
    verify: Optional[VerifySummary] = None
    max_color: int = 0
    bound_2Q_plus_2q: int
    theorem3_bound: float
    wall_time: Optional[float] = None

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, data: str) -> "RunReport":
        return cls.model_validate_json(data)


# Exact scans
ScanStatus = Literal["exact", "timeout", "skipped"]


class ScanRecord(BaseModel):
    n: int
    m: int
    delta_max: int
    delta_min: int
    k: Optional[int] = None
    bound: float
    ratio: Optional[float] = None
    status: ScanStatus


class ScanReport(BaseModel):
    r: int
    records: List[ScanRecord] = Field(default_factory=list)

    @property
    def max_ratio(self) -> Optional[float]:
        ratios = [rec.ratio for rec in self.records if rec.ratio is not None]
        return max(ratios, default=None)

    def count(self, status: ScanStatus) -> int:
        return sum(1 for rec in self.records if rec.status == status)
