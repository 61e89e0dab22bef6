"""Exception hierarchy shared by all chromasum modules."""

from typing import Optional


class ChromasumError(Exception):
    """Base class for every domain failure raised by chromasum."""


# Input parsing
class ParseError(ChromasumError):
    """Malformed graph, catalog or coloring input."""

    def __init__(self, message: str, line: Optional[int] = None, position: Optional[int] = None):
        self.line = line
        self.position = position
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"byte {position}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class DuplicateEdge(ParseError):
    """The same unordered vertex pair was given twice."""


class LoopEdge(ParseError):
    """An edge joins a vertex with itself."""


# Structural preconditions
class IsolatedEdge(ChromasumError):
    """The graph has a component consisting of a single edge."""


class IsolatedVertex(ChromasumError):
    """A vertex that must carry an incident edge has none."""


class InfeasiblePartition(ChromasumError):
    """The A/B/C partition violates a structural prerequisite of the construction."""


class InfeasibleParams(ChromasumError):
    """The numeric frame (q, Q, Δ) cannot support the construction."""


class MixedQ(ChromasumError):
    """Two admissible-sum pairs built for different Q were compared."""


# Arithmetic
class NonPositiveColor(ChromasumError):
    """A color operation would produce a color below 1."""


class ArithmeticOverflow(ChromasumError):
    """A weighted degree left the signed 64-bit range."""


# Sampling
class BudgetExhausted(ChromasumError):
    """A Las-Vegas sampler ran out of its resampling budget in strict mode."""


class GenerationBudgetExhausted(ChromasumError):
    """A random graph generator could not meet its constraints within budget."""


# Pipeline stages
class StageError(ChromasumError):
    """A pipeline stage could not complete. Carries the stage tag for retry bookkeeping."""

    def __init__(self, message: str, stage: str = "unknown"):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class NoAdmissibleSum(StageError):
    """No attainable sum satisfies the disjointness / distinction requirements."""


class NoAdmissibleAddition(StageError):
    """No addition in [0, 6Δ] fixes the residues of an E'' edge."""


class NoAvailableList(StageError):
    """An E' edge has no entirely available addition list."""


class ListDegreeExceeded(StageError):
    """A per-list subgraph has maximum degree above 31."""


class MissingCEdge(StageError):
    """A B-vertex has no adjustable edge into C."""


class UnprocessedBackwardNeighbor(StageError):
    """A vertex was processed before one of its backward neighbours."""


class InvariantViolation(StageError):
    """A stage invariant failed its post-stage assertion."""


class PipelineFailed(StageError):
    """Every attempt failed and the fallback policy is 'fail'."""
