"""Construct, verify and exactly compute r-distant sum-distinguishing proper edge colorings."""

__version__ = "0.1.0"

from chromasum.config import PipelineConfig, resolve_profile
from chromasum.core import (
    EdgeColoring,
    Graph,
    PlanParams,
    RunReport,
    ScaleProfile,
    VerifyReport,
    compute_params,
    greedy_distinguishing_color,
    parse_graph,
    r_neighbors,
    verify,
    vizing_color,
)
from chromasum.errors import ChromasumError
from chromasum.exact import ExactResult, conjecture_scan, exact_index, naive_index
from chromasum.pipeline import run_pipeline

__all__ = [
    # Graphs and colorings
    "Graph",
    "EdgeColoring",
    "parse_graph",
    "r_neighbors",
    "vizing_color",
    "greedy_distinguishing_color",
    "verify",
    "VerifyReport",
    # Parameters and configuration
    "PlanParams",
    "ScaleProfile",
    "compute_params",
    "PipelineConfig",
    "resolve_profile",
    # Construction and exact indices
    "run_pipeline",
    "RunReport",
    "exact_index",
    "naive_index",
    "conjecture_scan",
    "ExactResult",
    # Errors
    "ChromasumError",
]
