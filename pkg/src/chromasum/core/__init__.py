"""Graphs, colorings, parameters and the universal verifier."""

from chromasum.core.coloring import (
    EdgeColoring,
    SumProfile,
    greedy_distinguishing_color,
    read_coloring,
    shift,
    weighted_degrees,
    write_coloring,
)
from chromasum.core.generate import atlas_catalog, generate
from chromasum.core.graph import Graph, NeighborhoodCache, RNeighborhood, canonical_edge, r_neighbors
from chromasum.core.io import parse_graph, parse_graph_catalog, read_graph_file, serialize_graph
from chromasum.core.models import LemmaCheckReport, RunReport, ScanReport, VerifyReport
from chromasum.core.params import (
    PlanParams,
    ScaleProfile,
    SumPair,
    compute_params,
    pair_of,
    pairs_disjoint,
    theorem2_bound,
    theorem3_bound,
)
from chromasum.core.verify import verify
from chromasum.core.vizing import vizing_color
