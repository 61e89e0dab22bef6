"""The staged construction and its orchestration."""

from chromasum.pipeline.runner import STAGE_KEYS, run_pipeline
from chromasum.pipeline.stages import (
    MoveSet,
    assign_lists,
    attainable_sums,
    check_list_events,
    check_stage_invariants,
    finalize_C,
    init_state,
    lower_B,
    partition_failures,
    partition_issues,
    process_A,
    process_B,
    process_epp,
    process_vertex_A,
    process_vertex_B,
    recolor_lists,
    split_c_edges,
)
from chromasum.pipeline.state import PipelineState, Stage
