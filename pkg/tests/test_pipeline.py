import pytest

from chromasum.config import PipelineConfig
from chromasum.core.generate import complete, cycle, petersen, random_regular
from chromasum.core.graph import Graph
from chromasum.core.params import ScaleProfile, SumPair, compute_params
from chromasum.core.verify import verify
from chromasum.errors import (
    BudgetExhausted,
    InfeasiblePartition,
    InvariantViolation,
    IsolatedEdge,
    ListDegreeExceeded,
    NoAdmissibleSum,
    PipelineFailed,
    StageError,
    UnprocessedBackwardNeighbor,
)
from chromasum.exact.solver import exact_index
from chromasum.lemmas.ordering import OrderingPartition
from chromasum.pipeline import runner, stages
from chromasum.pipeline.runner import STAGE_KEYS, run_pipeline
from chromasum.pipeline.stages import (
    MoveSet,
    assign_lists,
    attainable_sums,
    check_stage_invariants,
    finalize_C,
    init_state,
    lower_B,
    partition_failures,
    process_A,
    process_B,
    process_epp,
    process_vertex_A,
    process_vertex_B,
    recolor_lists,
    split_c_edges,
)
from chromasum.pipeline.state import Stage

# A = {0}, B = {1}, C = {2, 3, 4, 5} on K6
K6_VALUES = [0.1, 0.3, 0.6, 0.7, 0.8, 0.9]


def k6_state():
    g = complete(6)
    params = compute_params(5, 2, ScaleProfile.desk(), q_override=96, Q_override=1920)
    part = OrderingPartition.from_values(g, K6_VALUES, params.profile)
    return init_state(g, params, part)


def advance(state, stage_fn):
    previous = state.copy()
    stage_fn(state)
    check_stage_invariants(state, previous=previous)
    return state


def run_all_stages(state, seed):
    advance(state, process_A)
    advance(state, process_B)

    def split(s):
        split_c_edges(s, seed, budget=200)
        process_epp(s)

    def lists(s):
        assign_lists(s, seed, budget=50)
        recolor_lists(s)

    advance(state, split)
    advance(state, lists)
    advance(state, lower_B)
    advance(state, finalize_C)
    return state


# Initialization
def test_init_state_shifts_vizing_onto_the_top_band():
    state = k6_state()
    params = state.params
    assert all(params.Q + params.q - 5 <= c <= params.Q + params.q for _, c in state.coloring.items())
    assert state.anchor_edge == {0: (0, 2), 1: (1, 2)}
    assert state.stage == Stage.INIT
    check_stage_invariants(state)


def test_partition_prerequisites(p4, desk):
    part = OrderingPartition.from_values(p4, [0.1, 0.1, 0.9, 0.9], desk)
    details = {(f.vertex, f.observed) for f in partition_failures(p4, part)}
    # vertex 0 has no C neighbour, vertices 2 and 3 have one C neighbour each
    assert details == {(0, 0), (2, 1), (3, 1)}
    params = compute_params(2, 2, desk)
    with pytest.raises(InfeasiblePartition):
        init_state(p4, params, part)


def test_init_state_rejects_isolated_edges(desk):
    g = Graph(2, [(0, 1)])
    part = OrderingPartition.from_values(g, [0.9, 0.9], desk)
    with pytest.raises(IsolatedEdge):
        init_state(g, compute_params(2, 2, desk), part)


# A and B processing
def test_attainable_sums_cover_the_progressions():
    state = k6_state()
    params = state.params
    reachable = attainable_sums(state, 0)
    forward = 4  # non-anchor edges of vertex 0
    assert state.sums[0] in reachable
    assert len(reachable) >= (forward + 1) * (params.q - 2 * 5)

    for s in (min(reachable), max(reachable)):
        trial = state.copy()
        reachable[s].apply(trial)
        assert trial.sums[0] == s
        assert trial.recomputed_sums() == trial.sums


def test_process_vertex_A_pins_a_multiple_of_three():
    state = k6_state()
    process_vertex_A(state, 0)
    pair = state.s_pairs[0]
    assert state.sums[0] % 3 == 0
    assert state.sums[0] in pair
    assert pair.low % 3 == 0 and pair.high % 3 == 0
    assert state.processed == [0]


def test_process_vertex_B_needs_processed_backward_neighbours():
    state = k6_state()
    with pytest.raises(UnprocessedBackwardNeighbor):
        process_vertex_B(state, 1)


def test_process_B_avoids_the_pair_of_A():
    state = k6_state()
    process_A(state)
    process_B(state)
    assert state.stage == Stage.B_PROCESSED
    assert state.s_pairs[1].low != state.s_pairs[0].low
    assert state.sums[0] in state.s_pairs[0]
    check_stage_invariants(state)


def test_no_admissible_sum(monkeypatch):
    class Everything(set):
        def __contains__(self, item):
            return True

    monkeypatch.setattr(stages, "_blocked_lows", lambda state, v: Everything())
    state = k6_state()
    with pytest.raises(NoAdmissibleSum) as info:
        process_vertex_A(state, 0)
    assert info.value.stage == "A"


def test_move_set_net_shift():
    moves = MoveSet(backward=(((0, 1), 96), ((0, 2), 96), ((0, 3), -96)))
    assert moves.net_shift == 1
    assert MoveSet().net_shift == 0


# Edges inside C
def test_process_epp_requires_B_stage():
    with pytest.raises(ValueError):
        process_epp(k6_state())


def test_split_fails_when_C_is_a_triangle(desk):
    g = complete(5)
    params = compute_params(4, 2, desk, q_override=96, Q_override=1920)
    part = OrderingPartition.from_values(g, [0.1, 0.3, 0.6, 0.7, 0.8], desk)
    state = init_state(g, params, part)
    process_A(state)
    process_B(state)
    # a triangle always loses a whole vertex to E'
    with pytest.raises(InfeasiblePartition):
        split_c_edges(state, 0, budget=20)


def test_epp_makes_C_sums_nonzero_mod_three():
    state = k6_state()
    process_A(state)
    process_B(state)
    split_c_edges(state, 1, budget=200)
    process_epp(state)
    assert state.stage == Stage.EPP_DONE
    assert all(state.coloring[e] == state.params.q for e in state.e_prime)
    assert all(state.sums[v] % 3 for v in state.partition.C)
    assert set(state.e_prime) | set(state.e_dprime) == set(state.c_edges())
    check_stage_invariants(state)


def epp_state(seed=1):
    state = k6_state()
    process_A(state)
    process_B(state)
    split_c_edges(state, seed, budget=200)
    process_epp(state)
    return state


# Lists
def test_assign_and_recolor_lists():
    state = epp_state()
    report = assign_lists(state, 0, budget=20)
    assert report.passed
    assert state.stage == Stage.LISTS_ASSIGNED
    assert set(state.lists) == set(state.e_prime)
    recolor_lists(state)
    assert state.stage == Stage.RECOLORED
    q, Q = state.params.q, state.params.Q
    for edge in state.e_prime:
        addition = state.coloring[edge] - q
        assert addition % 3 == 0
        assert addition // 96 == state.lists[edge]
        assert 0 <= addition < Q
    check_stage_invariants(state)


def test_list_events_can_force_budget_exhaustion(monkeypatch):
    monkeypatch.setattr(stages, "WINDOW_CROWDING", 0)
    state = epp_state()
    with pytest.raises(BudgetExhausted):
        assign_lists(state.copy(), 0, budget=3, strict=True)
    report = assign_lists(state, 0, budget=3)
    assert not report.passed
    assert {f.tag for f in report.failures} == {"T"}
    assert state.stage == Stage.LISTS_ASSIGNED


def test_recolor_rejects_crowded_lists(monkeypatch):
    state = epp_state()
    assign_lists(state, 0, budget=20)
    monkeypatch.setattr(stages, "SAME_LIST_LIMIT", 0)
    with pytest.raises(ListDegreeExceeded) as info:
        recolor_lists(state)
    assert info.value.stage == "recolor"


# B lowering, final C pass and the whole sequence
def test_stage_sequence_keeps_every_invariant():
    completed = 0
    for seed in range(3):
        state = k6_state()
        try:
            run_all_stages(state, seed)
        except InvariantViolation:
            raise
        except (StageError, InfeasiblePartition):
            continue
        completed += 1
        params = state.params
        assert state.stage == Stage.DONE
        assert state.sums[1] == state.s_pairs[1].low
        assert state.finalized == set(state.partition.C)
        report = verify(state.graph, state.coloring, 2, modulus=params.Q)
        assert report.valid
        assert report.proper_mod == (params.Q, True)
        low, high = params.color_window
        assert low <= state.coloring.min_color <= state.coloring.max_color <= high
    assert completed >= 1


def test_lower_B_moves_B_to_its_low_element():
    state = epp_state()
    assign_lists(state, 0, budget=20)
    recolor_lists(state)
    previous = state.copy()
    lower_B(state)
    assert state.sums[1] == state.s_pairs[1].low
    if previous.sums[1] == previous.s_pairs[1].high:
        assert previous.sums[1] - state.sums[1] == state.params.Q
    check_stage_invariants(state, previous=previous)


def test_invariants_catch_tampering():
    state = k6_state()
    process_A(state)
    edge = state.graph.edges[0]
    tampered = state.copy()
    tampered.coloring[edge] = tampered.coloring[edge] + 1
    with pytest.raises(InvariantViolation):
        check_stage_invariants(tampered)

    moved = state.copy()
    moved.s_pairs[0] = SumPair(low=state.s_pairs[0].low + 3, Q=state.params.Q)
    with pytest.raises(InvariantViolation):
        check_stage_invariants(moved, previous=state)


def test_window_is_enforced_on_every_edit():
    state = k6_state()
    with pytest.raises(InvariantViolation):
        state.set_color((0, 1), 1)


# Whole runs
def test_edgeless_graph():
    coloring, report = run_pipeline(Graph(3, []), 2, ScaleProfile.desk())
    assert len(coloring) == 0
    assert report.outcome == "success"
    assert report.attempts == 0
    assert report.max_color == 0


def test_isolated_edge_is_rejected_before_any_work():
    with pytest.raises(IsolatedEdge):
        run_pipeline(Graph(5, [(0, 1), (1, 2), (3, 4)]), 2, ScaleProfile.desk())


def test_unusable_frame_falls_back():
    g = petersen()
    config = PipelineConfig(fallback="greedy")
    coloring, report = run_pipeline(g, 2, ScaleProfile.desk(), config=config, q_override=3, Q_override=3)
    assert report.outcome == "fallback-greedy"
    assert report.attempts == 0
    assert report.failures
    assert verify(g, coloring, 2).valid

    with pytest.raises(PipelineFailed):
        run_pipeline(g, 2, ScaleProfile.desk(), config=PipelineConfig(fallback="fail"), q_override=3, Q_override=3)


def test_exact_fallback_on_small_graphs():
    g = cycle(5)
    coloring, report = run_pipeline(g, 2, ScaleProfile.desk(), config=PipelineConfig(fallback="exact"), q_override=1)
    assert report.outcome == "fallback-exact"
    assert coloring.max_color == exact_index(g, 2).k
    assert verify(g, coloring, 2).valid


def test_fallback_always_yields_a_valid_coloring():
    g = petersen()
    coloring, report = run_pipeline(g, 2, ScaleProfile.desk(), seed=5, budget=2)
    assert set(report.stage_retries) == set(STAGE_KEYS)
    assert report.stage_retries["invariants"] == 0
    assert report.stage_retries["verify"] == 0
    assert report.verify.proper and report.verify.distinguishing_r
    assert verify(g, coloring, 2).valid


def test_replay_is_deterministic():
    g = petersen()
    config = PipelineConfig(budget=3, sampler_budget=50)
    first = run_pipeline(g, 2, ScaleProfile.desk(), seed=9, config=config)
    second = run_pipeline(g, 2, ScaleProfile.desk(), seed=9, config=config)
    assert first[0] == second[0]
    assert first[1].to_json() == second[1].to_json()
    assert first[1].wall_time is None


def test_timing_is_opt_in():
    _, report = run_pipeline(Graph(3, []), 2, ScaleProfile.desk(), timing=True)
    assert report.wall_time is not None


def test_stage_errors_are_counted_by_stage(monkeypatch):
    def no_sum(state, ties=None, audit=False):
        raise NoAdmissibleSum("forced", stage="A")

    monkeypatch.setattr(runner, "process_A", no_sum)
    g = random_regular(20, 6, seed=2)
    config = PipelineConfig(budget=2, local_retries=1, sampler_budget=50)
    _, report = run_pipeline(g, 4, ScaleProfile.desk(), config=config)
    assert report.outcome == "fallback-greedy"
    assert report.attempts == 2
    assert report.stage_retries["A"] == 4
    assert len(report.failures) == 2


def test_construction_succeeds_on_dense_regular_graphs():
    g = random_regular(30, 8, seed=11)
    outcomes = []
    for seed in range(3):
        coloring, report = run_pipeline(g, 4, ScaleProfile.desk(), seed=seed)
        assert report.stage_retries["invariants"] == 0
        assert report.stage_retries["verify"] == 0
        outcomes.append(report.outcome)
        if report.outcome == "success":
            params = report.params
            assert (params.q, params.Q) == (288, 1440)
            checked = verify(g, coloring, 4, modulus=params.Q)
            assert checked.valid
            assert checked.proper_mod == (params.Q, True)
            assert coloring.min_color >= params.q - params.delta_max
            assert coloring.max_color <= report.bound_2Q_plus_2q
    assert "success" in outcomes


@pytest.mark.slow
@pytest.mark.parametrize("n", [40, 80])
@pytest.mark.parametrize("d", [8, 12])
def test_construction_sweep_over_regular_graphs(n, d):
    outcomes = []
    for seed in range(25):
        g = random_regular(n, d, seed=seed)
        coloring, report = run_pipeline(g, 4, ScaleProfile.desk(), seed=seed)
        assert report.stage_retries["invariants"] == 0
        assert report.stage_retries["verify"] == 0
        outcomes.append(report.outcome)
        if report.outcome != "success":
            continue
        params = report.params
        assert params.delta_max == d
        checked = verify(g, coloring, 4, modulus=params.Q)
        assert checked.valid
        assert checked.proper_mod == (params.Q, True)
        assert coloring.min_color >= params.q - params.delta_max
        assert coloring.max_color <= 2 * params.Q + 2 * params.q
    assert outcomes.count("success") >= 23
