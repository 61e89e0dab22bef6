"""Stages turning the shifted Vizing coloring into an r-distant sum-distinguishing one.

Vertices of A then B are processed along the ordering, each pinned to a pair {l, l+Q}
disjoint from the pairs of its processed r-neighbours. Edges inside C are split into a
sparse part E' and its complement E''. E'' fixes the sums in C to be non-zero mod 3,
E' receives additions from random lists, B is lowered onto the smaller element of its
pair, and finally each C vertex moves its sum by multiples of Q through its A-edges.
"""

import heapq
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from chromasum.core.coloring import shift, weighted_degrees
from chromasum.core.graph import Edge, Graph, NeighborhoodCache, canonical_edge
from chromasum.core.models import LemmaFailure, ListEventReport
from chromasum.core.params import LIST_SIZE, LIST_SPAN, MAX_LIST_OFFSET, PlanParams, list_family, pair_low
from chromasum.core.vizing import vizing_color
from chromasum.errors import (
    BudgetExhausted,
    InfeasiblePartition,
    InvariantViolation,
    IsolatedEdge,
    ListDegreeExceeded,
    MissingCEdge,
    NoAdmissibleAddition,
    NoAdmissibleSum,
    NoAvailableList,
    UnprocessedBackwardNeighbor,
)
from chromasum.lemmas.ordering import BAND_A, BAND_B, BAND_C, BAND_NAMES, OrderingPartition
from chromasum.lemmas.sparse import SparseSample, SparseSubgraph, sample_sparse_subgraph
from chromasum.pipeline.state import PipelineState, Stage
from chromasum.util.rng import SeedLike, as_generator

logger = logging.getLogger(__name__)

# Number of admissible candidates a randomized retry chooses from.
TIE_WINDOW = 8
SAME_LIST_LIMIT = LIST_SIZE - 1  # 31
RESIDUE_WINDOW = SAME_LIST_LIMIT * MAX_LIST_OFFSET  # 31 * 93
WINDOW_CROWDING = 6000


# Structural prerequisites
def partition_failures(g: Graph, part: OrderingPartition) -> List[LemmaFailure]:
    """Vertices breaking what the construction needs from the bands.

    Every A∪B vertex with edges needs a neighbour in C (its anchor) and every C vertex with
    edges needs two neighbours in C, so that both E' and E'' can touch it.
    """
    failures = []
    for v in g.vertices():
        if g.degree(v) == 0:
            continue
        d_c = part.d_in(v, BAND_C)
        if part.band[v] != BAND_C and d_c == 0:
            failures.append(
                LemmaFailure(vertex=v, tag="partition", observed=0, bound=1, detail=f"{part.band_of(v)} vertex {v} has no neighbour in C")
            )
        elif part.band[v] == BAND_C and d_c < 2:
            failures.append(
                LemmaFailure(vertex=v, tag="partition", observed=d_c, bound=2, detail=f"C vertex {v} has {d_c} < 2 neighbours in C")
            )
    return failures


def partition_issues(g: Graph, part: OrderingPartition) -> List[str]:
    return [failure.detail for failure in partition_failures(g, part)]


def init_state(
    g: Graph,
    params: PlanParams,
    partition: OrderingPartition,
    cache: Optional[NeighborhoodCache] = None,
) -> PipelineState:
    """Shift a Vizing coloring onto [Q+q−Δ, Q+q] and pick the anchor edge e_v of every A∪B vertex.

    Raises:
        IsolatedEdge: if some component is a single edge.
        InfeasiblePartition: if an A∪B vertex has no neighbour in C.
    """
    if g.has_isolated_edge():
        raise IsolatedEdge("Graphs with an isolated edge have no sum-distinguishing coloring")
    if cache is None or cache.graph is not g or cache.r != params.r:
        cache = NeighborhoodCache(g, params.r)

    anchors: Dict[int, Edge] = {}
    for v in g.vertices():
        if partition.band[v] == BAND_C or g.degree(v) == 0:
            continue
        in_c = [u for u in g.neighbors(v) if partition.band[u] == BAND_C]
        if not in_c:
            raise InfeasiblePartition(f"{partition.band_of(v)} vertex {v} has no neighbour in C")
        anchors[v] = canonical_edge(v, in_c[0])

    coloring = shift(vizing_color(g), params.initial_offset)
    state = PipelineState(
        graph=g,
        params=params,
        partition=partition,
        cache=cache,
        coloring=coloring,
        sums=weighted_degrees(g, coloring),
        s_pairs=[None] * g.n,
        anchor_edge=anchors,
    )
    logger.info(f"Initialized state: bands {partition.sizes()}, colors {coloring.min_color}..{coloring.max_color}")
    return state


# A and B processing
@dataclass(frozen=True)
class MoveSet:
    """One admissible modification at a vertex.

    ``backward`` holds (edge, ±Q) shifts that keep the far end inside its pair, ``forward``
    the non-anchor forward edges receiving +q, ``anchor`` the new color of e_v (None keeps it).
    """

    backward: Tuple[Tuple[Edge, int], ...] = ()
    forward: Tuple[Edge, ...] = ()
    anchor: Optional[Tuple[Edge, int]] = None

    @property
    def net_shift(self) -> int:
        return sum(1 if delta > 0 else -1 for _, delta in self.backward)

    def apply(self, state: PipelineState) -> None:
        for edge, delta in self.backward:
            state.add_to_color(edge, delta)
        for edge in self.forward:
            state.add_to_color(edge, state.params.q)
        if self.anchor is not None:
            state.set_color(*self.anchor)


class _MoveFrame:
    """Everything rule-bound about one vertex: which edges move and by how much."""

    def __init__(self, state: PipelineState, v: int):
        g, part, params = state.graph, state.partition, state.params
        position = part.position
        stage = BAND_NAMES[part.band[v]]
        self.state = state
        self.v = v
        self.q, self.Q = params.q, params.Q

        backward = sorted((u for u in g.neighbors(v) if position[u] < position[v]), key=position.__getitem__)
        for u in backward:
            if not state.is_processed(u):
                raise UnprocessedBackwardNeighbor(f"Vertex {v} reached before its backward neighbour {u}", stage=stage)
        self.lows = [canonical_edge(v, u) for u in backward if state.at_low(u)]
        self.highs = [canonical_edge(v, u) for u in backward if not state.at_low(u)]

        self.anchor = state.anchor_edge.get(v)
        self.forward = [
            canonical_edge(v, u)
            for u in sorted(g.neighbors(v), key=position.__getitem__)
            if position[u] > position[v] and canonical_edge(v, u) != self.anchor
        ]

        if self.anchor is None:
            self.current_target = 0
            self.targets = [0]
        else:
            self.current_target = state.coloring[self.anchor]
            blocked = {state.coloring[f] % self.q for f in _adjacent_edges(g, self.anchor)}
            window = range(self.Q + self.q, self.Q + 2 * self.q + 1)
            self.targets = sorted({self.current_target} | {t for t in window if t % self.q not in blocked})
        self.base = state.sums[v] - self.current_target

        # m = J·(Q/q) + a with J net ±Q shifts and a forward additions; keep the smallest |J| per m
        ratio = self.Q // self.q
        self.decomposition: Dict[int, Tuple[int, int]] = {}
        for j in sorted(range(-len(self.highs), len(self.lows) + 1), key=lambda j: (abs(j), j)):
            for a in range(len(self.forward) + 1):
                self.decomposition.setdefault(j * ratio + a, (j, a))

    def _sums_for(self, m: int) -> Iterator[Tuple[int, int, int]]:
        offset = self.base + m * self.q
        return ((offset + t, t, m) for t in self.targets)

    def candidates(self) -> Iterator[Tuple[int, int, int]]:
        """(sum, anchor target, m) in increasing order of sum then target."""
        return heapq.merge(*(self._sums_for(m) for m in sorted(self.decomposition)))

    def moves(self, t: int, m: int) -> MoveSet:
        j, a = self.decomposition[m]
        if j > 0:
            backward = tuple((e, self.Q) for e in self.lows[:j])
        else:
            backward = tuple((e, -self.Q) for e in self.highs[: -j])
        anchor = None if self.anchor is None or t == self.current_target else (self.anchor, t)
        return MoveSet(backward=backward, forward=tuple(self.forward[:a]), anchor=anchor)


def _adjacent_edges(g: Graph, edge: Edge) -> List[Edge]:
    u, v = edge
    return [canonical_edge(x, w) for x in (u, v) for w in g.neighbors(x) if canonical_edge(x, w) != edge]


def attainable_sums(state: PipelineState, v: int) -> Dict[int, MoveSet]:
    """Every sum reachable at ``v`` by admissible moves, with its preferred MoveSet.

    Raises:
        UnprocessedBackwardNeighbor: if a backward neighbour has no pair yet.
    """
    frame = _MoveFrame(state, v)
    reachable: Dict[int, MoveSet] = {}
    for s, t, m in frame.candidates():
        if s not in reachable:
            reachable[s] = frame.moves(t, m)
    return reachable


def _blocked_lows(state: PipelineState, v: int) -> set:
    return {state.s_pairs[u].low for u in state.cache.members(v) if state.s_pairs[u] is not None}


def _settle_vertex(
    state: PipelineState,
    v: int,
    admissible: Callable[[int], bool],
    ties: Optional[np.random.Generator],
) -> PipelineState:
    frame = _MoveFrame(state, v)
    stage = BAND_NAMES[state.partition.band[v]]

    picks = []
    for s, t, m in frame.candidates():
        if admissible(s):
            picks.append((s, t, m))
            if ties is None or len(picks) >= TIE_WINDOW:
                break
    if not picks:
        raise NoAdmissibleSum(f"No admissible sum at {stage} vertex {v} (degree {state.graph.degree(v)})", stage=stage)

    s, t, m = picks[0] if ties is None else picks[int(ties.integers(len(picks)))]
    moves = frame.moves(t, m)
    moves.apply(state)
    for edge, _ in moves.backward:
        u = edge[0] if edge[1] == v else edge[1]
        if state.sums[u] not in state.s_pairs[u]:
            raise InvariantViolation(f"Moving {edge} pushed {u} out of its pair", stage=stage)
    if state.sums[v] != s:
        raise InvariantViolation(f"Expected sum {s} at {v}, found {state.sums[v]}", stage=stage)

    pair = state.pin(v)
    logger.debug(f"{stage} vertex {v}: sum {s} (pair {pair.low}/{pair.high}, shift {moves.net_shift}, +q x{len(moves.forward)})")
    return state


def process_vertex_A(state: PipelineState, v: int, ties: Optional[np.random.Generator] = None) -> PipelineState:
    """Pin an A vertex to a pair with elements divisible by 3, disjoint from its processed r-neighbours."""
    blocked = _blocked_lows(state, v)
    Q = state.params.Q
    return _settle_vertex(state, v, lambda s: s % 3 == 0 and pair_low(s, Q) not in blocked, ties)


def process_vertex_B(state: PipelineState, v: int, ties: Optional[np.random.Generator] = None) -> PipelineState:
    """Pin a B vertex to a pair disjoint from its processed r-neighbours."""
    blocked = _blocked_lows(state, v)
    Q = state.params.Q
    return _settle_vertex(state, v, lambda s: pair_low(s, Q) not in blocked, ties)


def _process_band(
    state: PipelineState,
    band: int,
    settle: Callable[[PipelineState, int, Optional[np.random.Generator]], PipelineState],
    ties: Optional[np.random.Generator],
    audit: bool,
) -> None:
    for v in state.partition.ordered(band):
        if audit:
            logger.debug(f"{BAND_NAMES[band]} vertex {v}: {len(attainable_sums(state, v))} attainable sums")
        settle(state, v, ties)


def process_A(state: PipelineState, ties: Optional[np.random.Generator] = None, audit: bool = False) -> PipelineState:
    _process_band(state, BAND_A, process_vertex_A, ties, audit)
    state.stage = Stage.A_PROCESSED
    logger.info(f"Processed {len(state.partition.A)} A vertices")
    return state


def process_B(state: PipelineState, ties: Optional[np.random.Generator] = None, audit: bool = False) -> PipelineState:
    _process_band(state, BAND_B, process_vertex_B, ties, audit)
    state.stage = Stage.B_PROCESSED
    logger.info(f"Processed {len(state.partition.B)} B vertices")
    return state


# Edges inside C
def split_c_edges(
    state: PipelineState,
    seed: SeedLike,
    budget: int,
    strict: bool = False,
) -> SparseSample:
    """Sample E' inside G[C] so that E'' = E(G[C]) ∖ E' still touches every C vertex.

    Raises:
        InfeasiblePartition: if no draw within budget leaves E'' spanning.
    """
    part, params = state.partition, state.params
    host = state.graph.induced(part.C)
    support = [v for v in sorted(part.C) if host.degree(v) > 0]

    def complement_spans(sub: SparseSubgraph) -> List[LemmaFailure]:
        return [
            LemmaFailure(vertex=v, tag="partition", observed=0, bound=1, detail=f"E'' misses C vertex {v}")
            for v in support
            if host.degree(v) - sub.degree(v) < 1
        ]

    sample = sample_sparse_subgraph(
        host, params.delta_max, params.profile, seed, budget, strict=strict, support=support, extra_check=complement_spans
    )
    if sample.report.severity()[0]:
        raise InfeasiblePartition(f"No E' within {budget} draws leaves E'' spanning")

    state.e_prime = sample.subgraph.edges
    state.e_dprime = tuple(sample.subgraph.complement())
    logger.info(f"Split G[C]: |E'|={len(state.e_prime)}, |E''|={len(state.e_dprime)} after {sample.iterations} draws")
    return sample


def process_epp(state: PipelineState) -> PipelineState:
    """Set E' to q, then add x in [0, 6Δ] to each E'' edge so both end sums become non-zero mod 3.

    Raises:
        NoAdmissibleAddition: if every addition is blocked for some E'' edge.
    """
    if state.stage != Stage.B_PROCESSED:
        raise ValueError(f"process_epp needs stage {Stage.B_PROCESSED.value}, state is at {state.stage.value}")
    g, params = state.graph, state.params
    q = params.q

    covered = {v for e in state.e_dprime for v in e}
    missing = [v for v in state.partition.C if state.partition.d_in(v, BAND_C) > 0 and v not in covered]
    if missing:
        raise InfeasiblePartition(f"E'' does not touch C vertices {sorted(missing)[:5]}")

    for edge in sorted(state.e_prime):
        state.set_color(edge, q)

    for edge in state.e_dprime:
        u, v = edge
        color = state.coloring[edge]
        blocked = {state.coloring[f] % q for f in _adjacent_edges(g, edge) if f not in state.e_prime}
        for x in range(6 * params.delta_max + 1):
            if (state.sums[u] + x) % 3 and (state.sums[v] + x) % 3 and (color + x) % q not in blocked:
                state.add_to_color(edge, x)
                break
        else:
            raise NoAdmissibleAddition(f"No addition in [0, {6 * params.delta_max}] fits E'' edge {edge}", stage="epp")

    state.stage = Stage.EPP_DONE
    return state


# Addition lists for E'
def _available_lists(state: PipelineState) -> Dict[Edge, List[int]]:
    """Per E' edge, indices of lists with no element clashing mod Q with an adjacent non-E' edge."""
    params = state.params
    q, Q = params.q, params.Q
    count = Q // LIST_SPAN
    available = {}
    for edge in sorted(state.e_prime):
        blocked = set()
        for f in _adjacent_edges(state.graph, edge):
            if f in state.e_prime:
                continue
            addition = (state.coloring[f] - q) % Q
            if addition % 3 == 0:
                blocked.add(addition // LIST_SPAN)
        available[edge] = [i for i in range(count) if i not in blocked]
        if not available[edge]:
            raise NoAvailableList(f"Every addition list is blocked for E' edge {edge}", stage="lists")
    return available


def check_list_events(state: PipelineState) -> ListEventReport:
    """Evaluate same-list crowding at every C vertex and residue-window crowding of comparable C r-neighbours."""
    g, part, params = state.graph, state.partition, state.params
    Q = params.Q
    rho = params.profile.relax
    lam3 = params.profile.lambda3(params.delta_max)
    failures: List[LemmaFailure] = []

    max_same = 0
    for v in sorted(part.C):
        crowded = 0
        for edge in g.incident_edges(v):
            if edge not in state.e_prime:
                continue
            chosen = state.lists[edge]
            if any(f in state.e_prime and state.lists[f] == chosen for f in _adjacent_edges(g, edge)):
                crowded += 1
        max_same = max(max_same, crowded)
        if crowded > SAME_LIST_LIMIT:
            failures.append(LemmaFailure(vertex=v, tag="R", observed=crowded, bound=SAME_LIST_LIMIT))

    eligible = np.array([t % 3 != 0 for t in range(Q)])
    max_window = 0
    for v in sorted(part.C):
        d = g.degree(v)
        residues = [
            state.sums[u] % Q
            for u in state.cache.members(v)
            if part.band[u] == BAND_C and params.comparable(g.degree(u), d)
        ]
        if not residues:
            continue
        if 2 * RESIDUE_WINDOW + 1 >= Q:
            crowd, where = len(residues), None
        else:
            counts = np.bincount(np.asarray(residues), minlength=Q)
            wrapped = np.concatenate([counts[-RESIDUE_WINDOW:], counts, counts[:RESIDUE_WINDOW]])
            prefix = np.concatenate([[0], np.cumsum(wrapped)])
            windows = prefix[2 * RESIDUE_WINDOW + 1 : 2 * RESIDUE_WINDOW + 1 + Q] - prefix[:Q]
            windows = np.where(eligible, windows, 0)
            where = int(np.argmax(windows))
            crowd = int(windows[where])
        max_window = max(max_window, crowd)
        bound = WINDOW_CROWDING * d / lam3
        bound = bound * rho if bound else 0.0
        if crowd > bound:
            failures.append(LemmaFailure(vertex=v, tag="T", observed=crowd, bound=bound, detail=f"t={where}"))

    return ListEventReport(max_same_list_edges=max_same, max_window_count=max_window, failures=failures)


def assign_lists(state: PipelineState, seed: SeedLike, budget: int, strict: bool = False) -> ListEventReport:
    """Pick an entirely available list for every E' edge and set its color to q + min L.

    Raises:
        NoAvailableList: if some E' edge has no available list.
        BudgetExhausted: strict mode, when no assignment avoids all events within budget.
    """
    if not state.stage.reached(Stage.EPP_DONE):
        raise ValueError(f"assign_lists needs stage {Stage.EPP_DONE.value}, state is at {state.stage.value}")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = as_generator(seed)
    lists = list_family(state.params.Q)
    available = _available_lists(state)
    q = state.params.q

    def apply(choice: Dict[Edge, int]) -> None:
        state.lists = dict(choice)
        for edge, index in choice.items():
            state.set_color(edge, q + lists[index][0])

    best: Optional[Tuple[Dict[Edge, int], ListEventReport]] = None
    for iteration in range(1, budget + 1):
        choice = {edge: options[int(rng.integers(len(options)))] for edge, options in available.items()}
        apply(choice)
        report = check_list_events(state)
        if report.passed:
            state.stage = Stage.LISTS_ASSIGNED
            logger.info(f"Assigned lists to {len(choice)} E' edges after {iteration} samples")
            return report
        if best is None or len(report.failures) < len(best[1].failures):
            best = (choice, report)

    if strict:
        raise BudgetExhausted(f"No list assignment avoided all events in {budget} samples")
    logger.warning(f"List budget {budget} exhausted; keeping assignment with {len(best[1].failures)} events")
    apply(best[0])
    state.stage = Stage.LISTS_ASSIGNED
    return best[1]


def recolor_lists(state: PipelineState) -> PipelineState:
    """Properly recolor each same-list subgraph of E' with additions from its own list.

    Raises:
        ListDegreeExceeded: if a same-list subgraph has maximum degree above 31.
    """
    lists = list_family(state.params.Q)
    q = state.params.q
    groups: Dict[int, List[Edge]] = {}
    for edge in sorted(state.e_prime):
        groups.setdefault(state.lists[edge], []).append(edge)

    for index, edges in sorted(groups.items()):
        sub = state.graph.edge_subgraph(edges)
        if sub.max_degree > SAME_LIST_LIMIT:
            raise ListDegreeExceeded(f"List {index} subgraph has maximum degree {sub.max_degree}", stage="recolor")
        for edge, color in vizing_color(sub).items():
            state.set_color(edge, q + lists[index][color - 1])

    state.stage = Stage.RECOLORED
    return state


# B lowering and the final C pass
def lower_B(state: PipelineState) -> PipelineState:
    """Move every B vertex onto the smaller element of its pair by subtracting Q from one C edge.

    Raises:
        MissingCEdge: if a B vertex at its larger element has no C edge in [Q+q−Δ, Q+2q].
    """
    params = state.params
    Q, q = params.Q, params.q
    low, high = Q + q - params.delta_max, Q + 2 * q
    part = state.partition

    for v in part.ordered(BAND_B):
        if state.graph.degree(v) == 0:
            continue
        pair = state.s_pairs[v]
        if state.sums[v] == pair.low:
            continue
        if state.sums[v] != pair.high:
            raise InvariantViolation(f"B vertex {v} left its pair", stage="lower_B")

        anchor = state.anchor_edge[v]
        options = [anchor] + [canonical_edge(v, u) for u in state.neighbors_in(v, BAND_C) if canonical_edge(v, u) != anchor]
        edge = next((e for e in options if low <= state.coloring[e] <= high), None)
        if edge is None:
            raise MissingCEdge(f"B vertex {v} has no C edge to lower", stage="lower_B")
        state.add_to_color(edge, -Q)

    state.stage = Stage.B_LOWERED
    return state


def finalize_C(state: PipelineState, ties: Optional[np.random.Generator] = None) -> PipelineState:
    """Give every C vertex a sum avoiding B r-neighbours and finalized comparable C r-neighbours.

    Available sums form the progression current + kQ for k in [−h, l], where l (h) counts
    A neighbours at the lower (upper) element of their pair; k closest to 0 wins.

    Raises:
        NoAdmissibleSum: if every k collides.
    """
    g, part, params = state.graph, state.partition, state.params
    Q = params.Q

    for v in part.ordered(BAND_C):
        a_neighbors = state.neighbors_in(v, BAND_A)
        lows = [canonical_edge(v, a) for a in a_neighbors if state.at_low(a)]
        highs = [canonical_edge(v, a) for a in a_neighbors if not state.at_low(a)]

        d = g.degree(v)
        forbidden = set()
        for u in state.cache.members(v):
            if part.band[u] == BAND_B or (u in state.finalized and params.comparable(g.degree(u), d)):
                forbidden.add(state.sums[u])

        ks = sorted(range(-len(highs), len(lows) + 1), key=lambda k: (abs(k), k))
        admissible = [k for k in ks if state.sums[v] + k * Q not in forbidden]
        if not admissible:
            raise NoAdmissibleSum(f"Every sum at C vertex {v} collides ({len(ks)} options)", stage="finalize_C")

        k = admissible[0] if ties is None else admissible[int(ties.integers(min(len(admissible), TIE_WINDOW)))]
        for edge in lows[:k] if k > 0 else highs[: -k] if k < 0 else ():
            state.add_to_color(edge, Q if k > 0 else -Q)
        state.finalized.add(v)

    state.stage = Stage.DONE
    logger.info(f"Finalized {len(state.finalized)} C vertices")
    return state


# Stage assertions
def _modular_clash(g: Graph, state: PipelineState, modulus: int, skip=frozenset()) -> Optional[str]:
    for w in g.vertices():
        seen: Dict[int, Edge] = {}
        for edge in g.incident_edges(w):
            if edge in skip:
                continue
            residue = state.coloring[edge] % modulus
            if residue in seen:
                return f"edges {seen[residue]} and {edge} agree mod {modulus}"
            seen[residue] = edge
    return None


def check_stage_invariants(state: PipelineState, previous: Optional[PipelineState] = None) -> None:
    """Assert the invariants that must hold at the current stage boundary.

    Raises:
        InvariantViolation: on the first failed assertion.
    """
    g, part, params = state.graph, state.partition, state.params
    tag = state.stage.value

    def fail(message: str) -> None:
        raise InvariantViolation(message, stage=tag)

    if state.recomputed_sums() != state.sums:
        fail("incrementally maintained sums differ from a full recomputation")

    low, high = params.color_window
    for edge, color in state.coloring.items():
        if not low <= color <= high:
            fail(f"color {color} of {edge} outside [{low}, {high}]")

    for v in state.processed:
        if state.sums[v] not in state.s_pairs[v]:
            fail(f"sum {state.sums[v]} of {v} left its pair {state.s_pairs[v]}")
        for u in state.cache.members(v):
            if u < v and state.s_pairs[u] is not None and state.s_pairs[u].low == state.s_pairs[v].low:
                fail(f"r-neighbours {u} and {v} share the pair {state.s_pairs[v]}")
        if part.band[v] == BAND_A and g.degree(v) and state.sums[v] % 3:
            fail(f"A vertex {v} has sum {state.sums[v]} not divisible by 3")

    if state.stage.reached(Stage.EPP_DONE):
        for v in part.C:
            if g.degree(v) and state.sums[v] % 3 == 0:
                fail(f"C vertex {v} has sum {state.sums[v]} divisible by 3")

    if state.stage.reached(Stage.RECOLORED):
        clash = _modular_clash(g, state, params.Q)
    elif state.stage.reached(Stage.EPP_DONE):
        clash = _modular_clash(g, state, params.q, skip=state.e_prime)
    else:
        clash = _modular_clash(g, state, params.q)
    if clash:
        fail(clash)

    if previous is not None:
        for v, pair in enumerate(previous.s_pairs):
            if pair is not None and state.s_pairs[v] != pair:
                fail(f"pair of {v} changed from {pair} to {state.s_pairs[v]}")
        for v in previous.finalized:
            if state.sums[v] != previous.sums[v]:
                fail(f"finalized sum of {v} changed")
        if previous.stage.reached(Stage.B_LOWERED):
            for v in part.B:
                if state.sums[v] != previous.sums[v]:
                    fail(f"lowered sum of B vertex {v} changed")
