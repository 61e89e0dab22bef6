import math
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromasum.core.params import (
    ScaleProfile,
    SumPair,
    compute_params,
    feasibility_issues,
    list_family,
    pair_low,
    pair_of,
    pairs_disjoint,
    q_target,
    theorem2_bound,
    theorem3_bound,
)
from chromasum.errors import InfeasibleParams, MixedQ


def test_reference_frame():
    params = compute_params(10, 4)
    assert (params.q, params.Q) == (480, 2880)
    assert params.color_window == (470, 6720)
    assert params.initial_offset == 2880 + 480 - 10 - 1
    assert feasibility_issues(params) == []


def test_small_frame():
    params = compute_params(3, 4)
    assert (params.q, params.Q) == (96, 96)


@settings(max_examples=100, deadline=None)
@given(delta=st.integers(min_value=2, max_value=100), r=st.integers(min_value=2, max_value=6))
def test_q_and_Q_are_least_multiples(delta, r):
    params = compute_params(delta, r)
    x = q_target(delta, r)
    assert params.q % 96 == 0
    assert Decimal(params.q) >= x > Decimal(params.q - 96)
    floor = 2 * Decimal(delta) ** (r - 1) + x
    assert params.Q % params.q == 0
    assert Decimal(params.Q) >= floor > Decimal(params.Q - params.q)


def test_compute_params_errors():
    with pytest.raises(ValueError):
        compute_params(1, 2)
    with pytest.raises(ValueError):
        compute_params(3, 0)
    with pytest.raises(InfeasibleParams):
        compute_params(3, 2, q_override=96, Q_override=100)


def test_feasibility_issues():
    assert feasibility_issues(compute_params(100, 2))
    assert feasibility_issues(compute_params(3, 2, q_override=3, Q_override=3))


def test_pairs():
    assert pair_low(100, 96) == 4
    assert pair_low(4, 96) == 4
    assert pair_of(100, 96) == SumPair(low=4, Q=96)
    assert 100 in pair_of(4, 96)
    assert list(pair_of(-1, 96)) == [-97, -1]
    assert not pairs_disjoint(pair_of(4, 96), pair_of(100, 96))
    assert pairs_disjoint(pair_of(4, 96), pair_of(5, 96))
    with pytest.raises(MixedQ):
        pairs_disjoint(pair_of(4, 96), pair_of(4, 192))
    with pytest.raises(ValueError):
        pair_of(4, 0)


@settings(max_examples=200)
@given(s=st.integers(min_value=-(10**9), max_value=10**9), Q=st.integers(min_value=1, max_value=10**5))
def test_every_sum_lies_in_exactly_one_pair(s, Q):
    pair = pair_of(s, Q)
    assert s in pair
    assert pair_of(pair.low, Q) == pair == pair_of(pair.high, Q)


def test_list_family():
    lists = list_family(2880)
    assert len(lists) == 30
    assert lists[0] == tuple(range(0, 94, 3))
    assert lists[-1][-1] == 2877
    assert sorted(a for lst in lists for a in lst) == list(range(0, 2880, 3))
    with pytest.raises(ValueError):
        list_family(100)


def test_profiles():
    desk = ScaleProfile.desk()
    assert desk.lambda2(10) == 4.0
    assert desk.lambda3(1000) == 2.0
    assert ScaleProfile.desk(c2=0.5).lambda2(10) == 1.0
    assert ScaleProfile.paper().lambda2(10) == pytest.approx(math.log(10) ** 2)
    assert ScaleProfile.from_name("paper", relax=3).relax == 3
    with pytest.raises(ValueError):
        ScaleProfile.desk(relax=0.5)
    with pytest.raises(ValueError):
        ScaleProfile.from_name("fancy")


def test_comparable_degrees():
    params = compute_params(3, 4, ScaleProfile.desk())
    # window (93, 384)
    assert params.comparable(1, 4)
    assert not params.comparable(1, 5)
    assert params.comparable(3, 3)


def test_bounds():
    assert theorem2_bound(3, 4) == 162
    assert theorem3_bound(10, 4) == pytest.approx(4000 * (1 + 3 / (2 * math.log(10))) + 384)
