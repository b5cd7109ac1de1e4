"""
tests/test_mdp.py

Zero-delay dynamic programming and the optimality checks.
"""

import pytest

from src.core.params import ProtocolParams
from src.core.state import ActionKind, Arrival, CompactState
from src.mdp import (
    ZeroDelayState,
    ZeroDelayStateSpace,
    analytic_agreement,
    evaluate_policy,
    finite_horizon_bracket,
    monotonicity_violations,
    policy_value_zero_delay,
    prescribed_action,
    value_iteration_zero_delay,
    verify_propositions,
)
from src.mdp.optimality import argmax_at, rule_label
from src.policies import BaitAndSwitchPolicy, PrivateMiningPolicy, create_policy


def _params(beta: float, k: int) -> ProtocolParams:
    return ProtocolParams.from_rates(1.0, beta, 0.0, k=k)


def test_state_space_reductions():
    space = ZeroDelayStateSpace(3, 10)
    assert space.canonical(4, 3, 5) == space.violation
    assert space.is_cap(space.canonical(0, 12, 12))
    # above k only the deficit matters
    assert space.canonical(5, 7, 7) == ZeroDelayState(1, 3, 3)
    # the higher branch is capped at max(k, d)
    assert space.canonical(0, 1, 6) == ZeroDelayState(0, 1, 3)
    assert len(space) > 0 and space.states[0] == ZeroDelayState(0, 0, 0)


def test_state_space_arguments_are_checked():
    with pytest.raises(ValueError):
        ZeroDelayStateSpace(0, 5)
    with pytest.raises(ValueError):
        ZeroDelayStateSpace(3, 2)
    with pytest.raises(ValueError):
        ZeroDelayState.from_compact(CompactState.of(0, 1, 1, (0.0, 2.0)))


def test_depth_one_matches_closed_form():
    table = value_iteration_zero_delay(_params(0.25, 1))
    lo, hi = table.genesis
    assert lo - 1e-9 <= 0.5 <= hi + 1e-9
    value, agrees = analytic_agreement(table)
    assert value == pytest.approx(0.5)
    assert agrees


def test_no_adversary_means_no_violation():
    table = value_iteration_zero_delay(_params(0.0, 2))
    assert table.genesis == pytest.approx((0.0, 0.0), abs=1e-12)


def test_bracket_is_tight(zero_delay):
    table = value_iteration_zero_delay(zero_delay)
    assert table.width() < 1e-8
    lo, hi = table.genesis
    assert 0.0 < lo <= hi < 1.0
    assert table.value(0, 0, 0) == table.genesis


def test_width_is_measured_at_genesis(zero_delay):
    table = value_iteration_zero_delay(zero_delay, deficit_cap=10)
    lo, hi = table.genesis
    assert table.width() == hi - lo
    # cap states keep their full terminal gap whatever the sweeps do
    assert table.widest() >= (1 / 3) ** 10 * (1 - 1e-9)
    assert table.width() < table.widest()


def test_finite_horizon_bracket_overlaps_dp():
    params = _params(0.25, 2)
    lo, hi = value_iteration_zero_delay(params).genesis
    fh_lo, fh_hi = finite_horizon_bracket(params, 8)
    assert fh_lo <= hi + 1e-9
    assert lo <= fh_hi + 1e-9
    assert fh_lo <= fh_hi


@pytest.mark.parametrize("beta", [0.1, 0.25, 0.4])
def test_prescribed_placements_are_optimal(beta):
    table = value_iteration_zero_delay(_params(beta, 3))
    report = verify_propositions(table)
    assert report.passed, [str(c.state) for c in report.failures[:5]]
    assert report.checks
    value, agrees = analytic_agreement(table)
    assert agrees, (value, table.genesis)


def test_equal_successors_tie(zero_delay):
    table = value_iteration_zero_delay(zero_delay)
    node = ZeroDelayState(1, 1, 1, Arrival.H)
    argmax = argmax_at(table, node, 1e-9)
    assert ActionKind.higher(2) in argmax
    assert ActionKind.lower(2) in argmax
    assert prescribed_action(node) == ActionKind.higher(2)


def test_prescribed_rules():
    assert prescribed_action(ZeroDelayState(1, 1, 3, Arrival.H)) == ActionKind.lower(2)
    assert prescribed_action(ZeroDelayState(0, 2, 2, Arrival.A)) == ActionKind.lower(1)
    assert prescribed_action(ZeroDelayState(2, 1, 2, Arrival.A)) == ActionKind.higher(3)
    assert rule_label(ZeroDelayState(1, 1, 3, Arrival.H)) == "H: d=m<n"
    with pytest.raises(ValueError):
        prescribed_action(ZeroDelayState(0, 0, 0))


def test_value_is_monotone(zero_delay):
    table = value_iteration_zero_delay(zero_delay)
    assert monotonicity_violations(table) == []


def test_bait_and_switch_reaches_optimum(zero_delay):
    optimum = value_iteration_zero_delay(zero_delay)
    bait = evaluate_policy(zero_delay, BaitAndSwitchPolicy(), optimum.deficit_cap)
    assert bait.genesis[1] >= optimum.genesis[0] - 1e-9
    assert bait.label == "bait-and-switch"


def test_private_mining_coincides_without_delay(zero_delay):
    bait = policy_value_zero_delay(zero_delay, BaitAndSwitchPolicy())
    private = policy_value_zero_delay(zero_delay, PrivateMiningPolicy())
    assert private == pytest.approx(bait, abs=1e-12)


def test_weaker_policy_stays_below_optimum(zero_delay):
    optimum = value_iteration_zero_delay(zero_delay)
    lazy = evaluate_policy(zero_delay, create_policy("always-higher"))
    assert lazy.genesis[0] <= optimum.genesis[1] + 1e-9


def test_cold_start_agrees_with_warm_start(zero_delay):
    warm = value_iteration_zero_delay(zero_delay, deficit_cap=10, tol=1e-11)
    cold = value_iteration_zero_delay(zero_delay, deficit_cap=10, tol=1e-11, warm_start=False)
    assert cold.genesis == pytest.approx(warm.genesis, abs=1e-8)


def test_positive_delay_is_rejected(bitcoin):
    with pytest.raises(ValueError):
        value_iteration_zero_delay(bitcoin)
    with pytest.raises(ValueError):
        finite_horizon_bracket(bitcoin, 3)
