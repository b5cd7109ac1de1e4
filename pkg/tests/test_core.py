"""
tests/test_core.py

Parameters, compact state and the transition table.
"""

import math

import pytest

from src.core.config import SolverConfig
from src.core.errors import InadmissibleActionError, OutOfToleranceError
from src.core.params import ProtocolParams
from src.core.state import ActionKind, Arrival, CompactState, StateClass
from src.core.transitions import (
    admissible_actions,
    advance_time,
    apply_action,
    classify,
    is_violation,
    public_height,
)

DELTA = 10.0


def test_params_derived_rates(bitcoin):
    assert bitcoin.lambda_ == pytest.approx(1 / 600)
    assert bitcoin.beta == pytest.approx(0.25)
    assert bitcoin.a == pytest.approx(1 / 2400)
    assert bitcoin.h == pytest.approx(1 / 800)


def test_tolerance_predicate():
    assert ProtocolParams(a=0.0, h=1.0, delta=100.0).within_tolerance()
    assert ProtocolParams(a=0.25, h=0.75, delta=0.0).within_tolerance()
    # 1/a = 2 is not above 1/h + delta = 2
    assert not ProtocolParams(a=0.5, h=1.0, delta=1.0).within_tolerance()


def test_require_tolerance_prints_inequality():
    params = ProtocolParams(a=0.5, h=1.0, delta=1.0)
    with pytest.raises(OutOfToleranceError) as exc:
        params.require_tolerance()
    assert "1/a > 1/h + delta" in str(exc.value)
    assert exc.value.exit_code == 3


def test_tolerance_beta_is_boundary():
    lam, delta = 1 / 600, 10.0
    beta = ProtocolParams.tolerance_beta(lam, delta)
    a, h = beta * lam, (1 - beta) * lam
    assert 1 / a == pytest.approx(1 / h + delta)
    assert ProtocolParams.tolerance_beta(1.0, 0.0) == 0.5


def test_params_reject_invalid_values():
    with pytest.raises(ValueError):
        ProtocolParams(a=-1.0, h=1.0)
    with pytest.raises(ValueError):
        ProtocolParams(a=0.1, h=0.0)
    with pytest.raises(ValueError):
        ProtocolParams(a=0.1, h=1.0, k=0)
    with pytest.raises(ValueError):
        ProtocolParams.from_rates(1.0, 1.0)


def test_worked_trajectory():
    state = CompactState.of(1, 2, 3, (DELTA,))
    state = advance_time(state, DELTA / 3)
    assert state.timer_at(2) == pytest.approx(2 * DELTA / 3)

    state = apply_action(state.with_arrival(Arrival.A), ActionKind.lower(2), DELTA)
    assert (state.m, state.d, state.n) == (2, 2, 3)
    assert state.timers == pytest.approx((2 * DELTA / 3,))

    state = advance_time(state, 2 * DELTA / 3)
    assert state.timers == (0.0,)
    state = apply_action(state.with_arrival(Arrival.H), ActionKind.lower(3), DELTA)
    assert state == CompactState(3, 3, 3, (DELTA,))
    assert is_violation(state, 3)


def test_first_adversarial_block_extends_genesis():
    state = CompactState.genesis().with_arrival(Arrival.A)
    assert apply_action(state, ActionKind.higher(1), DELTA) == CompactState.of(0, 0, 1)


def test_advance_time_identity_and_floor():
    state = CompactState.of(1, 2, 3, (DELTA,))
    assert advance_time(state, 0.0) == state
    floored = advance_time(CompactState.of(0, 2, 2, (0.4, 0.9)), 2.0)
    assert floored.timers == (0.0, 0.0, 0.0)


def test_advance_time_rejects_pending_arrival():
    with pytest.raises(ValueError):
        advance_time(CompactState.genesis().with_arrival(Arrival.H), 1.0)


def test_violation_predicate():
    assert not is_violation(CompactState.genesis(), 1)
    assert not is_violation(CompactState.of(2, 3, 4, (0.0, 0.0)), 2)
    assert public_height(CompactState.of(2, 3, 4, (0.0, 0.0))) == 3


@pytest.mark.parametrize(
    "state, expected",
    [
        (CompactState.of(1, 1, 3, (0.5,)), StateClass.AHEAD),
        (CompactState.of(1, 2, 3, (0.1, 0.5)), StateClass.ON_TIME),
        (CompactState.of(1, 3, 3, (0.0, 0.0, 0.7)), StateClass.BEHIND),
    ],
)
def test_classify(state, expected):
    assert classify(state) is expected


def test_honest_block_at_public_height_is_rejected():
    state = CompactState.of(0, 1, 1, (0.0, 0.0)).with_arrival(Arrival.H)
    with pytest.raises(InadmissibleActionError) as exc:
        apply_action(state, ActionKind.higher(1), DELTA)
    assert "public height" in exc.value.condition


def test_lower_placement_above_m_plus_one_is_rejected():
    state = CompactState.of(1, 1, 3, (0.0,)).with_arrival(Arrival.A)
    with pytest.raises(InadmissibleActionError):
        apply_action(state, ActionKind.lower(3), DELTA)


def test_violation_is_absorbing_with_depth():
    state = CompactState(3, 3, 3, (DELTA,))
    assert advance_time(state, 5.0, k=3) == state
    placed = apply_action(state.with_arrival(Arrival.H), ActionKind.higher(4), DELTA, k=3)
    assert placed == state


def test_admissible_actions_are_all_accepted():
    state = CompactState.of(1, 2, 3, (0.0, 4.0))
    for arrival in (Arrival.A, Arrival.H):
        pending = state.with_arrival(arrival)
        for action in admissible_actions(pending):
            nxt = apply_action(pending, action, DELTA)
            nxt.validate(DELTA)
            assert nxt.m <= nxt.n and nxt.d <= nxt.n


def test_public_height_never_decreases_along_trajectory():
    state = CompactState.genesis()
    seen = [state.public_height()]
    steps = [
        (Arrival.H, ActionKind.higher(1), 4.0),
        (Arrival.A, ActionKind.lower(1), 3.0),
        (Arrival.H, ActionKind.higher(2), 11.0),
        (Arrival.A, ActionKind.lower(2), 1.0),
    ]
    for arrival, action, elapsed in steps:
        state = apply_action(state.with_arrival(arrival), action, DELTA)
        state = advance_time(state, elapsed)
        seen.append(state.public_height())
    assert seen == sorted(seen)


def test_action_parse():
    assert ActionKind.parse("lower@2") == ActionKind.lower(2)
    assert str(ActionKind.higher(5)) == "higher@5"
    with pytest.raises(ValueError):
        ActionKind.parse("sideways@1")


def test_solver_config_overlay(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("quadrature:\n  nodes: 32\nmdp:\n  deficit_offset: 80\n")
    config = SolverConfig(str(path))
    assert config.quadrature_nodes() == 32
    assert config.mdp_deficit_offset() == 80
    assert config.series_guard_terms() == 8
    assert config.get("missing.key", "fallback") == "fallback"


def test_solver_config_keeps_sibling_keys(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text('{"mdp": {"tolerance": 1e-10}, "output": {"digits": 6}}')
    config = SolverConfig(str(path))
    assert config.mdp_tolerance() == 1e-10
    assert config.mdp_argmax_tolerance() == 1e-9
    assert config.output_digits() == 6
    # only sections something reads are configurable
    assert set(config.config) == {"series", "quadrature", "montecarlo", "mdp", "output"}
    assert not hasattr(config, "save_to_file")


def test_solver_config_rejects_non_mapping(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ValueError):
        SolverConfig(str(path))


def test_solver_config_missing_file():
    with pytest.raises(FileNotFoundError):
        SolverConfig("/nonexistent/settings.yaml")


def test_describe_is_readable(bitcoin):
    text = bitcoin.describe()
    assert "beta=0.25" in text and "k=3" in text
    assert math.isclose(bitcoin.honest_share, 0.75)
