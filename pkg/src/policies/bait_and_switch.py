"""
src/policies/bait_and_switch.py

Bait-and-switch attack on height 1.

A-blocks extend the lower branch while it trails the highest jumper, otherwise
the higher branch. H-blocks are delayed maximally, except that a lower branch
sitting at the public height below a unique highest branch is offered as the
fork choice (the bait).
"""

from src.core.state import (
    ZERO_TOLERANCE,
    ActionKind,
    Arrival,
    CompactState,
    StateClass,
)
from src.core.errors import PolicyError

from .base import AttackPolicy, PolicyId


def bait_and_switch_action(state: CompactState) -> ActionKind:
    m, d, n = state.m, state.d, state.n

    if state.arrival is Arrival.A:
        if d <= m:
            return ActionKind.higher(n + 1)
        return ActionKind.lower(m + 1)

    if state.arrival is not Arrival.H:
        raise PolicyError("no pending arrival", state)

    top_pending = state.timer_at(d) > ZERO_TOLERANCE
    state_class = state.classify()

    if state_class is StateClass.ON_TIME:
        return ActionKind.lower(m + 1)
    if top_pending:
        return ActionKind.higher(d)
    if state_class is StateClass.AHEAD and d == m < n:
        # bait
        return ActionKind.lower(m + 1)
    return ActionKind.higher(d + 1)


class BaitAndSwitchPolicy(AttackPolicy):
    policy_id = PolicyId.BAIT_AND_SWITCH

    def action(self, state: CompactState) -> ActionKind:
        return bait_and_switch_action(state)
