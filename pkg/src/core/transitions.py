"""
src/core/transitions.py

State transition rules for the compact attack state: block placement on an
arrival, timer countdown between arrivals, and the violation predicate.
"""

from dataclasses import replace
from typing import List, Optional

from .errors import InadmissibleActionError
from .state import (
    ZERO_TOLERANCE,
    ActionKind,
    Arrival,
    Branch,
    CompactState,
    StateClass,
)


def is_violation(state: CompactState, k: int) -> bool:
    return state.is_violation(k)


def classify(state: CompactState) -> StateClass:
    return state.classify()


def public_height(state: CompactState) -> int:
    return state.public_height()


def advance_time(
    state: CompactState, t: float, k: Optional[int] = None
) -> CompactState:
    """
    Count every timer down by t seconds, flooring at zero.

    Args:
        state: settled state (no pending arrival)
        t: elapsed seconds, t >= 0
        k: when given, violation states are returned unchanged

    Returns:
        The state with decreased timers and unchanged heights
    """
    if t < 0:
        raise ValueError(f"elapsed time must be non-negative, got {t}")
    if state.arrival is not None:
        raise ValueError(f"cannot advance time with a pending arrival: {state}")
    if t == 0 or (k is not None and state.is_violation(k)):
        return state

    timers = tuple(
        0.0 if value - t <= ZERO_TOLERANCE else value - t for value in state.timers
    )
    return replace(state, timers=timers)


def apply_action(
    state: CompactState,
    action: ActionKind,
    delta: float,
    k: Optional[int] = None,
) -> CompactState:
    """
    Place the pending block and return the settled successor.

    Args:
        state: state whose arrival is A or H
        action: branch and height of the new block
        delta: delay bound, the timer given to newly occupied heights
        k: when given, violation states are returned unchanged

    Raises:
        InadmissibleActionError: the action is outside the admissible set
    """
    if state.arrival is None:
        raise InadmissibleActionError(state, action, "no pending arrival")
    if k is not None and state.is_violation(k):
        return state.settled()
    if action.height < 1:
        raise InadmissibleActionError(state, action, "heights start at 1")

    if state.arrival is Arrival.A:
        return _place_adversarial(state, action)
    return _place_honest(state, action, delta)


def _place_adversarial(state: CompactState, action: ActionKind) -> CompactState:
    m, d, n = state.m, state.d, state.n
    i = action.height

    if action.branch is Branch.HIGHER:
        if i <= n:
            return state.settled()
        if i == n + 1:
            return CompactState(m, d, n + 1, state.timers)
        raise InadmissibleActionError(state, action, "higher placement above n+1")

    if i <= m:
        return state.settled()
    if i != m + 1:
        raise InadmissibleActionError(state, action, "lower placement above m+1")
    if m < n:
        lo = min(m + 1, d)
        return CompactState(m + 1, d, n, state.timers[lo - state.lo :])
    # m == n: the extended branch becomes the higher one
    return CompactState(m, d, m + 1, state.timers)


def _place_honest(
    state: CompactState, action: ActionKind, delta: float
) -> CompactState:
    m, d, n = state.m, state.d, state.n
    i = action.height

    if i <= state.public_height():
        raise InadmissibleActionError(
            state, action, f"H-block must exceed public height {state.public_height()}"
        )

    if action.branch is Branch.HIGHER:
        if i <= d:
            return state.settled()
        if i > n + 1:
            raise InadmissibleActionError(state, action, "higher placement above n+1")
        new_n = max(n, i)
        if m <= d:
            timers = state.timers + (delta,) * (i - d)
            return CompactState(m, i, new_n, timers)
        lo = min(m, i)
        return CompactState(m, i, new_n, (delta,) * (i - lo + 1))

    if i <= min(d, m):
        return state.settled()
    if i <= m:
        # d + 1 <= i <= m
        return CompactState(m, i, n, (delta,))
    if i != m + 1:
        raise InadmissibleActionError(state, action, "lower placement above m+1")
    if m + 1 <= d:
        return CompactState(m + 1, d, n, state.timers[m + 1 - state.lo :])
    if m < n:
        return CompactState(m + 1, m + 1, n, (delta,))
    # d <= m == n: the extended branch becomes the higher one
    top = state.timer_at(m) if d == m else delta
    return CompactState(m, m + 1, m + 1, (top, delta))


def admissible_actions(state: CompactState) -> List[ActionKind]:
    """Every action accepted by apply_action for the pending arrival"""
    if state.arrival is None:
        return []
    floor = 1
    if state.arrival is Arrival.H:
        floor = max(1, state.public_height() + 1)
    actions = [ActionKind.higher(i) for i in range(floor, state.n + 2)]
    actions += [ActionKind.lower(i) for i in range(floor, state.m + 2)]
    return actions
