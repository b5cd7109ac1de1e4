"""
src/mdp/state_space.py

Finite state space of the zero-delay attack game.

With delta = 0 every timer is zero, so [m, d, n] plus the pending arrival is a
sufficient state and the public height equals d. The space is made finite by
three reductions:

  - violation states collapse to a single absorbing representative;
  - n is capped at max(k, d): higher placements above the cap only move the
    public height up;
  - once d >= k only the deficit d - m matters, so heights are shifted down;
    deficits of D_max or more become terminal cap states.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from src.core.params import ProtocolParams
from src.core.state import ActionKind, Arrival, CompactState
from src.core.transitions import admissible_actions, apply_action

logger = structlog.get_logger(__name__)

ARRIVALS = (Arrival.A, Arrival.H)


@dataclass(frozen=True)
class ZeroDelayState:
    m: int
    d: int
    n: int
    arrival: Optional[Arrival] = None

    def __post_init__(self):
        if min(self.m, self.d) < 0 or self.m > self.n or self.d > self.n:
            raise ValueError(f"invalid zero-delay state [{self.m},{self.d},{self.n}]")

    @property
    def deficit(self) -> int:
        return self.d - self.m

    def is_violation(self, k: int) -> bool:
        return self.m >= max(k, self.d)

    def settled(self) -> "ZeroDelayState":
        return ZeroDelayState(self.m, self.d, self.n)

    def with_arrival(self, arrival: Optional[Arrival]) -> "ZeroDelayState":
        return ZeroDelayState(self.m, self.d, self.n, arrival)

    def to_compact(self) -> CompactState:
        return CompactState.of(self.m, self.d, self.n, (), self.arrival)

    @classmethod
    def from_compact(cls, state: CompactState) -> "ZeroDelayState":
        if any(t != 0 for t in state.timers):
            raise ValueError(f"state carries a pending timer: {state}")
        return cls(state.m, state.d, state.n, state.arrival)

    def __str__(self) -> str:
        suffix = f",{self.arrival.value}" if self.arrival is not None else ""
        return f"[{self.m},{self.d},{self.n}{suffix}]"


@dataclass(frozen=True)
class Choice:
    """Actions of one decision node that lead to the same successor"""

    actions: Tuple[ActionKind, ...]
    successor: int


class ZeroDelayStateSpace:
    """
    Canonical settled states reachable from genesis, with per-arrival choices.

    Index 0 is genesis. Terminal states (the violation representative and the
    cap states) have no choices.
    """

    def __init__(self, k: int, deficit_cap: int):
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        if deficit_cap < k:
            raise ValueError(f"deficit cap {deficit_cap} must be at least k={k}")
        self.k = k
        self.deficit_cap = deficit_cap
        self.violation = ZeroDelayState(k, k, k)
        self.states: List[ZeroDelayState] = []
        self.index: Dict[ZeroDelayState, int] = {}
        self.choices: Dict[Tuple[int, Arrival], List[Choice]] = {}
        self._explore()

    @property
    def height_cap(self) -> int:
        return self.k

    def canonical(self, m: int, d: int, n: int) -> ZeroDelayState:
        k = self.k
        if m >= max(k, d):
            return self.violation
        if d - m >= self.deficit_cap:
            return ZeroDelayState(0, d - m, d - m)
        n = min(n, max(k, d))
        if d >= k:
            shift = min(d - k, m)
            m, d, n = m - shift, d - shift, n - shift
        return ZeroDelayState(m, d, n)

    def canonical_of(self, state: ZeroDelayState) -> ZeroDelayState:
        return self.canonical(state.m, state.d, state.n)

    def is_cap(self, state: ZeroDelayState) -> bool:
        return state.deficit >= self.deficit_cap

    def is_terminal(self, state: ZeroDelayState) -> bool:
        return state == self.violation or self.is_cap(state)

    def successor(self, state: ZeroDelayState, arrival: Arrival, action: ActionKind) -> ZeroDelayState:
        """Canonical settled state after placing the arrival with `action`"""
        placed = apply_action(state.with_arrival(arrival).to_compact(), action, 0.0)
        return self.canonical(placed.m, placed.d, placed.n)

    def _add(self, state: ZeroDelayState, frontier: List[int]) -> int:
        idx = self.index.get(state)
        if idx is None:
            idx = len(self.states)
            self.states.append(state)
            self.index[state] = idx
            if not self.is_terminal(state):
                frontier.append(idx)
        return idx

    def _explore(self) -> None:
        frontier: List[int] = []
        self._add(self.canonical(0, 0, 0), frontier)
        # every configuration up to height k+1, so lookups need not be reachable
        top = self.k + 1
        for n in range(top + 1):
            for m in range(n + 1):
                for d in range(n + 1):
                    self._add(self.canonical(m, d, n), frontier)
        while frontier:
            idx = frontier.pop()
            state = self.states[idx]
            for arrival in ARRIVALS:
                grouped: Dict[int, List[ActionKind]] = {}
                pending = state.with_arrival(arrival).to_compact()
                for action in admissible_actions(pending):
                    nxt = self._add(self.successor(state, arrival, action), frontier)
                    grouped.setdefault(nxt, []).append(action)
                self.choices[(idx, arrival)] = [
                    Choice(tuple(actions), nxt) for nxt, actions in grouped.items()
                ]
        logger.debug(
            "zero_delay_space",
            k=self.k,
            deficit_cap=self.deficit_cap,
            states=len(self.states),
        )

    def __len__(self) -> int:
        return len(self.states)

    def transient(self) -> np.ndarray:
        """Indices of non-terminal states"""
        return np.array(
            [i for i, s in enumerate(self.states) if not self.is_terminal(s)], dtype=int
        )

    def terminal_values(self, params: ProtocolParams) -> Tuple[np.ndarray, np.ndarray]:
        """
        Pessimistic and optimistic terminal payoffs.

        Violation pays 1 in both. A cap state pays 0 and (beta/(1-beta))^deficit:
        from a deficit the lower branch must win a +-1 race to catch up.
        """
        lower = np.zeros(len(self.states))
        upper = np.zeros(len(self.states))
        beta = params.beta
        ratio = 1.0 if beta >= 0.5 else beta / (1.0 - beta)
        for i, state in enumerate(self.states):
            if state == self.violation:
                lower[i] = upper[i] = 1.0
            elif self.is_cap(state):
                upper[i] = min(1.0, ratio**state.deficit)
        return lower, upper
