"""
src/core/state.py

Compact attack state [m, d, n, (l_{m^d}, ..., l_d), I] and the action labels
used to place a newly mined block.

Heights above d carry an implicit infinite timer and are not stored; heights
below m^d carry an implicit zero timer.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

ZERO_TOLERANCE = 1e-12


class Arrival(str, Enum):
    """Kind of the block awaiting placement"""

    A = "A"
    H = "H"


class Branch(str, Enum):
    HIGHER = "higher"
    LOWER = "lower"


class StateClass(str, Enum):
    """Classification by the timer just above the lower branch"""

    AHEAD = "ahead"
    ON_TIME = "on-time"
    BEHIND = "behind"


@dataclass(frozen=True, slots=True)
class ActionKind:
    """Place the pending block on `branch` at `height`"""

    branch: Branch
    height: int

    @classmethod
    def higher(cls, height: int) -> "ActionKind":
        return cls(Branch.HIGHER, height)

    @classmethod
    def lower(cls, height: int) -> "ActionKind":
        return cls(Branch.LOWER, height)

    @classmethod
    def parse(cls, text: str) -> "ActionKind":
        """Parse the `lower@2` notation"""
        try:
            branch, height = text.strip().split("@")
            return cls(Branch(branch.strip().lower()), int(height))
        except ValueError as e:
            raise ValueError(f"cannot parse action '{text}': {e}") from e

    def shifted(self, eta: int) -> "ActionKind":
        return ActionKind(self.branch, self.height + eta)

    def __str__(self) -> str:
        return f"{self.branch.value}@{self.height}"


@dataclass(frozen=True, slots=True)
class CompactState:
    """
    Reduced attack state.

    m: lower-branch height
    d: highest height holding a finite timer
    n: higher-branch height
    timers: remaining seconds for heights m^d .. d, non-decreasing
    arrival: pending block kind, None between arrivals
    """

    m: int
    d: int
    n: int
    timers: Tuple[float, ...] = (0.0,)
    arrival: Optional[Arrival] = None

    def __post_init__(self):
        if self.m < 0 or self.d < 0:
            raise ValueError(f"heights must be non-negative: m={self.m}, d={self.d}")
        if self.m > self.n or self.d > self.n:
            raise ValueError(f"need m <= n and d <= n: [{self.m},{self.d},{self.n}]")
        expected = self.d - min(self.m, self.d) + 1
        if len(self.timers) != expected:
            raise ValueError(
                f"timers cover heights {min(self.m, self.d)}..{self.d} "
                f"({expected} values), got {len(self.timers)}"
            )

    @classmethod
    def of(
        cls,
        m: int,
        d: int,
        n: int,
        timers: Sequence[float] = (),
        arrival: Optional[Arrival] = None,
    ) -> "CompactState":
        """Build a state, left-padding a short timer list with zeros"""
        expected = d - min(m, d) + 1
        values = tuple(float(t) for t in timers)
        if len(values) > expected:
            raise ValueError(
                f"too many timers for [{m},{d},{n}]: {len(values)} > {expected}"
            )
        values = (0.0,) * (expected - len(values)) + values
        return cls(m, d, n, values, arrival)

    @classmethod
    def genesis(cls) -> "CompactState":
        return cls(0, 0, 0, (0.0,))

    @property
    def lo(self) -> int:
        return min(self.m, self.d)

    def timer_at(self, height: int) -> float:
        if height < self.lo:
            return 0.0
        if height > self.d:
            return math.inf
        return self.timers[height - self.lo]

    def public_height(self) -> int:
        """Highest height whose timer has expired"""
        for idx in range(len(self.timers) - 1, -1, -1):
            if self.timers[idx] <= ZERO_TOLERANCE:
                return self.lo + idx
        return self.lo - 1

    def is_violation(self, k: int) -> bool:
        return self.m >= max(k, self.public_height())

    def classify(self) -> StateClass:
        if self.d <= self.m:
            return StateClass.AHEAD
        if self.timer_at(self.m + 1) > ZERO_TOLERANCE:
            return StateClass.ON_TIME
        return StateClass.BEHIND

    def with_arrival(self, arrival: Optional[Arrival]) -> "CompactState":
        return replace(self, arrival=arrival)

    def settled(self) -> "CompactState":
        if self.arrival is None:
            return self
        return replace(self, arrival=None)

    def shifted(self, eta: int) -> "CompactState":
        """Uniform height shift; heights below the shift must be settled"""
        return CompactState(
            self.m + eta, self.d + eta, self.n + eta, self.timers, self.arrival
        )

    def validate(self, delta: Optional[float] = None) -> None:
        """Check timer ordering and range; raises ValueError"""
        previous = -math.inf
        for height, value in zip(range(self.lo, self.d + 1), self.timers):
            if value < 0:
                raise ValueError(f"negative timer at height {height}: {value}")
            if delta is not None and value > delta + ZERO_TOLERANCE:
                raise ValueError(f"timer {value} at height {height} exceeds {delta}")
            if value < previous - ZERO_TOLERANCE:
                raise ValueError(f"timers decrease at height {height}: {self.timers}")
            previous = value

    def __str__(self) -> str:
        timers = ",".join(f"{t:.6g}" for t in self.timers)
        suffix = f",{self.arrival.value}" if self.arrival is not None else ""
        return f"[{self.m},{self.d},{self.n},({timers}){suffix}]"
