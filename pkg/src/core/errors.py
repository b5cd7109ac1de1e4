"""
src/core/errors.py

Exception hierarchy shared by the analytic engines, simulators and CLI.
"""

from typing import Any, Optional


class NakamotoError(Exception):
    """Base class for all library errors"""

    exit_code = 1


class OutOfToleranceError(NakamotoError):
    """Parameters violate 1/a > 1/h + delta"""

    exit_code = 3

    def __init__(self, a: float, h: float, delta: float):
        self.a = a
        self.h = h
        self.delta = delta
        lhs = float("inf") if a == 0 else 1.0 / a
        rhs = 1.0 / h + delta
        super().__init__(
            "outside ultimate fault tolerance: requires 1/a > 1/h + delta, "
            f"got 1/a = {lhs:.6g} <= 1/h + delta = {rhs:.6g} "
            f"(a={a:.6g}, h={h:.6g}, delta={delta:.6g})"
        )


class NumericalError(NakamotoError):
    """A numerical routine lost accuracy or failed to converge"""

    exit_code = 4

    def __init__(self, message: str, bound: Optional[float] = None):
        self.bound = bound
        if bound is not None:
            message = f"{message} (achieved bound {bound:.3g})"
        super().__init__(message)


class InadmissibleActionError(NakamotoError):
    """Action outside the admissible set of the transition table"""

    def __init__(self, state: Any, action: Any, condition: str):
        self.state = state
        self.action = action
        self.condition = condition
        super().__init__(f"inadmissible action {action} in state {state}: {condition}")


class PolicyError(NakamotoError):
    """A policy could not produce an admissible action"""

    def __init__(self, message: str, state: Any = None):
        self.state = state
        if state is not None:
            message = f"{message} (state {state})"
        super().__init__(message)


class TreeError(NakamotoError):
    """Invalid block-tree event"""


class TraceFormatError(NakamotoError):
    """Malformed arrival trace"""


class VerificationError(NakamotoError):
    """An oracle cross-check or proposition check failed"""

    exit_code = 5
