"""
src/mdp/value_iteration.py

Exact dynamic programming for the zero-delay attack game.

Each settled state mixes an A-arrival (probability beta) and an H-arrival
(probability 1 - beta); at the resulting decision node the adversary takes the
best placement. Values are computed twice, with pessimistic and optimistic cap
payoffs, giving a bracket around the untruncated value. Each bracket is found by
policy iteration with sparse linear solves and then confirmed by Gauss-Seidel
sweeps until the sup-norm update falls below tolerance.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog
from scipy.sparse import coo_matrix, identity
from scipy.sparse.linalg import spsolve

from src.core.config import SolverConfig, get_default_config
from src.core.errors import InadmissibleActionError, NumericalError, PolicyError
from src.core.params import ProtocolParams
from src.core.state import Arrival, CompactState
from src.core.transitions import admissible_actions, apply_action
from src.policies.bait_and_switch import BaitAndSwitchPolicy
from src.policies.base import AttackPolicy

from .state_space import Choice, ZeroDelayState, ZeroDelayStateSpace

logger = structlog.get_logger(__name__)

Bracket = Tuple[float, float]
Policy = Dict[Tuple[int, Arrival], int]


@dataclass
class ValueTable:
    """Lower and upper values per settled state of a truncated space"""

    params: ProtocolParams
    space: ZeroDelayStateSpace
    lower: np.ndarray
    upper: np.ndarray
    tolerance: float
    sweeps: int = 0
    policy_iterations: int = 0
    label: str = "optimal"

    @property
    def k(self) -> int:
        return self.space.k

    @property
    def deficit_cap(self) -> int:
        return self.space.deficit_cap

    @property
    def genesis(self) -> Bracket:
        return float(self.lower[0]), float(self.upper[0])

    def width(self) -> float:
        """Bracket width at genesis"""
        lo, hi = self.genesis
        return hi - lo

    def widest(self) -> float:
        """Largest bracket over every state, cap states included"""
        return float(np.max(self.upper - self.lower)) if len(self.lower) else 0.0

    def value(self, m: int, d: int, n: int) -> Bracket:
        return self.bracket(ZeroDelayState(m, d, n))

    def bracket(self, state: ZeroDelayState) -> Bracket:
        """Bracket of a settled state, or of the best placement at a decision node"""
        if state.arrival is not None:
            options = self.choice_brackets(state)
            return max(lo for _, lo, _ in options), max(hi for _, _, hi in options)
        idx = self._index(state)
        return float(self.lower[idx]), float(self.upper[idx])

    def choice_brackets(self, state: ZeroDelayState) -> List[Tuple[Choice, float, float]]:
        if state.arrival is None:
            raise ValueError(f"state {state} has no pending arrival")
        idx = self._index(state.settled())
        choices = self.space.choices.get((idx, state.arrival))
        if not choices:
            raise ValueError(f"{state} is terminal")
        return [
            (c, float(self.lower[c.successor]), float(self.upper[c.successor]))
            for c in choices
        ]

    def _index(self, state: ZeroDelayState) -> int:
        canonical = self.space.canonical_of(state)
        idx = self.space.index.get(canonical)
        if idx is None:
            raise KeyError(f"state {state} (canonical {canonical}) is outside the table")
        return idx


class _Solver:
    """Bellman machinery over one state space and parameter set"""

    def __init__(self, params: ProtocolParams, space: ZeroDelayStateSpace):
        self.params = params
        self.space = space
        self.beta = params.beta
        self.transient = space.transient()
        self.successors: Dict[Tuple[int, Arrival], np.ndarray] = {
            key: np.array([c.successor for c in choices], dtype=int)
            for key, choices in space.choices.items()
        }

    def backup(self, values: np.ndarray, i: int) -> float:
        a = values[self.successors[(i, Arrival.A)]].max()
        h = values[self.successors[(i, Arrival.H)]].max()
        return self.beta * a + (1.0 - self.beta) * h

    def evaluate(self, terminal: np.ndarray, policy: Policy) -> np.ndarray:
        """Solve v = P_policy v on transient states with terminal values fixed"""
        position = {int(s): r for r, s in enumerate(self.transient)}
        rows, cols, data = [], [], []
        rhs = np.zeros(len(self.transient))
        for r, i in enumerate(self.transient):
            for arrival, weight in ((Arrival.A, self.beta), (Arrival.H, 1.0 - self.beta)):
                if weight == 0:
                    continue
                key = (int(i), arrival)
                nxt = int(self.successors[key][policy[key]])
                if nxt in position:
                    rows.append(r)
                    cols.append(position[nxt])
                    data.append(weight)
                else:
                    rhs[r] += weight * terminal[nxt]
        n = len(self.transient)
        matrix = identity(n, format="csr") - coo_matrix(
            (data, (rows, cols)), shape=(n, n)
        ).tocsr()
        solution = np.atleast_1d(spsolve(matrix.tocsc(), rhs))
        if not np.all(np.isfinite(solution)):
            raise NumericalError("policy evaluation produced a non-finite value")
        values = terminal.copy()
        values[self.transient] = np.clip(solution, 0.0, 1.0)
        return values

    def improve(self, values: np.ndarray, policy: Policy) -> Tuple[Policy, bool]:
        """Greedy policy; the current choice is kept on ties"""
        updated: Policy = {}
        changed = False
        for key, succ in self.successors.items():
            options = values[succ]
            best = int(options.argmax())
            current = policy[key]
            if options[current] >= options[best] - 1e-15:
                best = current
            changed |= best != current
            updated[key] = best
        return updated, changed

    def policy_iteration(
        self, terminal: np.ndarray, policy: Policy, max_iterations: int = 1000
    ) -> Tuple[np.ndarray, Policy, int]:
        for iteration in range(1, max_iterations + 1):
            values = self.evaluate(terminal, policy)
            policy, changed = self.improve(values, policy)
            if not changed:
                return values, policy, iteration
        raise NumericalError(f"policy iteration did not settle in {max_iterations} rounds")

    def sweep(self, values: np.ndarray, tol: float, max_sweeps: int) -> int:
        """Gauss-Seidel sweeps by decreasing m + n until the update is below tol"""
        order = sorted(
            (int(i) for i in self.transient),
            key=lambda i: -(self.space.states[i].m + self.space.states[i].n),
        )
        change = np.inf
        for sweep in range(1, max_sweeps + 1):
            change = 0.0
            for i in order:
                new = self.backup(values, i)
                change = max(change, abs(new - values[i]))
                values[i] = new
            if change < tol:
                return sweep
        raise NumericalError(
            f"value iteration did not converge in {max_sweeps} sweeps", bound=change
        )


def _policy_of(solver: _Solver, policy: AttackPolicy) -> Policy:
    """Translate an attack policy into choice positions on the space"""
    space = solver.space
    table: Policy = {}
    for (i, arrival), succ in solver.successors.items():
        state = space.states[i]
        action = policy.action(state.with_arrival(arrival).to_compact())
        try:
            nxt = space.index[space.successor(state, arrival, action)]
        except InadmissibleActionError as e:
            raise PolicyError(
                f"policy '{policy.name}' chose {action}: {e.condition}", state
            ) from e
        table[(i, arrival)] = int(np.flatnonzero(succ == nxt)[0])
    return table


def _check_params(params: ProtocolParams) -> None:
    if params.delta != 0:
        raise ValueError(f"zero-delay DP requires delta = 0, got {params.delta}")


def _space(params: ProtocolParams, deficit_cap: Optional[int], config: SolverConfig):
    cap = deficit_cap if deficit_cap is not None else params.k + config.mdp_deficit_offset()
    return _cached_space(params.k, cap)


@lru_cache(maxsize=16)
def _cached_space(k: int, deficit_cap: int) -> ZeroDelayStateSpace:
    return ZeroDelayStateSpace(k, deficit_cap)


def value_iteration_zero_delay(
    params: ProtocolParams,
    deficit_cap: Optional[int] = None,
    tol: Optional[float] = None,
    config: Optional[SolverConfig] = None,
    warm_start: bool = True,
) -> ValueTable:
    """
    Optimal violation probability brackets on the truncated zero-delay space.

    Args:
        params: protocol parameters with delta = 0
        deficit_cap: deficit at which states become terminal (default k + offset)
        tol: sup-norm update that stops the sweeps
        warm_start: run policy iteration from bait-and-switch before sweeping

    Raises:
        NumericalError: no convergence, or the bracket inverted
    """
    _check_params(params)
    config = config or get_default_config()
    tol = tol if tol is not None else config.mdp_tolerance()
    space = _space(params, deficit_cap, config)
    solver = _Solver(params, space)
    lower, upper = space.terminal_values(params)

    iterations = 0
    if warm_start:
        start = _policy_of(solver, BaitAndSwitchPolicy())
        lower, _, lo_iter = solver.policy_iteration(lower, start)
        upper, _, hi_iter = solver.policy_iteration(upper, start)
        iterations = lo_iter + hi_iter
    else:
        upper[solver.transient] = 1.0

    sweeps = solver.sweep(lower, tol, config.mdp_max_sweeps())
    sweeps += solver.sweep(upper, tol, config.mdp_max_sweeps())

    inverted = lower - upper
    if inverted.max() > tol:
        i = int(inverted.argmax())
        raise NumericalError(
            f"value bracket inverted at {space.states[i]}", bound=float(inverted[i])
        )
    table = ValueTable(params, space, lower, upper, tol, sweeps, iterations)
    logger.info(
        "zero_delay_value_iteration",
        k=params.k,
        beta=params.beta,
        deficit_cap=space.deficit_cap,
        states=len(space),
        sweeps=sweeps,
        policy_iterations=iterations,
        genesis=table.genesis,
        width=table.width(),
        widest=table.widest(),
    )
    return table


def evaluate_policy(
    params: ProtocolParams,
    policy: AttackPolicy,
    deficit_cap: Optional[int] = None,
    config: Optional[SolverConfig] = None,
) -> ValueTable:
    """Value brackets of a fixed policy on the same truncated space"""
    _check_params(params)
    config = config or get_default_config()
    space = _space(params, deficit_cap, config)
    solver = _Solver(params, space)
    table = _policy_of(solver, policy)
    lower, upper = space.terminal_values(params)
    lower = solver.evaluate(lower, table)
    upper = solver.evaluate(upper, table)
    result = ValueTable(
        params, space, lower, upper, config.mdp_tolerance(), label=policy.name
    )
    logger.debug("zero_delay_policy_value", policy=policy.name, genesis=result.genesis)
    return result


def policy_value_zero_delay(
    params: ProtocolParams,
    policy: AttackPolicy,
    deficit_cap: Optional[int] = None,
    config: Optional[SolverConfig] = None,
) -> Bracket:
    return evaluate_policy(params, policy, deficit_cap, config).genesis


def finite_horizon_bracket(params: ProtocolParams, horizon: int) -> Bracket:
    """
    Brute-force bracket at genesis over every arrival sequence of `horizon` blocks.

    Placements range over the full admissible set. After the horizon a state pays
    0 (lower) or the catch-up bound (beta/(1-beta))^deficit (upper).
    """
    _check_params(params)
    k, beta = params.k, params.beta
    ratio = 1.0 if beta >= 0.5 else beta / (1.0 - beta)

    @lru_cache(maxsize=None)
    def value(m: int, d: int, n: int, remaining: int) -> Bracket:
        if m >= max(k, d):
            return 1.0, 1.0
        if remaining == 0:
            return 0.0, min(1.0, ratio ** max(d - m, 0))
        lo = hi = 0.0
        for arrival, weight in ((Arrival.A, beta), (Arrival.H, 1.0 - beta)):
            if weight == 0:
                continue
            pending = CompactState.of(m, d, n, (), arrival)
            best_lo = best_hi = 0.0
            for action in admissible_actions(pending):
                nxt = apply_action(pending, action, 0.0)
                # higher branches above max(k, d) only raise the public height
                child = value(nxt.m, nxt.d, min(nxt.n, max(k, nxt.d)), remaining - 1)
                best_lo = max(best_lo, child[0])
                best_hi = max(best_hi, child[1])
            lo += weight * best_lo
            hi += weight * best_hi
        return lo, hi

    result = value(0, 0, 0, horizon)
    logger.debug("finite_horizon_bracket", horizon=horizon, bracket=result)
    return result
