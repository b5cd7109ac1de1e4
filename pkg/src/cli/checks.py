"""
src/cli/checks.py

Oracle-agreement suite behind the `check` subcommand. Every check compares two
independent computations (or a computation against a hard property) and yields
a CheckResult; the caller decides how to report failures.
"""

import math
from typing import Callable, List, Optional

import structlog

from src.analytic import (
    analyze,
    e_pmf,
    violation_probability_height1,
    window_increment_pmf,
)
from src.core.config import SolverConfig, get_default_config
from src.core.params import ProtocolParams
from src.mdp import (
    analytic_agreement,
    evaluate_policy,
    monotonicity_violations,
    value_iteration_zero_delay,
    verify_propositions,
)
from src.models import CheckResult, EstimateWithCI, RunConfig, Target
from src.montecarlo import (
    estimate_m_pmf,
    estimate_w_given_l,
    simulate_target_violation,
    simulate_violation,
    tree_vs_compact_check,
)
from src.policies import BaitAndSwitchPolicy, PolicyId

logger = structlog.get_logger(__name__)

RACE_TERMS = 400
WINDOW_TERMS = 200
WINDOW_LEADS = range(-5, 11)
NORMALIZATION_TOLERANCE = 1e-9
BRACKET_WIDTH = 1e-8
DP_AGREEMENT = 1e-7


def combined_stderr(*estimates: EstimateWithCI) -> float:
    return math.sqrt(sum(e.stderr**2 for e in estimates))


class OracleSuite:
    """Cross-checks for one parameter point over depths 1 .. k_max"""

    def __init__(
        self,
        params: ProtocolParams,
        k_max: int = 3,
        runs: int = 20000,
        seed: int = 0,
        streams: int = 1000,
        z: float = 3.0,
        workers: int = 1,
        dp_k_max: Optional[int] = None,
        config: Optional[SolverConfig] = None,
    ):
        self.params = params
        self.k_max = k_max
        self.runs = runs
        self.seed = seed
        self.streams = streams
        self.z = z
        self.workers = workers
        self.dp_k_max = dp_k_max if dp_k_max is not None else min(k_max, 3)
        self.config = config or get_default_config()

    def checks(self) -> List[Callable[[], List[CheckResult]]]:
        return [
            self.race_normalization,
            self.window_normalization,
            self.race_sampling,
            self.window_sampling,
            self.height1_simulation,
            self.target_simulation,
            self.policy_dominance,
            self.monotonicity,
            self.tree_replay,
            self.zero_delay_dp,
        ]

    def run(self) -> List[CheckResult]:
        results: List[CheckResult] = []
        for check in self.checks():
            batch = check()
            for result in batch:
                logger.info("oracle_check", name=result.name, passed=result.passed)
            results.extend(batch)
        return results

    def _run_config(self, k: int, policy: str, target: Target) -> RunConfig:
        return RunConfig(
            params=self.params.with_depth(k),
            policy=policy,
            target=target,
            runs=self.runs,
            seed=self.seed,
            warmup_jumpers=self.config.mc_warmup_jumpers(),
            batch_size=self.config.mc_batch_size(),
            workers=self.workers,
        )

    def race_normalization(self) -> List[CheckResult]:
        total = float(e_pmf(self.params, RACE_TERMS, self.config).values.sum())
        passed = 1.0 - NORMALIZATION_TOLERANCE <= total <= 1.0 + 1e-12
        return [
            CheckResult(
                name="race_pmf_normalization",
                passed=passed,
                detail=f"sum of e(0..{RACE_TERMS}) = {total:.15f}",
                values=[total],
            )
        ]

    def window_normalization(self) -> List[CheckResult]:
        worst = 0.0
        for l in WINDOW_LEADS:
            total = float(window_increment_pmf(self.params, l, WINDOW_TERMS, self.config).sum())
            worst = max(worst, abs(total - 1.0))
        return [
            CheckResult(
                name="window_pmf_normalization",
                passed=worst <= NORMALIZATION_TOLERANCE,
                detail=f"max |sum - 1| over l in -5..10 = {worst:.3e}",
                values=[worst],
            )
        ]

    def race_sampling(self) -> List[CheckResult]:
        expected = e_pmf(self.params, 40, self.config).values
        empirical = estimate_m_pmf(self.params, self.runs, seed=self.seed, config=self.config)
        bad = empirical.disagreements(expected, z=self.z + 1.0)
        return [
            CheckResult(
                name="race_pmf_vs_sampling",
                passed=not bad,
                detail=f"e(0) = {expected[0]:.6f}, sampled {empirical[0]:.6f}"
                + (f"; disagree at {bad}" if bad else ""),
                values=[float(expected[0]), empirical[0]],
            )
        ]

    def window_sampling(self) -> List[CheckResult]:
        bad_leads = []
        for l in (-1, 0, 1, 2):
            expected = window_increment_pmf(self.params, l, 40, self.config)
            empirical = estimate_w_given_l(self.params, l, self.runs, self.seed)
            if empirical.disagreements(expected, z=self.z + 1.0):
                bad_leads.append(l)
        return [
            CheckResult(
                name="window_pmf_vs_sampling",
                passed=not bad_leads,
                detail="leads -1..2" + (f"; disagree at l = {bad_leads}" if bad_leads else ""),
            )
        ]

    def _simulation_results(self, target: Target) -> List[CheckResult]:
        simulate = simulate_target_violation if target is Target.GENERAL else simulate_violation
        results = []
        for k in range(1, self.k_max + 1):
            policy = (
                PolicyId.TARGET_BAIT_AND_SWITCH
                if target is Target.GENERAL
                else PolicyId.BAIT_AND_SWITCH
            )
            exact = analyze(self.params.with_depth(k), target, self.config).probability
            estimate = simulate(self._run_config(k, policy.value, target), self.config)
            results.append(
                CheckResult(
                    name=f"{target.value}_analytic_vs_simulation_k{k}",
                    passed=estimate.covers(exact, self.z),
                    detail=f"analytic {exact:.6g}, simulated {estimate.estimate:.6g} "
                    f"+/- {estimate.stderr:.2g}",
                    values=[exact, estimate.estimate, estimate.stderr],
                )
            )
        return results

    def height1_simulation(self) -> List[CheckResult]:
        return self._simulation_results(Target.HEIGHT1)

    def target_simulation(self) -> List[CheckResult]:
        return self._simulation_results(Target.GENERAL)

    def policy_dominance(self) -> List[CheckResult]:
        results = []
        for k in range(1, self.k_max + 1):
            bait = simulate_violation(
                self._run_config(k, PolicyId.BAIT_AND_SWITCH.value, Target.HEIGHT1), self.config
            )
            private = simulate_violation(
                self._run_config(k, PolicyId.PRIVATE_MINING.value, Target.HEIGHT1), self.config
            )
            slack = self.z * combined_stderr(bait, private)
            gap = bait.estimate - private.estimate
            if self.params.delta == 0:
                passed = abs(gap) <= slack
                relation = "equal at zero delay"
            else:
                passed = gap >= -slack
                relation = "bait-and-switch >= private mining"
            results.append(
                CheckResult(
                    name=f"policy_dominance_k{k}",
                    passed=passed,
                    detail=f"{relation}: {bait.estimate:.6g} vs {private.estimate:.6g}",
                    values=[bait.estimate, private.estimate, slack],
                )
            )
        return results

    def monotonicity(self) -> List[CheckResult]:
        params = self.params
        depths = [
            analyze(params.with_depth(k), Target.HEIGHT1, self.config).probability
            for k in range(1, max(self.k_max, 2) + 1)
        ]
        in_k = all(b < a or a == 0.0 for a, b in zip(depths, depths[1:]))

        delays = sorted({0.0, params.delta / 5.0, params.delta})
        by_delay = [
            violation_probability_height1(params.with_delay(d), config=self.config)
            for d in delays
        ]
        in_delta = all(b >= a - 1e-12 for a, b in zip(by_delay, by_delay[1:]))

        in_beta = True
        if params.beta >= 0.05:
            weaker = ProtocolParams.from_rates(
                params.lambda_, params.beta - 0.05, params.delta, params.k
            )
            in_beta = (
                violation_probability_height1(weaker, config=self.config)
                <= violation_probability_height1(params, config=self.config) + 1e-12
            )
        return [
            CheckResult(
                name="monotone_in_depth",
                passed=in_k,
                detail="strictly decreasing in k",
                values=depths,
            ),
            CheckResult(
                name="monotone_in_delay",
                passed=in_delta,
                detail=f"non-decreasing over delta in {delays}",
                values=by_delay,
            ),
            CheckResult(
                name="monotone_in_fraction",
                passed=in_beta,
                detail="non-decreasing in beta at fixed lambda",
            ),
        ]

    def tree_replay(self) -> List[CheckResult]:
        report = tree_vs_compact_check(
            self.params, BaitAndSwitchPolicy(), self.streams, seed=self.seed
        )
        return [
            CheckResult(
                name="tree_vs_compact",
                passed=report.passed,
                detail=f"{report.streams} streams, {report.violations} violations, "
                f"{report.divergences} divergences"
                + (f"; first at stream {report.first_divergence}: {report.reason}" if not report.passed else ""),
                values=[float(report.violations), float(report.divergences)],
            )
        ]

    def zero_delay_dp(self) -> List[CheckResult]:
        results = []
        for k in range(1, self.dp_k_max + 1):
            params = self.params.with_delay(0.0).with_depth(k)
            table = value_iteration_zero_delay(params, config=self.config)
            report = verify_propositions(table, config=self.config)
            value, agrees = analytic_agreement(table, DP_AGREEMENT, self.config)
            policy = evaluate_policy(params, BaitAndSwitchPolicy(), table.deficit_cap, self.config)
            lo, hi = table.genesis
            p_lo, p_hi = policy.genesis
            overlap = p_lo <= hi + BRACKET_WIDTH and lo <= p_hi + BRACKET_WIDTH
            monotone = not monotonicity_violations(table)
            passed = (
                report.passed
                and agrees
                and overlap
                and monotone
                and table.width() < BRACKET_WIDTH
            )
            results.append(
                CheckResult(
                    name=f"zero_delay_dp_k{k}",
                    passed=passed,
                    detail=f"genesis [{lo:.10f}, {hi:.10f}], analytic {value:.10f}, "
                    f"{len(report.failures)} failures, {len(report.undecidable)} undecidable",
                    values=[lo, hi, value, p_lo, p_hi],
                )
            )
        return results


def failed(results: List[CheckResult]) -> List[CheckResult]:
    return [r for r in results if not r.passed]


def summary(results: List[CheckResult]) -> dict:
    return {
        "checks": len(results),
        "failed": [r.name for r in failed(results)],
        "values": {r.name: r.values for r in results if r.values},
    }


__all__ = ["OracleSuite", "combined_stderr", "failed", "summary"]
