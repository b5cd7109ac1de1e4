"""
src/cli/handlers.py

Subcommand handlers. Each takes the parsed arguments and the resolved protocol
parameters, writes its output and returns a CommandResult for the ledger.
"""

import argparse
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import structlog

from src.analytic import (
    e_pmf,
    first_epoch_matrices,
    race_tail_ratio,
    required_depth,
    tradeoff_curve,
    transition_matrices,
    window_increment_pmf,
)
from src.core.config import SolverConfig
from src.core.errors import VerificationError
from src.core.params import ProtocolParams
from src.mdp import (
    analytic_agreement,
    evaluate_policy,
    value_iteration_zero_delay,
    verify_propositions,
)
from src.models import RunConfig, Target
from src.montecarlo import simulate_target_violation, simulate_violation
from src.policies import PolicyFactory, create_policy

from .checks import OracleSuite, failed, summary
from .writers import console, rich_table, write_csv, write_json

logger = structlog.get_logger(__name__)


class UsageError(ValueError):
    """Arguments that parse but do not make sense together"""


@dataclass
class CommandResult:
    exit_code: int = 0
    summary: Dict[str, Any] = field(default_factory=dict)


def _digits(solver: SolverConfig) -> int:
    return solver.output_digits()


def _policy_or_usage(name: str, table: Optional[str]):
    try:
        return create_policy(name, table)
    except (ValueError, FileNotFoundError) as e:
        raise UsageError(str(e))


def cmd_tradeoff(
    args: argparse.Namespace, params: ProtocolParams, solver: SolverConfig
) -> CommandResult:
    target = Target(args.target)
    rows = tradeoff_curve(params, args.k_max, target, solver)

    header = ["k", "probability", "e_tail_bound", "latency_seconds"]
    if target is Target.GENERAL:
        header.append("lead_truncation")
    records = [[getattr(row, name) for name in header] for row in rows]

    if args.format == "json":
        write_json(args.output, [row.model_dump() for row in rows])
    else:
        write_csv(args.output, header, records, _digits(solver))
    if args.pretty:
        console.print(rich_table(f"{target.value} trade-off ({params.describe()})", header, records))

    result = CommandResult(summary={"rows": len(rows), "probabilities": [r.probability for r in rows]})
    if args.epsilon is not None:
        depth = required_depth(params, args.epsilon, args.k_max, target, solver)
        result.summary["required_depth"] = depth
        if depth is None:
            console.print(f"no depth up to k={args.k_max} reaches epsilon={args.epsilon:g}")
        else:
            console.print(
                f"required depth for epsilon={args.epsilon:g}: k={depth} "
                f"(about {depth / params.lambda_:.0f} s of mining)"
            )
    return result


def cmd_simulate(
    args: argparse.Namespace, params: ProtocolParams, solver: SolverConfig
) -> CommandResult:
    target = Target(args.target)
    policy = _policy_or_usage(args.policy, args.table)
    config = RunConfig(
        params=params,
        policy=args.policy,
        table_path=args.table,
        target=target,
        runs=args.runs,
        seed=args.seed,
        deficit_cutoff=args.deficit_cutoff,
        warmup_jumpers=args.warmup_jumpers or solver.mc_warmup_jumpers(),
        batch_size=args.batch_size or solver.mc_batch_size(),
        workers=args.workers or solver.mc_workers(),
    )
    simulate = simulate_target_violation if target is Target.GENERAL else simulate_violation
    estimate = simulate(config, solver)
    write_json(args.output, estimate)

    lo, hi = estimate.interval()
    console.print(
        f"{policy.name}: {estimate.estimate:.6g} +/- {estimate.stderr:.2g} "
        f"(95% CI [{lo:.6g}, {hi:.6g}], bias <= {estimate.bias_bound:.2g}, seed {estimate.seed})"
    )
    if estimate.jumper_fraction is not None:
        console.print(
            f"jumper fraction: {estimate.jumper_fraction:.6g} +/- {estimate.jumper_stderr:.2g}"
        )
    return CommandResult(summary=estimate.model_dump(mode="json"))


def cmd_verify_mdp(
    args: argparse.Namespace, params: ProtocolParams, solver: SolverConfig
) -> CommandResult:
    if params.delta != 0:
        raise UsageError(f"verify-mdp needs --delta 0, got {params.delta:g}")
    extra = _policy_or_usage(args.policy, args.table) if args.policy else None
    table = value_iteration_zero_delay(
        params, deficit_cap=args.deficit_cap, tol=args.tolerance, config=solver
    )
    report = verify_propositions(table, args.argmax_tolerance, solver)
    value, agrees = analytic_agreement(table, config=solver)

    rows = []
    for rule, counts in sorted(report.by_rule().items()):
        rows.append([rule, counts["optimal"], counts["undecidable"], counts["violated"]])
    console.print(
        rich_table(
            f"zero-delay argmax check, k={params.k}, beta={params.beta:.6g}",
            ["rule", "optimal", "undecidable", "violated"],
            rows,
        )
    )
    lo, hi = table.genesis
    console.print(
        f"genesis bracket [{lo:.12f}, {hi:.12f}] (width {table.width():.2e}, cap {table.deficit_cap}, "
        f"{len(table.space)} states); analytic {value:.12f} {'inside' if agrees else 'OUTSIDE'}"
    )
    for check in report.failures[:10]:
        console.print(f"[red]violated[/] at {check.state}: prescribed {check.prescribed}, "
                      f"argmax {sorted(str(a) for a in check.argmax.actions)}")

    result = CommandResult(
        summary={
            "genesis": [lo, hi],
            "analytic": value,
            "nodes": len(report.checks),
            "failures": len(report.failures),
            "undecidable": len(report.undecidable),
        }
    )
    if extra is not None:
        bracket = evaluate_policy(params, extra, table.deficit_cap, solver).genesis
        overlaps = bracket[0] <= hi + solver.mdp_argmax_tolerance()
        console.print(
            f"{extra.name}: [{bracket[0]:.12f}, {bracket[1]:.12f}] "
            f"{'reaches' if overlaps else 'falls short of'} the optimum"
        )
        result.summary["policy"] = {"name": extra.name, "genesis": list(bracket)}

    write_json(args.output, result.summary)
    if not report.passed:
        result.exit_code = VerificationError.exit_code
    return result


def cmd_pmf(
    args: argparse.Namespace, params: ProtocolParams, solver: SolverConfig
) -> CommandResult:
    digits = _digits(solver)
    if args.which == "race":
        pmf = e_pmf(params, args.max_i, solver)
        write_csv(args.output, ["i", "e"], enumerate(pmf.values.tolist()), digits)
        ratio = race_tail_ratio(params, config=solver)
        console.print(f"tail bound {pmf.tail_bound:.3e}, geometric tail ratio {ratio:.6g}")
        return CommandResult(
            summary={"e0": float(pmf.values[0]), "tail_bound": pmf.tail_bound, "ratio": ratio}
        )

    leads = args.lead if args.lead else [0]
    rows: List[list] = []
    for l in leads:
        values = window_increment_pmf(params, l, args.max_i, solver)
        rows.extend([l, w, p] for w, p in enumerate(values.tolist()))
    write_csv(args.output, ["l", "w", "p"], rows, digits)
    return CommandResult(summary={"leads": leads, "max_w": args.max_i})


def _matrix_rows(label: str, lead: Optional[int], values: np.ndarray) -> List[list]:
    rows = []
    for i, row in enumerate(values.tolist()):
        rows.append([label, "" if lead is None else lead, i, *row, sum(row)])
    return rows


def cmd_matrices(
    args: argparse.Namespace, params: ProtocolParams, solver: SolverConfig
) -> CommandResult:
    params.require_tolerance()
    target = Target(args.target)
    rows: List[list] = []
    for matrix in transition_matrices(params, solver):
        rows.extend(_matrix_rows(matrix.label, None, matrix.values))
    if target is Target.GENERAL:
        for lead in range(params.k):
            for jumper in (True, False):
                matrix = first_epoch_matrices(params, lead, jumper, solver)
                rows.extend(_matrix_rows(matrix.label, lead, matrix.values))

    header = ["matrix", "lead", "row", *[f"y{y}" for y in range(params.k + 1)], "row_sum"]
    write_csv(args.output, header, rows, _digits(solver))
    worst = max(abs(row[-1] - 1.0) for row in rows)
    console.print(f"{len(rows)} rows, max |row sum - 1| = {worst:.2e}")
    return CommandResult(summary={"rows": len(rows), "max_row_error": worst})


def cmd_check(
    args: argparse.Namespace, params: ProtocolParams, solver: SolverConfig
) -> CommandResult:
    suite = OracleSuite(
        params,
        k_max=args.k_max,
        runs=args.runs,
        seed=args.seed,
        streams=args.streams,
        z=args.z,
        workers=args.workers or solver.mc_workers(),
        dp_k_max=args.dp_k_max,
        config=solver,
    )
    results = suite.run()
    console.print(
        rich_table(
            f"oracle agreement ({params.describe()})",
            ["check", "passed", "detail"],
            [[r.name, "yes" if r.passed else "NO", r.detail] for r in results],
        )
    )
    write_json(args.output, [r.model_dump() for r in results])
    bad = failed(results)
    if bad:
        raise VerificationError(
            f"{len(bad)} of {len(results)} checks failed: {', '.join(r.name for r in bad)}"
        )
    return CommandResult(summary=summary(results))


HANDLERS = {
    "tradeoff": cmd_tradeoff,
    "simulate": cmd_simulate,
    "verify-mdp": cmd_verify_mdp,
    "pmf": cmd_pmf,
    "matrices": cmd_matrices,
    "check": cmd_check,
}


def policy_names() -> List[str]:
    return PolicyFactory.available() + ["custom"]


