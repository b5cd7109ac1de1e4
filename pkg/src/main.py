"""
Main entry point for the nakamoto-safety command line
"""

import argparse
import os
import sys
from typing import List, Optional

import numpy as np
import structlog
from dotenv import dotenv_values, load_dotenv
from pydantic import ValidationError

from src.cli.handlers import HANDLERS, UsageError, policy_names
from src.cli.presets import (
    PRESETS,
    parse_fraction,
    parse_nonnegative,
    parse_positive_int,
    parse_rational,
)
from src.core.config import SolverConfig, get_default_config, set_default_config
from src.core.errors import NakamotoError, OutOfToleranceError
from src.core.params import ProtocolParams
from src.logger import RunLedger, configure_logging

# Load environment variables
load_dotenv()

logger = structlog.get_logger(__name__)

SUBCOMMANDS = tuple(HANDLERS)
BOOLEAN_FLAGS = {"debug", "log-json", "pretty"}
TRUE_WORDS = {"1", "true", "yes", "on"}


def _env_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    return int(value) if value else None


def _common_parser() -> argparse.ArgumentParser:
    """Parameter and plumbing flags shared by every subcommand"""
    common = argparse.ArgumentParser(add_help=False)

    rates = common.add_argument_group("protocol parameters")
    rates.add_argument("--preset", choices=sorted(PRESETS), help="Bitcoin or ETC rate and delay")
    rates.add_argument("--a", type=parse_nonnegative, help="adversarial mining rate (blocks/s)")
    rates.add_argument("--h", type=parse_nonnegative, help="honest mining rate (blocks/s)")
    rates.add_argument(
        "--lambda", dest="lambda_", type=parse_nonnegative, help="total mining rate, e.g. 1/600"
    )
    rates.add_argument("--beta", type=parse_fraction, help="adversarial fraction in [0, 1)")
    rates.add_argument("--delta", type=parse_nonnegative, help="delay bound in seconds")
    rates.add_argument("--k", type=parse_positive_int, help="confirmation depth")

    plumbing = common.add_argument_group("configuration and output")
    plumbing.add_argument("--config", help="flat key=value file mirroring the long flags")
    plumbing.add_argument("--settings", help="YAML or JSON solver settings overlay")
    plumbing.add_argument("--ledger", help="append a JSON record of this run to PATH")
    plumbing.add_argument("-o", "--output", help="output file (default stdout)")
    plumbing.add_argument("--debug", action="store_true", help="debug logging on stderr")
    plumbing.add_argument("--log-json", action="store_true", help="JSON log lines")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nakamoto-safety",
        description="Safety-violation probability of proof-of-work Nakamoto consensus "
        "under the bait-and-switch attack",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common_parser()]
    workers = _env_int("NAKAMOTO_SAFETY_WORKERS")

    tradeoff = sub.add_parser(
        "tradeoff",
        parents=common,
        help="probability against depth",
        description="Columns: k, probability, e_tail_bound (race pmf mass dropped by "
        "truncation), latency_seconds (k/lambda, the mean time to mine k blocks) and, "
        "for --target general, lead_truncation (largest lead row tracked).",
    )
    tradeoff.add_argument("--k-max", type=parse_positive_int, default=12)
    tradeoff.add_argument("--target", choices=["height1", "general"], default="height1")
    tradeoff.add_argument(
        "--epsilon", type=parse_rational, help="also report the smallest k reaching it"
    )
    tradeoff.add_argument("--format", choices=["csv", "json"], default="csv")
    tradeoff.add_argument("--pretty", action="store_true", help="rich table on stderr")

    simulate = sub.add_parser("simulate", parents=common, help="Monte Carlo attack estimate")
    simulate.add_argument(
        "--policy", default="bait-and-switch", help=f"one of {', '.join(policy_names())}"
    )
    simulate.add_argument("--table", help="CSV decision table for a custom policy")
    simulate.add_argument("--target", choices=["height1", "general"], default="height1")
    simulate.add_argument("--runs", type=parse_positive_int, default=100000)
    simulate.add_argument("--seed", type=int, help="generated and recorded when omitted")
    simulate.add_argument("--workers", type=parse_positive_int, default=workers)
    simulate.add_argument("--deficit-cutoff", type=parse_positive_int)
    simulate.add_argument("--warmup-jumpers", type=parse_positive_int)
    simulate.add_argument("--batch-size", type=parse_positive_int)

    verify = sub.add_parser("verify-mdp", parents=common, help="zero-delay argmax check")
    verify.add_argument("--policy", help="also evaluate this policy's value bracket")
    verify.add_argument("--table", help="CSV decision table for a custom policy")
    verify.add_argument("--deficit-cap", type=parse_positive_int)
    verify.add_argument("--tolerance", type=float, help="sup-norm stopping tolerance")
    verify.add_argument("--argmax-tolerance", type=float)

    pmf = sub.add_parser("pmf", parents=common, help="race or window-increment pmf dump")
    pmf.add_argument("--which", choices=["race", "window"], default="race")
    pmf.add_argument("--max-i", type=int, default=400, help="largest i (or w) tabulated")
    pmf.add_argument("--lead", type=int, nargs="+", help="leads for the window pmf")

    matrices = sub.add_parser("matrices", parents=common, help="epoch transition matrices")
    matrices.add_argument("--target", choices=["height1", "general"], default="height1")

    check = sub.add_parser("check", parents=common, help="oracle agreement suite")
    check.add_argument("--k-max", type=parse_positive_int, default=3)
    check.add_argument("--dp-k-max", type=int, help="zero-delay DP depths (default min(k-max, 3))")
    check.add_argument("--runs", type=parse_positive_int, default=20000)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--streams", type=parse_positive_int, default=1000)
    check.add_argument("--z", type=float, default=3.0, help="standard errors allowed")
    check.add_argument("--workers", type=parse_positive_int, default=workers)
    return parser


def config_file_arguments(path: str) -> List[str]:
    """Turn a key=value file into long flags"""
    if not os.path.isfile(path):
        raise UsageError(f"config file not found: {path}")
    arguments: List[str] = []
    for key, value in dotenv_values(path).items():
        flag = f"--{key.strip().lstrip('-')}"
        if key in BOOLEAN_FLAGS:
            if value is None or value.strip().lower() in TRUE_WORDS:
                arguments.append(flag)
            continue
        if value is None:
            raise UsageError(f"config key {key} has no value")
        arguments.extend([flag, *value.split()])
    return arguments


def expand_config(argv: List[str]) -> List[str]:
    """Splice config-file flags in right after the subcommand so explicit flags win"""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    position = next((i for i, token in enumerate(argv) if token in SUBCOMMANDS), None)
    if position is None:
        return argv
    return argv[: position + 1] + config_file_arguments(known.config) + argv[position + 1 :]


def parse_args(argv: Optional[List[str]] = None):
    """Parse command line arguments"""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = expand_config(argv)
    except UsageError as e:
        parser.error(str(e))
    return parser, parser.parse_args(argv)


def resolve_params(args: argparse.Namespace) -> ProtocolParams:
    """
    Build protocol parameters from exactly one rate pair.

    A preset supplies the total rate and delay unless they are given explicitly.
    """
    if args.preset:
        preset = PRESETS[args.preset]
        if args.lambda_ is None and args.a is None and args.h is None:
            args.lambda_ = parse_rational(preset.lambda_)
        if args.delta is None:
            args.delta = parse_rational(preset.delta)

    pair = (args.a is not None, args.h is not None)
    total = (args.lambda_ is not None, args.beta is not None)
    delta = args.delta if args.delta is not None else 0.0
    k = args.k if args.k is not None else 1
    if any(pair) and any(total):
        raise UsageError("give either --a/--h or --lambda/--beta, not both")
    if all(pair):
        return ProtocolParams(a=args.a, h=args.h, delta=delta, k=k)
    if all(total):
        return ProtocolParams.from_rates(args.lambda_, args.beta, delta, k)
    raise UsageError("exactly one rate pair is required: --a and --h, or --lambda and --beta")


def load_settings(path: Optional[str]) -> SolverConfig:
    if not path:
        return get_default_config()
    try:
        settings = SolverConfig(path)
    except (OSError, ValueError) as e:
        raise UsageError(str(e))
    set_default_config(settings)
    return settings


def _arguments_record(args: argparse.Namespace) -> dict:
    return {key: value for key, value in vars(args).items() if value is not None}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser, args = parse_args(argv)
    configure_logging(debug=args.debug, json_output=args.log_json)
    ledger = RunLedger(args.ledger)

    try:
        params = resolve_params(args)
        solver = load_settings(args.settings)
        if args.command == "simulate" and args.seed is None:
            args.seed = int(np.random.SeedSequence().entropy)
            logger.info("seed_generated", seed=args.seed)
    except UsageError as e:
        parser.error(str(e))
    except (ValidationError, ValueError) as e:
        print(f"nakamoto-safety: invalid parameters: {e}", file=sys.stderr)
        return 2

    logger.debug("command_started", command=args.command, params=params.describe())
    handler = HANDLERS[args.command]
    try:
        result = handler(args, params, solver)
    except UsageError as e:
        parser.error(str(e))
    except OutOfToleranceError as e:
        beta_max = ProtocolParams.tolerance_beta(params.lambda_, params.delta)
        print(f"nakamoto-safety: {e}; largest admissible beta is {beta_max:.6g}", file=sys.stderr)
        ledger.record(args.command, _arguments_record(args), {"error": str(e)}, e.exit_code)
        return e.exit_code
    except NakamotoError as e:
        print(f"nakamoto-safety: {e}", file=sys.stderr)
        ledger.record(args.command, _arguments_record(args), {"error": str(e)}, e.exit_code)
        return e.exit_code
    except (ValidationError, ValueError) as e:
        print(f"nakamoto-safety: {e}", file=sys.stderr)
        ledger.record(args.command, _arguments_record(args), {"error": str(e)}, 2)
        return 2

    ledger.record(args.command, _arguments_record(args), result.summary, result.exit_code)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
