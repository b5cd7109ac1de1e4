"""
src/cli/presets.py

Named parameter presets and rational rate parsing for the command line.
"""

import argparse
from fractions import Fraction
from typing import Dict, NamedTuple


class Preset(NamedTuple):
    lambda_: str
    delta: str
    description: str


PRESETS: Dict[str, Preset] = {
    "bitcoin": Preset("1/600", "10", "Bitcoin: one block per 600 s, 10 s delay bound"),
    "etc": Preset("1/13", "2", "Ethereum Classic: one block per 13 s, 2 s delay bound"),
}


def parse_rational(text: str) -> float:
    """Parse "1/600", "0.25" or "2.5e-3" exactly, then round once to float"""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return float(value)


def parse_nonnegative(text: str) -> float:
    value = parse_rational(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def parse_fraction(text: str) -> float:
    """Adversarial fraction in [0, 1)"""
    value = parse_rational(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError(f"fraction must lie in [0, 1): {text!r}")
    return value


def parse_positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return value
