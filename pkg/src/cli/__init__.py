"""
src/cli

Command-line front end: presets, rational rate parsing, output writers and the
subcommand handlers.
"""

from .checks import OracleSuite
from .handlers import HANDLERS, CommandResult, UsageError
from .presets import PRESETS, Preset, parse_rational
from .writers import format_number, read_csv, render_csv, write_csv, write_json

__all__ = [
    "OracleSuite",
    "HANDLERS",
    "CommandResult",
    "UsageError",
    "PRESETS",
    "Preset",
    "parse_rational",
    "format_number",
    "read_csv",
    "render_csv",
    "write_csv",
    "write_json",
]
