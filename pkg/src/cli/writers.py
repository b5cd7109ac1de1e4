"""
src/cli/writers.py

Machine-readable output (CSV, JSON) and rich tables for the terminal.
"""

import csv
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from rich.console import Console
from rich.table import Table

DEFAULT_DIGITS = 17

# diagnostics go to stderr so stdout can be piped
console = Console(stderr=True)


def format_number(value: Any, digits: int = DEFAULT_DIGITS) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


@contextmanager
def open_output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as f:
        yield f


def render_csv(
    header: Sequence[str], rows: Iterable[Sequence[Any]], digits: int = DEFAULT_DIGITS
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v, digits) for v in row])
    return buffer.getvalue()


def write_csv(
    path: Optional[str],
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    digits: int = DEFAULT_DIGITS,
) -> None:
    with open_output(path) as f:
        f.write(render_csv(header, rows, digits))


def write_json(path: Optional[str], payload: Any) -> None:
    with open_output(path) as f:
        if hasattr(payload, "model_dump_json"):
            f.write(payload.model_dump_json(indent=2, exclude={"timestamp"}))
        else:
            json.dump(payload, f, indent=2, default=str)
        f.write("\n")


def read_csv(text: str) -> List[List[str]]:
    return list(csv.reader(io.StringIO(text)))


def rich_table(
    title: str,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    digits: int = 6,
) -> Table:
    table = Table(title=title, show_header=True, header_style="bold cyan")
    for name in header:
        table.add_column(name, justify="right")
    for row in rows:
        table.add_row(*[format_number(v, digits) for v in row])
    return table
