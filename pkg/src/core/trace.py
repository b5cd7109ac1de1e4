"""
src/core/trace.py

Line-oriented arrival traces: `t_b kind parent` per block, times in seconds
written with 15 significant digits.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Union

import numpy as np

from .errors import TraceFormatError
from .state import Arrival


@dataclass(frozen=True)
class TraceRecord:
    time: float
    kind: Arrival
    parent: int

    def format(self) -> str:
        return f"{self.time:.15g} {self.kind.value} {self.parent}"


def format_trace(records: Iterable[TraceRecord]) -> str:
    return "".join(record.format() + "\n" for record in records)


def parse_trace(text: str) -> List[TraceRecord]:
    """
    Parse trace text into records with strictly increasing times.

    Blank lines and `#` comments are skipped. A time equal to or below the
    previous one is moved to the next representable double above it.

    Raises:
        TraceFormatError: a line does not match `t_b kind parent`
    """
    records: List[TraceRecord] = []
    previous = -np.inf
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise TraceFormatError(f"line {lineno}: expected 3 fields, got {len(fields)}")
        try:
            time = float(fields[0])
            kind = Arrival(fields[1].upper())
            parent = int(fields[2])
        except ValueError as e:
            raise TraceFormatError(f"line {lineno}: {e}") from e
        if not np.isfinite(time) or time < 0:
            raise TraceFormatError(f"line {lineno}: invalid arrival time {fields[0]}")
        if parent < 0 or parent > len(records):
            raise TraceFormatError(
                f"line {lineno}: parent {parent} does not precede block {len(records) + 1}"
            )
        if time <= previous:
            time = float(np.nextafter(previous, np.inf))
        previous = time
        records.append(TraceRecord(time, kind, parent))
    return records


def write_trace(path: Union[str, Path], records: Iterable[TraceRecord]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_trace(records), encoding="utf-8")
    return path


def read_trace(path: Union[str, Path]) -> List[TraceRecord]:
    return parse_trace(Path(path).read_text(encoding="utf-8"))
