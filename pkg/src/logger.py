import datetime
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import structlog


def configure_logging(debug: bool = False, json_output: bool = False) -> None:
    """Route structlog output to stderr so stdout stays machine-readable"""
    level = logging.DEBUG if debug else logging.WARNING
    renderer = (
        structlog.processors.JSONRenderer()
        if json_output
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


class RunLedger:
    """Append-only JSON-lines record of CLI invocations"""

    def __init__(self, ledger_file: Optional[str] = None):
        if ledger_file:
            self.ledger_file = Path(ledger_file)
            self._ensure_file()
        else:
            self.ledger_file = None

    def _ensure_file(self):
        if self.ledger_file and not self.ledger_file.exists():
            self.ledger_file.parent.mkdir(parents=True, exist_ok=True)
            self.ledger_file.touch()

    def record(
        self,
        command: str,
        arguments: Dict[str, Any],
        result: Dict[str, Any],
        exit_code: int = 0,
    ) -> Optional[Dict[str, Any]]:
        if not self.ledger_file:
            return None
        entry = {
            "timestamp": datetime.datetime.now().isoformat(timespec="seconds"),
            "command": command,
            "arguments": arguments,
            "result": result,
            "exit_code": exit_code,
        }
        with open(self.ledger_file, "a", encoding="utf-8") as f:
            f.write(json.dumps(entry, default=str) + "\n")
        return entry

    def entries(self):
        if not self.ledger_file or not self.ledger_file.exists():
            return []
        with open(self.ledger_file, "r", encoding="utf-8") as f:
            return [json.loads(line) for line in f if line.strip()]
