"""
src/core/config.py

Numerical settings shared by the analytic engines, the DP verifier and the
simulators.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
import yaml

logger = structlog.get_logger(__name__)


class SolverConfig:
    """Nested solver settings with dot-notation access"""

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path
        self.config = self._load_default_config()

        if config_path:
            self._load_config_file(config_path)

    def _load_default_config(self) -> Dict[str, Any]:
        return {
            "series": {
                "guard_terms": 8,
                "negative_tolerance": 1e-12,
                "extra_terms": 50,
            },
            "quadrature": {
                "nodes": 64,
            },
            "montecarlo": {
                "deficit_offset": 60,
                "warmup_jumpers": 10000,
                "batch_size": 4096,
                "workers": 1,
            },
            "mdp": {
                "deficit_offset": 60,
                "tolerance": 1e-12,
                "max_sweeps": 200000,
                "argmax_tolerance": 1e-9,
            },
            "output": {
                "digits": 17,
            },
        }

    def _load_config_file(self, config_path: str):
        """Merge a YAML or JSON overlay; a missing file is an error"""
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"settings file not found: {config_path}")

        with open(path, "r", encoding="utf-8") as f:
            if path.suffix.lower() in [".yaml", ".yml"]:
                file_config = yaml.safe_load(f) or {}
            elif path.suffix.lower() == ".json":
                file_config = json.load(f)
            else:
                raise ValueError(f"Unsupported settings file format: {path.suffix}")

        if not isinstance(file_config, dict):
            raise ValueError(f"settings file must hold a mapping: {config_path}")

        self._merge_config(self.config, file_config)
        logger.debug("settings_loaded", path=str(path))

    def _merge_config(self, base: Dict[str, Any], overlay: Dict[str, Any]):
        """Fold an overlay into the defaults section by section"""
        for section, value in overlay.items():
            current = base.get(section)
            if isinstance(current, dict) and isinstance(value, dict):
                self._merge_config(current, value)
            else:
                base[section] = value

    def get(self, key_path: str, default=None):
        """Look up a dotted key such as `mdp.tolerance`"""
        node: Any = self.config
        for part in key_path.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def series_guard_terms(self) -> int:
        return int(self.get("series.guard_terms", 8))

    def series_negative_tolerance(self) -> float:
        return float(self.get("series.negative_tolerance", 1e-12))

    def series_extra_terms(self) -> int:
        """Terms kept beyond k when a race pmf feeds a probability"""
        return int(self.get("series.extra_terms", 50))

    def quadrature_nodes(self) -> int:
        return int(self.get("quadrature.nodes", 64))

    def mc_deficit_offset(self) -> int:
        return int(self.get("montecarlo.deficit_offset", 60))

    def mc_warmup_jumpers(self) -> int:
        return int(self.get("montecarlo.warmup_jumpers", 10000))

    def mc_batch_size(self) -> int:
        return int(self.get("montecarlo.batch_size", 4096))

    def mc_workers(self) -> int:
        return int(self.get("montecarlo.workers", 1))

    def mdp_deficit_offset(self) -> int:
        return int(self.get("mdp.deficit_offset", 60))

    def mdp_tolerance(self) -> float:
        return float(self.get("mdp.tolerance", 1e-12))

    def mdp_max_sweeps(self) -> int:
        return int(self.get("mdp.max_sweeps", 200000))

    def mdp_argmax_tolerance(self) -> float:
        return float(self.get("mdp.argmax_tolerance", 1e-9))

    def output_digits(self) -> int:
        return int(self.get("output.digits", 17))


# Global configuration instance
_default_config = None


def get_default_config() -> SolverConfig:
    """Get the default configuration instance"""
    global _default_config
    if _default_config is None:
        _default_config = SolverConfig()
    return _default_config


def set_default_config(config: Optional[SolverConfig]):
    """Set the default configuration instance; None restores defaults"""
    global _default_config
    _default_config = config
