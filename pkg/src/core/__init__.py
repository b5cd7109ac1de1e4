"""
src/core

Attack model: protocol parameters, compact state and transition table,
block tree, arrival traces and solver settings.
"""

from .config import SolverConfig, get_default_config, set_default_config
from .errors import (
    InadmissibleActionError,
    NakamotoError,
    NumericalError,
    OutOfToleranceError,
    PolicyError,
    TraceFormatError,
    TreeError,
    VerificationError,
)
from .params import ProtocolParams
from .state import (
    ZERO_TOLERANCE,
    ActionKind,
    Arrival,
    Branch,
    CompactState,
    StateClass,
)
from .trace import TraceRecord, format_trace, parse_trace, read_trace, write_trace
from .transitions import (
    admissible_actions,
    advance_time,
    apply_action,
    classify,
    is_violation,
    public_height,
)
from .tree import (
    Block,
    BlockKind,
    BlockTree,
    TreeEvent,
    compact_of_tree,
    tree_apply,
    tree_violation,
)

__all__ = [
    "SolverConfig",
    "get_default_config",
    "set_default_config",
    "NakamotoError",
    "OutOfToleranceError",
    "NumericalError",
    "InadmissibleActionError",
    "PolicyError",
    "TreeError",
    "TraceFormatError",
    "VerificationError",
    "ProtocolParams",
    "ZERO_TOLERANCE",
    "ActionKind",
    "Arrival",
    "Branch",
    "CompactState",
    "StateClass",
    "TraceRecord",
    "format_trace",
    "parse_trace",
    "read_trace",
    "write_trace",
    "admissible_actions",
    "advance_time",
    "apply_action",
    "classify",
    "is_violation",
    "public_height",
    "Block",
    "BlockKind",
    "BlockTree",
    "TreeEvent",
    "compact_of_tree",
    "tree_apply",
    "tree_violation",
]
