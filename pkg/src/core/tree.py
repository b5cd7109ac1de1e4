"""
src/core/tree.py

Full block-tree model used to validate the compact state.

Timers are stored as absolute deadlines: a block becomes public once the clock
reaches its deadline. A-blocks start with an infinite deadline, H-blocks with
clock + delta, and an H-arrival pulls every ancestor's deadline down to its own.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .errors import TreeError
from .state import ZERO_TOLERANCE, ActionKind, Arrival, Branch, CompactState
from .trace import TraceRecord


class BlockKind(str, Enum):
    GENESIS = "genesis"
    A = "A"
    H = "H"


@dataclass(frozen=True)
class Block:
    index: int
    parent: int
    height: int
    kind: BlockKind
    arrival_time: float
    timer: float


@dataclass(frozen=True)
class TreeEvent:
    """Arrival after `elapsed` seconds, extending `parent`, after publishing `publish`"""

    kind: Arrival
    parent: int
    elapsed: float = 0.0
    publish: Tuple[int, ...] = ()


class BlockTree:
    """Blocks with parent, height, kind and timer, plus the current clock"""

    def __init__(self, delta: float, capacity: int = 64):
        if delta < 0:
            raise ValueError(f"delay bound must be non-negative, got {delta}")
        capacity = max(capacity, 1)
        self.delta = float(delta)
        self.clock = 0.0
        self._size = 1
        self._parent = np.full(capacity, -1, dtype=np.int64)
        self._height = np.zeros(capacity, dtype=np.int64)
        self._arrival = np.zeros(capacity)
        self._deadline = np.zeros(capacity)
        self._branch = np.zeros(capacity, dtype=np.int64)
        self._kinds: List[BlockKind] = [BlockKind.GENESIS]
        # branch root (height-1 block) -> highest block, earliest on ties
        self._tips: Dict[int, int] = {}

    def __len__(self) -> int:
        return self._size

    def copy(self) -> "BlockTree":
        other = BlockTree(self.delta, capacity=len(self._parent))
        other.clock = self.clock
        other._size = self._size
        other._parent = self._parent.copy()
        other._height = self._height.copy()
        other._arrival = self._arrival.copy()
        other._deadline = self._deadline.copy()
        other._branch = self._branch.copy()
        other._kinds = list(self._kinds)
        other._tips = dict(self._tips)
        return other

    def timer(self, index: int) -> float:
        remaining = self._deadline[index] - self.clock
        if remaining <= ZERO_TOLERANCE:
            return 0.0
        return float(remaining)

    def block(self, index: int) -> Block:
        if not 0 <= index < self._size:
            raise TreeError(f"no block with index {index}")
        return Block(
            index=index,
            parent=int(self._parent[index]),
            height=int(self._height[index]),
            kind=self._kinds[index],
            arrival_time=float(self._arrival[index]),
            timer=self.timer(index),
        )

    @property
    def blocks(self) -> List[Block]:
        return [self.block(i) for i in range(self._size)]

    def public_height(self) -> int:
        size = self._size
        public = self._deadline[:size] - self.clock <= ZERO_TOLERANCE
        return int(self._height[:size][public].max())

    def branch_heights(self) -> Dict[int, int]:
        return {root: int(self._height[tip]) for root, tip in self._tips.items()}

    def ranked_branches(self) -> List[int]:
        """Branch roots by decreasing height; the lower-numbered root wins ties"""
        return sorted(self._tips, key=lambda root: (-self._height[self._tips[root]], root))

    def advance(self, elapsed: float) -> None:
        if elapsed < 0:
            raise TreeError(f"elapsed time must be non-negative, got {elapsed}")
        self.clock += elapsed

    def publish(self, index: int) -> None:
        """Make the chain ending at `index` public now"""
        if not 0 <= index < self._size:
            raise TreeError(f"cannot publish unknown block {index}")
        j = index
        while j >= 0 and self._deadline[j] > self.clock:
            self._deadline[j] = self.clock
            j = int(self._parent[j])

    def add_block(self, kind: Arrival, parent: int) -> int:
        """
        Append a block extending `parent` at the current clock.

        Raises:
            TreeError: unknown parent, or an H-block not above the public height
        """
        if not 0 <= parent < self._size:
            raise TreeError(f"unknown parent {parent} (tree has {self._size} blocks)")
        height = int(self._height[parent]) + 1
        if kind is Arrival.H:
            public = self.public_height()
            if height <= public:
                raise TreeError(
                    f"H-block at height {height} does not exceed public height {public}"
                )

        if self._size == len(self._parent):
            self._grow()
        index = self._size
        self._size += 1
        self._parent[index] = parent
        self._height[index] = height
        self._arrival[index] = self.clock
        self._branch[index] = index if height == 1 else self._branch[parent]
        self._kinds.append(BlockKind(kind.value))

        if kind is Arrival.H:
            limit = self.clock + self.delta
            self._deadline[index] = limit
            j = parent
            while j > 0 and self._deadline[j] > limit:
                self._deadline[j] = limit
                j = int(self._parent[j])
        else:
            self._deadline[index] = math.inf

        root = int(self._branch[index])
        tip = self._tips.get(root)
        if tip is None or height > self._height[tip]:
            self._tips[root] = index
        return index

    def apply(self, event: TreeEvent) -> "BlockTree":
        """Apply an event in place and return the tree"""
        self.advance(event.elapsed)
        for index in event.publish:
            self.publish(index)
        self.add_block(event.kind, event.parent)
        return self

    def _grow(self) -> None:
        extra = len(self._parent)
        self._parent = np.concatenate([self._parent, np.full(extra, -1, dtype=np.int64)])
        self._height = np.concatenate([self._height, np.zeros(extra, dtype=np.int64)])
        self._arrival = np.concatenate([self._arrival, np.zeros(extra)])
        self._deadline = np.concatenate([self._deadline, np.zeros(extra)])
        self._branch = np.concatenate([self._branch, np.zeros(extra, dtype=np.int64)])

    def ancestor_at(self, index: int, height: int) -> int:
        if height < 0 or height > self._height[index]:
            raise TreeError(f"block {index} has no ancestor at height {height}")
        j = index
        while self._height[j] > height:
            j = int(self._parent[j])
        return j

    def parent_for(self, action: ActionKind) -> int:
        """Block that a compact action extends: height i-1 on the named branch"""
        target = action.height - 1
        if target == 0:
            return 0
        ranked = self.ranked_branches()
        position = 0 if action.branch is Branch.HIGHER else 1
        if position >= len(ranked):
            raise TreeError(f"no {action.branch.value} branch for action {action}")
        return self.ancestor_at(self._tips[ranked[position]], target)

    def is_violation(self, k: int) -> bool:
        """Two distinct credible branches of height at least k"""
        floor = max(k, self.public_height())
        count = sum(1 for height in self.branch_heights().values() if height >= floor)
        return count >= 2

    def to_compact(self) -> CompactState:
        """Reduce to the two highest branches with per-height minimum timers"""
        ranked = self.ranked_branches()
        size = self._size
        keep = np.arange(size) == 0
        heights = [0, 0]
        for position, root in enumerate(ranked[:2]):
            keep |= self._branch[:size] == root
            heights[position] = int(self._height[self._tips[root]])
        n, m = heights

        remaining = self._deadline[:size][keep] - self.clock
        remaining[remaining <= ZERO_TOLERANCE] = 0.0
        per_height = np.full(n + 1, math.inf)
        np.minimum.at(per_height, self._height[:size][keep], remaining)

        d = int(np.flatnonzero(np.isfinite(per_height)).max())
        lo = min(m, d)
        timers = tuple(float(value) for value in per_height[lo : d + 1])
        return CompactState(m, d, n, timers)

    def to_trace(self) -> List[TraceRecord]:
        return [
            TraceRecord(float(self._arrival[i]), Arrival(self._kinds[i].value), int(self._parent[i]))
            for i in range(1, self._size)
        ]

    @classmethod
    def replay(
        cls, records: Iterable[TraceRecord], delta: float, capacity: Optional[int] = None
    ) -> "BlockTree":
        """Rebuild a tree from arrival records"""
        records = list(records)
        tree = cls(delta, capacity=capacity or len(records) + 1)
        for record in records:
            if record.time < tree.clock:
                raise TreeError(f"arrival at {record.time} precedes clock {tree.clock}")
            tree.clock = record.time
            tree.add_block(record.kind, record.parent)
        return tree


def tree_apply(tree: BlockTree, event: TreeEvent) -> BlockTree:
    """Return a new tree with the event applied; the input is left untouched"""
    return tree.copy().apply(event)


def tree_violation(tree: BlockTree, k: int) -> bool:
    return tree.is_violation(k)


def compact_of_tree(tree: BlockTree) -> CompactState:
    return tree.to_compact()
