"""
tests/test_tree.py

Block tree, its reduction to the compact state, and arrival traces.
"""

import pytest

from src.core.errors import TraceFormatError, TreeError
from src.core.state import Arrival, CompactState
from src.core.trace import TraceRecord, parse_trace, read_trace, write_trace
from src.core.tree import (
    BlockKind,
    BlockTree,
    TreeEvent,
    compact_of_tree,
    tree_apply,
    tree_violation,
)

DELTA = 10.0


def test_honest_block_on_genesis_gets_full_timer():
    tree = tree_apply(BlockTree(DELTA), TreeEvent(Arrival.H, parent=0))
    block = tree.block(1)
    assert block.height == 1
    assert block.kind is BlockKind.H
    assert block.timer == DELTA


def test_tree_apply_leaves_input_untouched():
    tree = BlockTree(DELTA)
    grown = tree_apply(tree, TreeEvent(Arrival.A, parent=0, elapsed=2.0))
    assert len(tree) == 1 and tree.clock == 0.0
    assert len(grown) == 2 and grown.clock == 2.0


def test_genesis_only_reduces_to_genesis_state():
    assert compact_of_tree(BlockTree(DELTA)) == CompactState.genesis()


def test_two_height_one_branches_reduce_with_remaining_timer():
    tree = BlockTree(DELTA)
    tree.add_block(Arrival.H, 0)
    tree.advance(3.0)
    tree.add_block(Arrival.A, 0)
    state = compact_of_tree(tree)
    assert (state.m, state.d, state.n) == (1, 1, 1)
    assert state.timers == pytest.approx((DELTA - 3.0,))


def test_honest_arrival_clamps_ancestor_timers():
    tree = BlockTree(DELTA)
    tree.add_block(Arrival.A, 0)
    tree.advance(1.0)
    tree.add_block(Arrival.H, 1)
    assert tree.block(1).timer == DELTA
    assert tree.block(2).timer == DELTA


def test_honest_block_at_public_height_is_rejected():
    tree = BlockTree(0.0)
    tree.add_block(Arrival.H, 0)
    with pytest.raises(TreeError):
        tree.add_block(Arrival.H, 0)


def test_adversarial_block_may_extend_any_block():
    tree = BlockTree(0.0)
    tree.add_block(Arrival.H, 0)
    tree.add_block(Arrival.H, 1)
    assert tree.add_block(Arrival.A, 0) == 3


def test_unknown_parent_is_rejected():
    with pytest.raises(TreeError):
        BlockTree(DELTA).add_block(Arrival.A, 5)


def _split_tree() -> BlockTree:
    """Private A-chain of height 2 on one branch, public H-chain on the other"""
    tree = BlockTree(0.0)
    tree.add_block(Arrival.A, 0)  # 1, height 1
    tree.add_block(Arrival.A, 1)  # 2, height 2
    tree.advance(1.0)
    tree.add_block(Arrival.H, 0)  # 3, height 1
    return tree


def test_violation_needs_two_branches_of_height_k():
    tree = _split_tree()
    # branch heights (2, 1): the second branch is below k = 2
    assert not tree_violation(tree, 2)
    tree.advance(1.0)
    tree.add_block(Arrival.H, 3)
    assert tree_violation(tree, 2)
    assert not tree_violation(tree, 3)


def test_single_branch_never_violates():
    tree = BlockTree(0.0)
    parent = 0
    for _ in range(5):
        parent = tree.add_block(Arrival.A, parent)
    assert not any(tree_violation(tree, k) for k in range(1, 7))


def test_compact_matches_tree_verdict():
    tree = _split_tree()
    tree.advance(1.0)
    tree.add_block(Arrival.H, 3)
    state = compact_of_tree(tree)
    assert state.is_violation(2) == tree.is_violation(2)
    assert state.public_height() == tree.public_height()


def test_trace_replay_rebuilds_tree(tmp_path):
    tree = BlockTree(DELTA)
    tree.add_block(Arrival.H, 0)
    tree.advance(2.5)
    tree.add_block(Arrival.A, 0)
    tree.advance(4.0)
    tree.add_block(Arrival.A, 2)

    path = write_trace(tmp_path / "run.trace", tree.to_trace())
    replayed = BlockTree.replay(read_trace(path), DELTA)
    assert replayed.clock == tree.clock
    assert compact_of_tree(replayed) == compact_of_tree(tree)


def test_trace_parser_orders_equal_times():
    records = parse_trace("# comment\n1.5 H 0\n1.5 A 0\n\n2 a 2\n")
    assert [r.kind for r in records] == [Arrival.H, Arrival.A, Arrival.A]
    assert records[1].time > records[0].time
    assert TraceRecord(1.5, Arrival.H, 0).format() == "1.5 H 0"


@pytest.mark.parametrize("text", ["1.0 H", "x H 0", "1.0 B 0", "1.0 H 3", "-1 H 0"])
def test_trace_parser_rejects_malformed_lines(text):
    with pytest.raises(TraceFormatError):
        parse_trace(text)
