import json
from math import comb

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from stripsort import (
    BlockMove,
    MoveError,
    Permutation,
    PermutationError,
    Schedule,
    ScheduleError,
    StripSwap,
    apply_block_move,
    apply_schedule,
    apply_strip_swap,
    enumerate_block_moves,
    enumerate_strip_swaps,
    identity,
    parse_permutation,
    rev,
    strips,
)
from stripsort.harness import swap_example_schedule
from stripsort.moves import apply_move, move_deltas

from conftest import all_perms
from oracles import block_results, swap_results


def P(text):
    return parse_permutation(text)


def swap_by_first(p, a, b):
    firsts = [s.first for s in strips(p)]
    i, j = sorted((firsts.index(a), firsts.index(b)))
    return StripSwap(i, j)


def test_example_first_swap():
    p = P("2 5 6 3 7 8 9 4 1")
    q = apply_strip_swap(p, swap_by_first(p, 5, 3))
    assert q == P("2 3 5 6 7 8 9 4 1")
    assert strips(q).count == 4


def test_example_second_swap():
    p = P("2 3 5 6 7 8 9 4 1")
    q = apply_strip_swap(p, swap_by_first(p, 5, 4))
    assert q == P("2 3 4 5 6 7 8 9 1")
    assert strips(q).count == 2


def test_nonadjacent_swap_keeps_middle():
    # "3 5 1" is not a permutation of 1..3; same shape on a valid input
    with pytest.raises(PermutationError):
        P("3 5 1")
    assert apply_strip_swap(P("3 5 1 2 4"), StripSwap(0, 2)) == P("1 2 5 3 4")
    assert apply_strip_swap(P("2 4 1 3"), StripSwap(0, 2)) == P("1 4 2 3")


@pytest.mark.parametrize("move", [StripSwap(0, 4), StripSwap(2, 1), StripSwap(1, 1), StripSwap(-1, 2)])
def test_invalid_swap(move):
    with pytest.raises(MoveError):
        apply_strip_swap(P("4 1 3 2"), move)


def test_swap_first_value_mismatch():
    with pytest.raises(MoveError, match="first values"):
        apply_strip_swap(P("4 1 3 2"), StripSwap(0, 1, (4, 3)))


def test_block_move_examples():
    assert apply_block_move(P("4 1 3 2"), BlockMove(0, 3)) == P("1 3 2 4")
    assert apply_block_move(P("1 3 2 4"), BlockMove(2, 1)) == P("1 2 3 4")


def test_block_noop_rejected():
    with pytest.raises(MoveError, match="leaves the strip"):
        apply_block_move(identity(5), BlockMove(0, 0))
    assert enumerate_block_moves(identity(5)) == []
    with pytest.raises(MoveError, match="leaves the strip"):
        apply_block_move(P("4 1 3 2"), BlockMove(2, 2))


def test_block_gap_out_of_range():
    with pytest.raises(MoveError, match="gap"):
        apply_block_move(P("4 1 3 2"), BlockMove(0, 4))


@pytest.mark.parametrize("text, count", [("4 1 3 2", 6), ("1 2 3 4 5", 0), ("2 5 6 3 7 8 9 4 1", 15)])
def test_enumerate_strip_swaps_count(text, count):
    p = P(text)
    moves = enumerate_strip_swaps(p)
    assert len(moves) == count == comb(strips(p).count, 2)
    assert [(m.left, m.right) for m in moves] == sorted((m.left, m.right) for m in moves)


def test_enumerate_block_moves_4132():
    p = P("4 1 3 2")
    moves = enumerate_block_moves(p)
    # brute force over explicit strip lists
    assert len(moves) == len(list(block_results(p.elements))) == 12
    assert len(moves) <= strips(p).count ** 2


def test_enumerate_block_moves_contains_fix():
    p = P("1 3 2 4")
    results = {apply_block_move(p, m) for m in enumerate_block_moves(p)}
    assert identity(4) in results
    assert BlockMove(2, 1) in enumerate_block_moves(p)


@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_matches_brute_force(n):
    for p in all_perms(n):
        swaps = enumerate_strip_swaps(p)
        blocks = enumerate_block_moves(p)
        assert len(set(swaps)) == len(swaps)
        assert len(set(blocks)) == len(blocks)
        assert sorted(apply_strip_swap(p, m).elements for m in swaps) == sorted(swap_results(p.elements))
        assert sorted(apply_block_move(p, m).elements for m in blocks) == sorted(block_results(p.elements))


def test_swap_example_schedule_replay():
    s = swap_example_schedule()
    states = s.trace()
    assert states[-1] == identity(9)
    assert [strips(x).count for x in states] == [6, 4, 2, 1]


def test_empty_schedule():
    p = P("3 1 2")
    assert apply_schedule(p, Schedule(p, "swap")) == p


def test_two_swap_schedule_4132():
    p = P("4 1 3 2")
    s = Schedule(p, "swap", (StripSwap(0, 3), StripSwap(0, 1)))
    states = s.trace()
    assert states[1] == P("2 1 3 4")
    assert states[2] == identity(4)


def test_schedule_reports_failing_index():
    p = P("4 1 3 2")
    s = Schedule(p, "swap", (StripSwap(0, 3), StripSwap(0, 5)))
    with pytest.raises(ScheduleError) as info:
        apply_schedule(p, s)
    assert info.value.index == 1


def test_schedule_must_be_homogeneous():
    with pytest.raises(ScheduleError):
        Schedule(P("2 1"), "swap", (BlockMove(0, 1),))


def test_schedule_json_round_trip():
    s = swap_example_schedule()
    data = json.loads(s.dumps())
    assert data["kind"] == "swap"
    assert data["moves"][0] == {"type": "swap", "strips": [2, 3], "first_values": [5, 3]}
    back = Schedule.from_json(data)
    assert back == s and back.replay() == identity(9)
    b = Schedule(P("4 1 3 2"), "block", (BlockMove(0, 3, 4),))
    assert Schedule.loads(b.dumps()) == b
    assert b.to_json()["moves"][0] == {"type": "block", "strip": 1, "gap": 3, "first_value": 4}


def test_schedule_json_first_value_checked_on_replay():
    data = swap_example_schedule().to_json()
    data["moves"][1]["first_values"] = [5, 9]
    with pytest.raises(ScheduleError) as info:
        Schedule.from_json(data).replay()
    assert info.value.index == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_move_delta_bounds_exhaustive(n):
    for p in all_perms(n):
        for m in enumerate_strip_swaps(p):
            d_rev, d_strips = move_deltas(p, m)
            assert d_rev >= -2
            assert d_strips >= -4
        for m in enumerate_block_moves(p):
            assert move_deltas(p, m)[0] >= -1


@given(st.integers(2, 8).flatmap(lambda n: st.permutations(range(1, n + 1))), st.data())
def test_double_swap_restores_when_strips_survive(seq, data):
    p = Permutation.of(seq)
    moves = enumerate_strip_swaps(p)
    assume(moves)
    m = data.draw(st.sampled_from(moves))
    d = strips(p)
    a, b = d[m.left], d[m.right]
    q = apply_strip_swap(p, m)
    after = {tuple(q[s.start:s.stop]) for s in strips(q)}
    blk_a, blk_b = tuple(p[a.start:a.stop]), tuple(p[b.start:b.stop])
    assume(blk_a in after and blk_b in after)
    firsts = [s.first for s in strips(q)]
    i, j = sorted((firsts.index(blk_b[0]), firsts.index(blk_a[0])))
    assert apply_strip_swap(q, StripSwap(i, j)) == p


@given(st.integers(1, 8).flatmap(lambda n: st.permutations(range(1, n + 1))))
def test_every_enumerated_move_validates(seq):
    p = Permutation.of(seq)
    for m in enumerate_strip_swaps(p) + enumerate_block_moves(p):
        q = apply_move(p, m)
        assert sorted(q) == sorted(p)
        assert q != p
