
import pytest

from stripsort import (
    BudgetExhausted,
    Permutation,
    block_bfs_oracle,
    bs_exact,
    greedy_upper_bound,
    has_exact_swap_schedule,
    has_perfect_block_schedule,
    identity,
    lower_bound_rev,
    lower_bound_strips,
    parse_permutation,
    rev,
    ssd_bfs_oracle,
    ssd_exact,
    strips,
)
from stripsort.harness import enumerate_perms
from stripsort.perm import descent_count
from stripsort.solvers import SWAP, BLOCK, distance_table

from conftest import all_perms
from oracles import block_results, bfs_distance, swap_results

SEC2 = "2 5 6 3 7 8 9 4 1"


def P(text):
    return parse_permutation(text)


def check_witness(p, res):
    w = res.witness
    assert w.start == p
    assert len(w) == res.distance
    assert w.replay().is_identity()


@pytest.mark.parametrize("solver", [ssd_bfs_oracle, ssd_exact, block_bfs_oracle, bs_exact])
def test_identity_distance_zero(solver):
    res = solver(identity(6))
    assert res.distance == 0 and len(res.witness) == 0


def test_ssd_4132():
    # frozen from tests/oracles.bfs_distance over explicit strip lists
    assert bfs_distance((4, 1, 3, 2), swap_results) == 2
    for solver in (ssd_bfs_oracle, ssd_exact):
        res = solver(P("4 1 3 2"))
        assert res.distance == 2
        check_witness(P("4 1 3 2"), res)
    assert lower_bound_rev(P("4 1 3 2")) == 1


def test_ssd_swap_example_resolved():
    # the 3-swap schedule is optimal: no 2-swap schedule exists
    assert bfs_distance((2, 5, 6, 3, 7, 8, 9, 4, 1), swap_results) == 3
    p = P(SEC2)
    assert ssd_bfs_oracle(p).distance == 3
    res = ssd_exact(p)
    assert res.distance == 3
    check_witness(p, res)
    with pytest.raises(BudgetExhausted):
        ssd_exact(p, budget=2)


def test_ssd_swap_example_intermediate():
    p = P("2 3 5 6 7 8 9 4 1")
    assert bfs_distance(p.elements, swap_results) == 2
    assert ssd_exact(p).distance == ssd_bfs_oracle(p).distance == 2


def test_bs_examples():
    assert bfs_distance((4, 1, 3, 2), block_results) == 2
    res = bs_exact(P("4 1 3 2"))
    assert res.distance == 2
    check_witness(P("4 1 3 2"), res)
    pn = P("7 2 6 5 8 3 1 4")
    assert bfs_distance(pn.elements, block_results) == 4
    res = bs_exact(pn)
    assert res.distance == 4 >= rev(pn).rev
    check_witness(pn, res)


def test_bfs_cap_and_guard():
    with pytest.raises(BudgetExhausted, match="cap"):
        ssd_bfs_oracle(P(SEC2), cap=2)
    with pytest.raises(BudgetExhausted, match="guard"):
        ssd_bfs_oracle(Permutation(tuple(range(10, 0, -1))))


def test_timeout_reported():
    p = Permutation((1, 14, 5, 12, 9, 2, 7, 13, 4, 11, 3, 8, 6, 10))
    with pytest.raises(BudgetExhausted) as info:
        bs_exact(p, timeout=0.0)
    assert info.value.reason == "time limit"


@pytest.mark.parametrize("n", range(1, 6))
def test_oracle_equivalence_exhaustive(n):
    for p in all_perms(n):
        for exact, oracle in ((ssd_exact, ssd_bfs_oracle), (bs_exact, block_bfs_oracle)):
            a, b = exact(p), oracle(p)
            assert a.distance == b.distance, p
            check_witness(p, a)
            check_witness(p, b)


def test_distance_table_matches_brute_force():
    for n in range(1, 6):
        for kind, step in ((SWAP, swap_results), (BLOCK, block_results)):
            table = distance_table(n, kind)
            for p in all_perms(n):
                assert table[p.elements] == bfs_distance(p.elements, step)


def test_ida_matches_table_s6(s6):
    ssd_t, bs_t = distance_table(6, SWAP), distance_table(6, BLOCK)
    for p in s6:
        assert ssd_exact(p).distance == ssd_t[p.elements]
        assert bs_exact(p).distance == bs_t[p.elements]


def test_transposition_table_same_distances(s5):
    for p in s5:
        assert ssd_exact(p, transpositions=True).distance == ssd_exact(p).distance
        assert bs_exact(p, transpositions=True).distance == bs_exact(p).distance


def test_bound_soundness_s6(s6):
    ssd_t, bs_t = distance_table(6, SWAP), distance_table(6, BLOCK)
    for p in s6:
        assert ssd_t[p.elements] >= lower_bound_rev(p)
        assert ssd_t[p.elements] >= lower_bound_strips(p)
        assert bs_t[p.elements] >= rev(p).rev


def test_monotone_budget():
    for s in enumerate_perms(7, 40, 11):
        p = Permutation(s)
        k = len(greedy_upper_bound(p))
        for budget in range(k, k + 2):
            assert ssd_exact(p, budget=budget).distance <= k


def test_result_fields():
    res = ssd_exact(P(SEC2))
    assert res.lower_bound == 2
    assert res.bound_used in ("rev", "strips")
    assert res.nodes_expanded > 0
    j = res.to_json()
    assert set(j) >= {"distance", "lower_bound", "nodes", "witness"}


def test_perfect_block_schedule():
    v = has_perfect_block_schedule(P("4 1 3 2"))
    assert v.holds and len(v.witness) == 2
    states = v.witness.trace()
    assert [descent_count(b.elements) - descent_count(a.elements) for a, b in zip(states, states[1:])] == [-1, -1]
    assert has_perfect_block_schedule(identity(4)).holds
    v = has_perfect_block_schedule(P("2 4 1 3"))
    assert v.holds is False and v.witness is None


def test_perfect_block_schedule_matches_bs(s5):
    for p in s5:
        assert has_perfect_block_schedule(p).holds == (block_bfs_oracle(p).distance == rev(p).rev)


def test_exact_swap_schedule():
    assert has_exact_swap_schedule(identity(3)).holds is True
    v = has_exact_swap_schedule(P("4 1 3 2"))
    assert v.holds is False
    v = has_exact_swap_schedule(P("2 1"))
    assert v.holds is None  # odd rev: not applicable


def test_exact_swap_witness_is_all_minus_two(s6):
    for p in s6:
        v = has_exact_swap_schedule(p)
        if v.holds:
            states = v.witness.trace()
            assert all(descent_count(b.elements) - descent_count(a.elements) == -2
                       for a, b in zip(states, states[1:]))
            assert len(v.witness) == rev(p).rev // 2


def test_greedy_examples():
    assert len(greedy_upper_bound(identity(5))) == 0
    g = greedy_upper_bound(P(SEC2))
    assert len(g) <= 3 and g.replay().is_identity()
    g = greedy_upper_bound(P("4 1 3 2"))
    assert len(g) == 2 and g.replay().is_identity()


def test_greedy_terminates_and_bounds(s6):
    for p in s6:
        g = greedy_upper_bound(p)
        assert g.replay().is_identity()
        assert len(g) <= strips(p).count - 1
        counts = [strips(s).count for s in g.trace()]
        assert all(b < a for a, b in zip(counts, counts[1:]))
