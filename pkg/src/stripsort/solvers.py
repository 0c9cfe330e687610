"""Exact strip-swap and block-sorting distances.

Two independent routes are kept on purpose:

* breadth-first oracles (:func:`ssd_bfs_oracle`, :func:`block_bfs_oracle`,
  :func:`distance_table`) that use no heuristic at all, and
* iterative-deepening searches (:func:`ssd_exact`, :func:`bs_exact`) pruned
  by the descent and strip-count lower bounds.

The test suite checks that they agree.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from stripsort.moves import (
    BLOCK,
    SWAP,
    BlockMove,
    Schedule,
    StripSwap,
    block_pairs,
    block_seq,
    swap_pairs,
    swap_seq,
)
from stripsort.perm import (
    Permutation,
    descent_count,
    lower_bound_rev,
    lower_bound_strips,
    strip_bounds,
    strip_count,
)

DEFAULT_BFS_MAX_N = 9


class BudgetExhausted(Exception):
    """No schedule found within the move budget, node cap or time limit."""

    def __init__(self, reason: str, limit=None, nodes: int = 0):
        msg = f"search stopped: {reason}"
        if limit is not None:
            msg += f" (limit {limit})"
        super().__init__(msg)
        self.reason = reason
        self.limit = limit
        self.nodes = nodes


@dataclass(frozen=True)
class DistanceResult:
    distance: int
    witness: Schedule
    nodes_expanded: int
    bound_used: str
    lower_bound: int

    def to_json(self) -> dict:
        return {
            "distance": self.distance,
            "lower_bound": self.lower_bound,
            "bound_used": self.bound_used,
            "nodes": self.nodes_expanded,
            "witness": self.witness.to_json(),
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of a schedule-existence predicate.

    ``holds`` is None when the predicate does not apply (exactness asked of a
    permutation with an odd number of descents).
    """

    holds: Optional[bool]
    witness: Optional[Schedule]
    nodes: int = 0

    def __bool__(self) -> bool:
        return bool(self.holds)


Expander = Callable[[tuple], Iterator[tuple[tuple, tuple]]]


def _swap_children(seq: tuple) -> Iterator[tuple[tuple, tuple]]:
    bounds = strip_bounds(seq)
    for i, j in swap_pairs(len(bounds)):
        yield (i, j), swap_seq(seq, bounds, i, j)


def _block_children(seq: tuple) -> Iterator[tuple[tuple, tuple]]:
    bounds = strip_bounds(seq)
    for k, g in block_pairs(bounds, len(seq)):
        yield (k, g), block_seq(seq, bounds, k, g)


def _swap_h(seq: tuple) -> int:
    return max(-(-descent_count(seq) // 2), -(-(strip_count(seq) - 1) // 4))


def _to_schedule(start: tuple, kind: str, raw_moves: list[tuple]) -> Schedule:
    moves = []
    seq = start
    for mv in raw_moves:
        bounds = strip_bounds(seq)
        if kind == SWAP:
            i, j = mv
            moves.append(StripSwap(i, j, (seq[bounds[i][0]], seq[bounds[j][0]])))
            seq = swap_seq(seq, bounds, i, j)
        else:
            k, g = mv
            moves.append(BlockMove(k, g, seq[bounds[k][0]]))
            seq = block_seq(seq, bounds, k, g)
    return Schedule(Permutation(start), kind, tuple(moves))


def _deadline(timeout: float | None) -> float | None:
    return None if timeout is None else time.monotonic() + timeout


# -- breadth-first oracles -----------------------------------------------------

def _bfs(p: Permutation, kind: str, cap, max_n, timeout) -> DistanceResult:
    if p.n > max_n:
        raise BudgetExhausted("state-space guard", max_n)
    expand = _swap_children if kind == SWAP else _block_children
    start = p.elements
    target = tuple(range(1, p.n + 1))
    deadline = _deadline(timeout)
    parent: dict[tuple, tuple | None] = {start: None}
    frontier = [start]
    depth = 0
    nodes = 0
    while start != target and target not in parent:
        if cap is not None and depth >= cap:
            raise BudgetExhausted("cap exceeded", cap, nodes)
        if not frontier:
            raise RuntimeError("identity unreachable")  # pragma: no cover
        nxt = []
        for seq in frontier:
            nodes += 1
            if deadline is not None and nodes % 256 == 0 and time.monotonic() > deadline:
                raise BudgetExhausted("time limit", timeout, nodes)
            for mv, child in expand(seq):
                if child not in parent:
                    parent[child] = (seq, mv)
                    nxt.append(child)
        frontier = nxt
        depth += 1
    raw = []
    cur = target
    while parent[cur] is not None:
        prev, mv = parent[cur]
        raw.append(mv)
        cur = prev
    raw.reverse()
    lb = lower_bound_rev(start) if kind == SWAP else descent_count(start)
    return DistanceResult(len(raw), _to_schedule(start, kind, raw), nodes, "none", lb)


def ssd_bfs_oracle(
    p: Permutation, cap: int | None = None, *, max_n: int = DEFAULT_BFS_MAX_N,
    timeout: float | None = None,
) -> DistanceResult:
    """Strip-swap distance by plain breadth-first search (no pruning)."""
    return _bfs(p, SWAP, cap, max_n, timeout)


def block_bfs_oracle(
    p: Permutation, cap: int | None = None, *, max_n: int = DEFAULT_BFS_MAX_N,
    timeout: float | None = None,
) -> DistanceResult:
    """Block-sorting distance by plain breadth-first search (no pruning)."""
    return _bfs(p, BLOCK, cap, max_n, timeout)


def distance_table(n: int, kind: str) -> dict[tuple, int]:
    """Distance to the identity for every permutation of size ``n``.

    Builds the whole move graph on S_n, reverses it and runs one
    breadth-first search from the identity.
    """
    if n > 8:
        raise BudgetExhausted("state-space guard", 8)
    expand = _swap_children if kind == SWAP else _block_children
    preds: dict[tuple, list[tuple]] = {}
    for seq in itertools.permutations(range(1, n + 1)):
        for _, child in expand(seq):
            preds.setdefault(child, []).append(seq)
    target = tuple(range(1, n + 1))
    dist = {target: 0}
    queue = deque([target])
    while queue:
        cur = queue.popleft()
        for prev in preds.get(cur, ()):
            if prev not in dist:
                dist[prev] = dist[cur] + 1
                queue.append(prev)
    return dist


# -- iterative deepening -------------------------------------------------------

def _ida(
    start: tuple,
    expand: Expander,
    heuristic: Callable[[tuple], int],
    budget: int | None,
    timeout: float | None,
    transpositions: bool,
) -> tuple[list[tuple], int]:
    deadline = _deadline(timeout)
    nodes = 0
    path: list[tuple] = []
    seen: dict[tuple, int] = {}

    def search(seq: tuple, g: int, bound: int) -> int:
        nonlocal nodes
        h = heuristic(seq)
        f = g + h
        if f > bound:
            return f
        if h == 0 and seq == tuple(range(1, len(seq) + 1)):
            return -1
        if transpositions:
            if seen.get(seq, math.inf) <= g:
                return math.inf
            seen[seq] = g
        nodes += 1
        if deadline is not None and nodes % 512 == 0 and time.monotonic() > deadline:
            raise BudgetExhausted("time limit", timeout, nodes)
        lowest = math.inf
        done = set()
        for mv, child in expand(seq):
            if child in done:
                continue
            done.add(child)
            path.append(mv)
            t = search(child, g + 1, bound)
            if t == -1:
                return -1
            path.pop()
            if t < lowest:
                lowest = t
        return lowest

    bound = heuristic(start)
    while True:
        if budget is not None and bound > budget:
            raise BudgetExhausted("move budget", budget, nodes)
        seen.clear()
        t = search(start, 0, bound)
        if t == -1:
            return list(path), nodes
        if t == math.inf:  # pragma: no cover - identity is always reachable
            raise RuntimeError("search space exhausted")
        bound = t


def ssd_exact(
    p: Permutation,
    budget: int | None = None,
    *,
    timeout: float | None = None,
    transpositions: bool = False,
) -> DistanceResult:
    """Strip-swap distance by iterative deepening.

    Nodes are pruned with ``max(ceil(rev/2), ceil((strips-1)/4))``. Without an
    explicit ``budget`` the greedy schedule length caps the search. Raises
    :class:`BudgetExhausted` if no schedule of length ``<= budget`` exists.
    """
    if budget is None:
        budget = len(greedy_upper_bound(p))
    raw, nodes = _ida(p.elements, _swap_children, _swap_h, budget, timeout, transpositions)
    lb_r, lb_s = lower_bound_rev(p), lower_bound_strips(p)
    used = "rev" if lb_r >= lb_s else "strips"
    return DistanceResult(len(raw), _to_schedule(p.elements, SWAP, raw), nodes, used, max(lb_r, lb_s))


def bs_exact(
    p: Permutation,
    budget: int | None = None,
    *,
    timeout: float | None = None,
    transpositions: bool = False,
) -> DistanceResult:
    """Block-sorting distance by iterative deepening pruned by the descent count."""
    if budget is None:
        budget = strip_count(p.elements) - 1
    raw, nodes = _ida(p.elements, _block_children, descent_count, budget, timeout, transpositions)
    return DistanceResult(len(raw), _to_schedule(p.elements, BLOCK, raw), nodes, "rev", descent_count(p.elements))


def has_perfect_block_schedule(p: Permutation, *, timeout: float | None = None) -> Verdict:
    """Whether ``p`` sorts in exactly rev(p) block moves."""
    r = descent_count(p.elements)
    try:
        res = bs_exact(p, budget=r, timeout=timeout)
    except BudgetExhausted as exc:
        if exc.reason != "move budget":
            raise
        return Verdict(False, None, exc.nodes)
    return Verdict(True, res.witness, res.nodes_expanded)


def has_exact_swap_schedule(p: Permutation, *, timeout: float | None = None) -> Verdict:
    """Whether ``p`` sorts in rev(p)/2 strip swaps, each removing two descents.

    Not applicable (``holds is None``) when rev(p) is odd.
    """
    r = descent_count(p.elements)
    if r % 2:
        return Verdict(None, None, 0)
    try:
        res = ssd_exact(p, budget=r // 2, timeout=timeout)
    except BudgetExhausted as exc:
        if exc.reason != "move budget":
            raise
        return Verdict(False, None, exc.nodes)
    for state, nxt in itertools.pairwise(res.witness.trace()):
        if descent_count(nxt.elements) - descent_count(state.elements) != -2:
            raise AssertionError("exact schedule contains a swap that is not -2")
    return Verdict(True, res.witness, res.nodes_expanded)


def greedy_upper_bound(p: Permutation) -> Schedule:
    """A terminating swap schedule whose length bounds SSD(p) from above.

    Only swaps that lower the strip count are taken (one always exists for a
    non-identity permutation); among them the largest descent reduction wins,
    then the largest strip reduction, then the lexicographically first pair.
    """
    seq = p.elements
    raw = []
    while strip_count(seq) > 1:
        bounds = strip_bounds(seq)
        s0, r0 = len(bounds), descent_count(seq)
        best = None
        for i, j in swap_pairs(len(bounds)):
            child = swap_seq(seq, bounds, i, j)
            ds = s0 - strip_count(child)
            if ds <= 0:
                continue
            key = (r0 - descent_count(child), ds)
            if best is None or key > best[0]:
                best = (key, (i, j), child)
        if best is None:  # pragma: no cover - excluded by the merge argument
            raise RuntimeError(f"no strip-merging swap for {seq}")
        raw.append(best[1])
        seq = best[2]
    return _to_schedule(p.elements, SWAP, raw)
