"""Strip swaps, block moves, move enumeration and schedule replay.

Moves address strips by their index in the current strip decomposition, so
a schedule only makes sense replayed from its start permutation. The JSON
form also records the first value of each addressed strip; replay checks
those when present.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from stripsort.perm import Permutation, descent_count, strip_bounds, strip_count

SWAP = "swap"
BLOCK = "block"


class MoveError(ValueError):
    """A move does not apply to the permutation it was given."""


class ScheduleError(MoveError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index + 1}: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class StripSwap:
    left: int
    right: int
    first_values: tuple[int, int] | None = field(default=None, compare=False)

    kind = SWAP

    def to_json(self) -> dict:
        d = {"type": SWAP, "strips": [self.left + 1, self.right + 1]}
        if self.first_values is not None:
            d["first_values"] = list(self.first_values)
        return d


@dataclass(frozen=True)
class BlockMove:
    """Remove strip ``strip`` and reinsert it after ``gap`` of the remaining elements."""

    strip: int
    gap: int
    first_value: int | None = field(default=None, compare=False)

    kind = BLOCK

    def to_json(self) -> dict:
        d = {"type": BLOCK, "strip": self.strip + 1, "gap": self.gap}
        if self.first_value is not None:
            d["first_value"] = self.first_value
        return d


Move = Union[StripSwap, BlockMove]


# -- tuple-level primitives (hot paths in the solvers) -------------------------

def swap_seq(seq: tuple, bounds: Sequence[tuple[int, int]], i: int, j: int) -> tuple:
    (a0, a1), (b0, b1) = bounds[i], bounds[j]
    return seq[:a0] + seq[b0:b1] + seq[a1:b0] + seq[a0:a1] + seq[b1:]


def block_seq(seq: tuple, bounds: Sequence[tuple[int, int]], k: int, gap: int) -> tuple:
    s0, s1 = bounds[k]
    rest = seq[:s0] + seq[s1:]
    return rest[:gap] + seq[s0:s1] + rest[gap:]


def swap_pairs(count: int) -> Iterator[tuple[int, int]]:
    for i in range(count):
        for j in range(i + 1, count):
            yield i, j


def block_pairs(bounds: Sequence[tuple[int, int]], n: int) -> Iterator[tuple[int, int]]:
    for k, (s0, s1) in enumerate(bounds):
        for gap in range(n - (s1 - s0) + 1):
            if gap != s0:
                yield k, gap


# -- public API ----------------------------------------------------------------

def _check_swap(bounds, m: StripSwap, seq) -> None:
    s = len(bounds)
    if not (0 <= m.left < m.right < s):
        raise MoveError(f"invalid strip pair ({m.left + 1}, {m.right + 1}) for {s} strips")
    if m.first_values is not None:
        actual = (seq[bounds[m.left][0]], seq[bounds[m.right][0]])
        if tuple(m.first_values) != actual:
            raise MoveError(f"first values {tuple(m.first_values)} do not match strips {actual}")


def _check_block(bounds, m: BlockMove, seq) -> None:
    s = len(bounds)
    if not 0 <= m.strip < s:
        raise MoveError(f"invalid strip index {m.strip + 1} for {s} strips")
    s0, s1 = bounds[m.strip]
    limit = len(seq) - (s1 - s0)
    if not 0 <= m.gap <= limit:
        raise MoveError(f"gap {m.gap} outside 0..{limit}")
    if m.gap == s0:
        raise MoveError("block move leaves the strip where it is")
    if m.first_value is not None and m.first_value != seq[s0]:
        raise MoveError(f"first value {m.first_value} does not match strip {seq[s0]}")


def apply_strip_swap(p: Permutation, m: StripSwap) -> Permutation:
    seq = p.elements
    bounds = strip_bounds(seq)
    _check_swap(bounds, m, seq)
    return Permutation(swap_seq(seq, bounds, m.left, m.right))


def apply_block_move(p: Permutation, m: BlockMove) -> Permutation:
    seq = p.elements
    bounds = strip_bounds(seq)
    _check_block(bounds, m, seq)
    return Permutation(block_seq(seq, bounds, m.strip, m.gap))


def apply_move(p: Permutation, m: Move) -> Permutation:
    if isinstance(m, StripSwap):
        return apply_strip_swap(p, m)
    if isinstance(m, BlockMove):
        return apply_block_move(p, m)
    raise TypeError(f"not a move: {m!r}")


def enumerate_strip_swaps(p: Permutation) -> list[StripSwap]:
    seq = p.elements
    bounds = strip_bounds(seq)
    return [
        StripSwap(i, j, (seq[bounds[i][0]], seq[bounds[j][0]]))
        for i, j in swap_pairs(len(bounds))
    ]


def enumerate_block_moves(p: Permutation) -> list[BlockMove]:
    seq = p.elements
    bounds = strip_bounds(seq)
    return [BlockMove(k, g, seq[bounds[k][0]]) for k, g in block_pairs(bounds, len(seq))]


def annotate(p: Permutation, m: Move) -> Move:
    """Copy of ``m`` carrying the first values of the strips it addresses in ``p``."""
    bounds = strip_bounds(p.elements)
    if isinstance(m, StripSwap):
        return StripSwap(m.left, m.right, (p[bounds[m.left][0]], p[bounds[m.right][0]]))
    return BlockMove(m.strip, m.gap, p[bounds[m.strip][0]])


@dataclass(frozen=True)
class Schedule:
    start: Permutation
    kind: str
    moves: tuple[Move, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "moves", tuple(self.moves))
        if self.kind not in (SWAP, BLOCK):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        for idx, m in enumerate(self.moves):
            if m.kind != self.kind:
                raise ScheduleError(idx, f"{m.kind} move in a {self.kind} schedule")

    def __len__(self) -> int:
        return len(self.moves)

    def replay(self) -> Permutation:
        return apply_schedule(self.start, self)

    def trace(self) -> list[Permutation]:
        return trace_schedule(self.start, self)

    def to_json(self) -> dict:
        return {
            "start": list(self.start.elements),
            "kind": self.kind,
            "moves": [m.to_json() for m in self.moves],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "Schedule":
        kind = data["kind"]
        moves: list[Move] = []
        for idx, raw in enumerate(data.get("moves", [])):
            t = raw.get("type", kind)
            try:
                if t == SWAP:
                    i, j = raw["strips"]
                    fv = raw.get("first_values")
                    moves.append(StripSwap(int(i) - 1, int(j) - 1, tuple(fv) if fv else None))
                elif t == BLOCK:
                    moves.append(BlockMove(int(raw["strip"]) - 1, int(raw["gap"]), raw.get("first_value")))
                else:
                    raise ScheduleError(idx, f"unknown move type {t!r}")
            except (KeyError, TypeError, ValueError) as exc:
                if isinstance(exc, ScheduleError):
                    raise
                raise ScheduleError(idx, f"malformed move {raw!r}") from None
        return cls(Permutation.of(data["start"]), kind, tuple(moves))

    @classmethod
    def loads(cls, text: str) -> "Schedule":
        return cls.from_json(json.loads(text))


def trace_schedule(p: Permutation, s: Schedule | Iterable[Move]) -> list[Permutation]:
    """All permutations visited by replaying ``s`` from ``p``, ``p`` included."""
    moves = s.moves if isinstance(s, Schedule) else tuple(s)
    states = [p]
    for idx, m in enumerate(moves):
        try:
            states.append(apply_move(states[-1], m))
        except MoveError as exc:
            raise ScheduleError(idx, str(exc)) from None
    return states


def apply_schedule(p: Permutation, s: Schedule | Iterable[Move]) -> Permutation:
    return trace_schedule(p, s)[-1]


def move_deltas(p: Permutation, m: Move) -> tuple[int, int]:
    """(change in descents, change in strip count) caused by applying ``m`` to ``p``."""
    q = apply_move(p, m)
    return (
        descent_count(q.elements) - descent_count(p.elements),
        strip_count(q.elements) - strip_count(p.elements),
    )
