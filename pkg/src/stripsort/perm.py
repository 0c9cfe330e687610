"""Permutations, strip decompositions, descents and the two swap lower bounds.

Positions are 0-based in Python objects. Every text or JSON format uses the
one-line notation, and any index written out is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence


class PermutationError(ValueError):
    """Input is not a permutation of 1..n."""


@dataclass(frozen=True)
class Permutation:
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        n = len(elements)
        if n == 0:
            raise PermutationError("empty permutation")
        seen: dict[int, int] = {}
        for pos, value in enumerate(elements, start=1):
            if isinstance(value, bool) or not isinstance(value, int):
                raise PermutationError(f"position {pos}: {value!r} is not an integer")
            if not 1 <= value <= n:
                raise PermutationError(f"position {pos}: value {value} out of range 1..{n}")
            if value in seen:
                raise PermutationError(
                    f"position {pos}: duplicate value {value} (first at position {seen[value]})"
                )
            seen[value] = pos

    @classmethod
    def of(cls, values: Iterable[int]) -> "Permutation":
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __getitem__(self, index):
        return self.elements[index]

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.elements, start=1))

    def to_text(self) -> str:
        return " ".join(map(str, self.elements))

    def __str__(self) -> str:
        return self.to_text()


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def parse_permutation(text: str) -> Permutation:
    """Parse whitespace-separated integers, e.g. ``"2 5 6 3 7 8 9 4 1"``."""
    tokens = text.split()
    if not tokens:
        raise PermutationError("empty input")
    values = []
    for pos, tok in enumerate(tokens, start=1):
        try:
            values.append(int(tok))
        except ValueError:
            raise PermutationError(f"position {pos}: {tok!r} is not an integer") from None
    return Permutation(tuple(values))


class Strip(NamedTuple):
    start: int
    length: int
    first: int

    @property
    def stop(self) -> int:
        return self.start + self.length

    @property
    def last(self) -> int:
        return self.first + self.length - 1


@dataclass(frozen=True)
class StripDecomposition:
    strips: tuple[Strip, ...]

    @property
    def count(self) -> int:
        return len(self.strips)

    def __len__(self) -> int:
        return len(self.strips)

    def __iter__(self) -> Iterator[Strip]:
        return iter(self.strips)

    def __getitem__(self, index: int) -> Strip:
        return self.strips[index]

    def strip_at(self, position: int) -> int:
        """Index of the strip covering ``position``."""
        for k, s in enumerate(self.strips):
            if s.start <= position < s.stop:
                return k
        raise IndexError(position)


@dataclass(frozen=True)
class ReversalProfile:
    descent_positions: frozenset[int]

    @property
    def rev(self) -> int:
        return len(self.descent_positions)


def _values(p: Permutation | Sequence[int]) -> Sequence[int]:
    return p.elements if isinstance(p, Permutation) else p


def strip_bounds(seq: Sequence[int]) -> list[tuple[int, int]]:
    """``(start, stop)`` of each maximal run ``v, v+1, v+2, ...`` in ``seq``."""
    bounds = []
    start = 0
    for i in range(1, len(seq)):
        if seq[i] != seq[i - 1] + 1:
            bounds.append((start, i))
            start = i
    bounds.append((start, len(seq)))
    return bounds


def strip_count(seq: Sequence[int]) -> int:
    return 1 + sum(1 for i in range(1, len(seq)) if seq[i] != seq[i - 1] + 1)


def descent_count(seq: Sequence[int]) -> int:
    return sum(1 for i in range(1, len(seq)) if seq[i - 1] > seq[i])


def strips(p: Permutation | Sequence[int]) -> StripDecomposition:
    seq = _values(p)
    return StripDecomposition(
        tuple(Strip(a, b - a, seq[a]) for a, b in strip_bounds(seq))
    )


def rev(p: Permutation | Sequence[int]) -> ReversalProfile:
    seq = _values(p)
    return ReversalProfile(
        frozenset(i for i in range(len(seq) - 1) if seq[i] > seq[i + 1])
    )


def lower_bound_strips(p: Permutation | Sequence[int]) -> int:
    # one swap merges at most four strip boundaries
    return -(-(strip_count(_values(p)) - 1) // 4)


def lower_bound_rev(p: Permutation | Sequence[int]) -> int:
    # one swap removes at most two descents
    return -(-descent_count(_values(p)) // 2)


def swap_lower_bound(p: Permutation | Sequence[int]) -> int:
    seq = _values(p)
    return max(lower_bound_rev(seq), lower_bound_strips(seq))
