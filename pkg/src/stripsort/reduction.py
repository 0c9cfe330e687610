"""Cage/hinge construction of pi-dagger from a permutation, and its projection.

Every descent ``(a_i, a_{i+1})`` of the source becomes a cage
``L_i a_i m_i a_{i+1} U_i`` with ``L_i < a_{i+1} < m_i < a_i < U_i``; every
adjacency that crosses a cage boundary is constrained to ascend. The token
sequence is then relabelled onto ``1..N`` by a deterministic linear
extension of those constraints.

When ``a_j`` ends one descent and starts the next, both cages need it. The
right cage gets a stand-in token for ``a_j``:

``figure`` layout (default)
    ``... U_{j-1} h_j^L L_j h_j^R m_j a_{j+1} U_j ...`` -- the right hinge
    token *is* the right cage's copy of ``a_j``.
``text`` layout
    ``... U_{j-1} h_j^L h_j^R L_j a_j' m_j a_{j+1} U_j ...`` -- both hinge
    tokens sit between the cages and a separate shadow ``a_j'`` fills the
    slot. Costs one more token per shared element.

Hinge tokens are bounded by the guards on either side and ascend to both
neighbours.
"""

from __future__ import annotations

import graphlib
import heapq
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from stripsort.moves import (
    SWAP,
    BlockMove,
    Schedule,
    StripSwap,
    block_pairs,
    block_seq,
    swap_seq,
)
from stripsort.perm import Permutation, descent_count, strip_bounds

FIGURE = "figure"
TEXT = "text"
LAYOUTS = (FIGURE, TEXT)


class TokenKind(str, Enum):
    ORIGINAL = "original"
    GUARD_LOW = "guard_low"
    MEDIAN = "median"
    GUARD_HIGH = "guard_high"
    SHADOW = "shadow"
    HINGE_LEFT = "hinge_left"
    HINGE_RIGHT = "hinge_right"


KIND_RANK = {kind: rank for rank, kind in enumerate(TokenKind)}

# slot names inside a cage, left to right
CAGE_ROLES = ("L", "hi", "m", "lo", "U")


@dataclass(frozen=True)
class GadgetToken:
    """One position of pi-dagger before relabelling.

    ``source`` is a 1-based position in the source permutation: the element's
    own position for originals and shadows, the descent index ``i`` for cage
    tokens, the shared position ``j`` for hinge tokens.
    """

    kind: TokenKind
    source: int
    element: Optional[int] = None
    cage: Optional[int] = None
    role: Optional[str] = None

    @property
    def label(self) -> str:
        k = self.kind
        if k is TokenKind.ORIGINAL:
            return str(self.element)
        if k is TokenKind.SHADOW:
            return f"{self.element}'"
        if k is TokenKind.GUARD_LOW:
            return f"L{self.source}"
        if k is TokenKind.GUARD_HIGH:
            return f"U{self.source}"
        if k is TokenKind.MEDIAN:
            return f"m{self.source}"
        side = "L" if k is TokenKind.HINGE_LEFT else "R"
        return f"h{self.element}^{side}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "label": self.label,
            "source": self.source,
            "element": self.element,
            "cage": self.cage,
            "role": self.role,
        }

    @classmethod
    def from_json(cls, d: dict) -> "GadgetToken":
        return cls(TokenKind(d["kind"]), d["source"], d.get("element"), d.get("cage"), d.get("role"))


@dataclass
class ConstraintSet:
    tokens: list[GadgetToken]
    less_than: set[tuple[GadgetToken, GadgetToken]] = field(default_factory=set)

    def add(self, lo: GadgetToken, hi: GadgetToken) -> None:
        self.less_than.add((lo, hi))

    def chain(self, *tokens: GadgetToken) -> None:
        for a, b in zip(tokens, tokens[1:]):
            self.add(a, b)

    def replace(self, old: GadgetToken, new: GadgetToken) -> None:
        self.less_than = {
            (new if a == old else a, new if b == old else b) for a, b in self.less_than
        }
        self.tokens = [new if t == old else t for t in self.tokens]

    def edges_by_position(self) -> list[tuple[int, int]]:
        """Sorted ``(lower, higher)`` pairs of 1-based positions."""
        where = {t: i for i, t in enumerate(self.tokens, start=1)}
        return sorted((where[a], where[b]) for a, b in self.less_than)

    def to_text(self) -> str:
        labels = [t.label for t in self.tokens]
        return "".join(
            f"{a} {b}\t{labels[a - 1]} < {labels[b - 1]}\n" for a, b in self.edges_by_position()
        )


class ConstraintCycle(ValueError):
    def __init__(self, cycle: list[GadgetToken]):
        super().__init__("constraint cycle: " + " < ".join(t.label for t in cycle))
        self.cycle = cycle


class ProjectionError(ValueError):
    """A swap schedule on pi-dagger cannot be projected to the source."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"move {index + 1}: {reason}")
        self.index = index
        self.reason = reason


class CompatibilityViolation(ProjectionError):
    """A -2 swap that does not project to a -1 block move on the source."""


@dataclass(frozen=True)
class GadgetInstance:
    source: Permutation
    pi_dagger: Permutation
    tokens: tuple[GadgetToken, ...]
    constraints: ConstraintSet = field(compare=False)
    layout: str = FIGURE

    @property
    def R(self) -> int:
        return descent_count(self.source.elements)

    @property
    def token_of_position(self) -> tuple[GadgetToken, ...]:
        return self.tokens

    def cages(self) -> dict[int, dict[str, int]]:
        """Cage index -> role -> 0-based position in pi-dagger."""
        out: dict[int, dict[str, int]] = {}
        for pos, t in enumerate(self.tokens):
            if t.cage is not None:
                out.setdefault(t.cage, {})[t.role] = pos
        return out

    def cage_pair(self, cage: int) -> tuple[int, int]:
        """Source elements ``(a_i, a_{i+1})`` whose descent the cage encodes."""
        slots = self.cages()[cage]
        return self.tokens[slots["hi"]].element, self.tokens[slots["lo"]].element

    def to_json(self) -> dict:
        return {
            "source": list(self.source.elements),
            "permutation": list(self.pi_dagger.elements),
            "R": self.R,
            "layout": self.layout,
            "tokens": [
                {"position": i, "value": v, **t.to_json()}
                for i, (v, t) in enumerate(zip(self.pi_dagger.elements, self.tokens), start=1)
            ],
            "constraints": [list(e) for e in self.constraints.edges_by_position()],
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, d: dict) -> "GadgetInstance":
        rows = sorted(d["tokens"], key=lambda r: r["position"])
        tokens = [GadgetToken.from_json(r) for r in rows]
        cs = ConstraintSet(list(tokens))
        for a, b in d.get("constraints", []):
            cs.add(tokens[a - 1], tokens[b - 1])
        return cls(
            Permutation.of(d["source"]),
            Permutation.of(d["permutation"]),
            tuple(tokens),
            cs,
            d.get("layout", FIGURE),
        )

    @classmethod
    def loads(cls, text: str) -> "GadgetInstance":
        return cls.from_json(json.loads(text))


# -- construction --------------------------------------------------------------

def _descents(p: Permutation) -> list[int]:
    a = p.elements
    return [k for k in range(len(a) - 1) if a[k] > a[k + 1]]


def _add_crossing(cs: ConstraintSet) -> None:
    seq = cs.tokens
    for left, right in zip(seq, seq[1:]):
        if left.cage is None or left.cage != right.cage:
            cs.add(left, right)


def build_cages(p: Permutation) -> tuple[list[GadgetToken], ConstraintSet]:
    a = p.elements
    descents = set(_descents(p))
    tokens: list[GadgetToken] = []
    cs = ConstraintSet(tokens)
    covered = set()
    for k in range(len(a)):
        if k in descents:
            i = k + 1
            low = GadgetToken(TokenKind.GUARD_LOW, i, cage=i, role="L")
            high = GadgetToken(TokenKind.GUARD_HIGH, i, cage=i, role="U")
            median = GadgetToken(TokenKind.MEDIAN, i, cage=i, role="m")
            if k in covered:
                first = GadgetToken(TokenKind.SHADOW, k + 1, a[k], cage=i, role="hi")
                own = next(t for t in tokens if t.kind is TokenKind.ORIGINAL and t.source == k + 1)
                cs.add(own, first)
            else:
                first = GadgetToken(TokenKind.ORIGINAL, k + 1, a[k], cage=i, role="hi")
            second = GadgetToken(TokenKind.ORIGINAL, k + 2, a[k + 1], cage=i, role="lo")
            tokens.extend((low, first, median, second, high))
            cs.chain(low, second, median, first, high)
            covered.update((k, k + 1))
        elif k not in covered:
            tokens.append(GadgetToken(TokenKind.ORIGINAL, k + 1, a[k]))
            covered.add(k)
    _add_crossing(cs)
    return tokens, cs


def shared_positions(p: Permutation) -> list[int]:
    """0-based positions of elements that end one descent and start the next."""
    d = set(_descents(p))
    return sorted(k for k in d if k - 1 in d)


def insert_hinges(
    tokens: list[GadgetToken], constraints: ConstraintSet, p: Permutation, layout: str = FIGURE,
) -> tuple[list[GadgetToken], ConstraintSet]:
    if layout not in LAYOUTS:
        raise ValueError(f"unknown hinge layout {layout!r}")
    cs = ConstraintSet(list(tokens), set(constraints.less_than))
    for k in shared_positions(p):
        j, elem = k + 1, p[k]
        left_high = GadgetToken(TokenKind.GUARD_HIGH, k, cage=k, role="U")
        shadow = GadgetToken(TokenKind.SHADOW, j, elem, cage=j, role="hi")
        h_left = GadgetToken(TokenKind.HINGE_LEFT, j, elem)
        at = cs.tokens.index(left_high) + 1
        if layout == FIGURE:
            h_right = GadgetToken(TokenKind.HINGE_RIGHT, j, elem, cage=j, role="hi")
            cs.replace(shadow, h_right)
            cs.tokens.insert(at, h_left)
        else:
            h_right = GadgetToken(TokenKind.HINGE_RIGHT, j, elem)
            cs.tokens[at:at] = [h_left, h_right]
    _add_crossing(cs)
    return cs.tokens, cs


def relabel(tokens: list[GadgetToken], constraints: ConstraintSet, source: Permutation,
            layout: str = FIGURE) -> GadgetInstance:
    """Assign ``1..N`` to the tokens by the least linear extension.

    Among the tokens whose lower neighbours are all placed, the one with the
    smallest ``(kind rank, position)`` takes the next value.
    """
    position = {t: i for i, t in enumerate(tokens)}
    ts: graphlib.TopologicalSorter = graphlib.TopologicalSorter()
    for t in tokens:
        ts.add(t)
    for lo, hi in constraints.less_than:
        ts.add(hi, lo)
    try:
        ts.prepare()
    except graphlib.CycleError as exc:
        raise ConstraintCycle(list(exc.args[1])) from None
    heap: list = []
    value: dict[GadgetToken, int] = {}
    while ts.is_active():
        for t in ts.get_ready():
            heapq.heappush(heap, (KIND_RANK[t.kind], position[t], t))
        _, _, t = heapq.heappop(heap)
        value[t] = len(value) + 1
        ts.done(t)
    pi = Permutation(tuple(value[t] for t in tokens))
    return GadgetInstance(source, pi, tuple(tokens), constraints, layout)


def build_dagger(p: Permutation, layout: str = FIGURE) -> GadgetInstance:
    tokens, cs = build_cages(p)
    tokens, cs = insert_hinges(tokens, cs, p, layout)
    return relabel(tokens, cs, p, layout)


def size_bound(p: Permutation) -> int:
    return p.n + 5 * descent_count(p.elements)


# -- verification --------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class InstanceReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def verify_instance(inst: GadgetInstance) -> InstanceReport:
    values = inst.pi_dagger.elements
    tokens = inst.tokens
    checks = []

    checks.append(Check(
        "token_table", len(tokens) == len(values),
        f"{len(tokens)} tokens for {len(values)} positions",
    ))
    if len(tokens) != len(values):
        return InstanceReport(tuple(checks))

    r, d = inst.R, descent_count(values)
    checks.append(Check("rev_equals_2R", d == 2 * r, f"rev(pi_dagger)={d}, 2R={2 * r}"))

    outside = []
    crossing = []
    for k in range(len(values) - 1):
        lt, rt = tokens[k], tokens[k + 1]
        same = lt.cage is not None and lt.cage == rt.cage
        if values[k] > values[k + 1] and not same:
            outside.append(k + 1)
        if not same and values[k] > values[k + 1]:
            crossing.append(f"{lt.label}>{rt.label}@{k + 1}")
    checks.append(Check(
        "descents_cage_internal", not outside,
        "" if not outside else f"descents outside cages at positions {outside}",
    ))
    checks.append(Check(
        "crossing_ascending", not crossing,
        "" if not crossing else "cross-boundary descent: " + ", ".join(crossing),
    ))

    bad_cages = []
    for cage, slots in sorted(inst.cages().items()):
        if set(slots) != set(CAGE_ROLES):
            bad_cages.append(f"cage {cage}: roles {sorted(slots)}")
            continue
        pos = [slots[role] for role in CAGE_ROLES]
        if pos != list(range(pos[0], pos[0] + 5)):
            bad_cages.append(f"cage {cage}: not contiguous")
            continue
        L, hi, m, lo, U = (values[q] for q in pos)
        if not L < lo < m < hi < U:
            bad_cages.append(f"cage {cage}: chain violated")
    checks.append(Check("cage_chains", not bad_cages, "; ".join(bad_cages)))
    checks.append(Check(
        "cage_count", len(inst.cages()) == r, f"{len(inst.cages())} cages for R={r}",
    ))

    where = {t: i for i, t in enumerate(tokens)}
    broken = [
        f"{a.label}<{b.label}" for a, b in inst.constraints.less_than
        if a not in where or b not in where or values[where[a]] >= values[where[b]]
    ]
    checks.append(Check(
        "constraints_respected", not broken,
        "" if not broken else "violated: " + ", ".join(sorted(broken)),
    ))

    bound = size_bound(inst.source)
    checks.append(Check("size_bound", len(values) <= bound, f"|pi_dagger|={len(values)} <= {bound}"))
    return InstanceReport(tuple(checks))


# -- schedules across the reduction ---------------------------------------------

def _swap_tokens(tokens: list, bounds, i: int, j: int) -> list:
    return list(swap_seq(tuple(tokens), bounds, i, j))


def forward_schedule(inst: GadgetInstance, cage_order: Iterable[int] | None = None) -> Schedule:
    """Swap ``[a_i]`` with ``[a_{i+1}]`` inside each cage, one cage per move."""
    order = list(cage_order) if cage_order is not None else sorted(inst.cages())
    seq = inst.pi_dagger.elements
    tokens = list(inst.tokens)
    moves = []
    for cage in order:
        hi_tok = next(t for t in tokens if t.cage == cage and t.role == "hi")
        lo_tok = next(t for t in tokens if t.cage == cage and t.role == "lo")
        bounds = strip_bounds(seq)
        starts = {b[0]: n for n, b in enumerate(bounds)}
        i, j = starts[tokens.index(hi_tok)], starts[tokens.index(lo_tok)]
        i, j = min(i, j), max(i, j)
        moves.append(StripSwap(i, j, (seq[bounds[i][0]], seq[bounds[j][0]])))
        tokens = _swap_tokens(tokens, bounds, i, j)
        seq = swap_seq(seq, bounds, i, j)
    return Schedule(inst.pi_dagger, SWAP, tuple(moves))


def block_schedule_cage_order(inst: GadgetInstance, block: Schedule) -> list[int]:
    """Cages in the order a block schedule on the source removes their descents."""
    pair_to_cage = {inst.cage_pair(c): c for c in inst.cages()}
    order = []
    states = block.trace()
    for before, after in zip(states, states[1:]):
        gone = _descent_pairs(before.elements) - _descent_pairs(after.elements)
        for pair in sorted(gone):
            c = pair_to_cage.get(pair)
            if c is not None and c not in order:
                order.append(c)
    order.extend(c for c in sorted(inst.cages()) if c not in order)
    return order


def _descent_pairs(seq: tuple) -> set[tuple[int, int]]:
    return {(seq[k], seq[k + 1]) for k in range(len(seq) - 1) if seq[k] > seq[k + 1]}


def _resolving_block_moves(seq: tuple, pair: tuple[int, int]) -> list[tuple[int, int]]:
    """All -1 block moves removing the descent ``pair``.

    Moves that leave every other descent in place come first; within each
    group the order is lexicographic by (strip, gap).
    """
    before = _descent_pairs(seq)
    bounds = strip_bounds(seq)
    clean, other = [], []
    for k, g in block_pairs(bounds, len(seq)):
        after = _descent_pairs(block_seq(seq, bounds, k, g))
        if pair in after or len(after) != len(before) - 1:
            continue
        (clean if after == before - {pair} else other).append((k, g))
    return clean + other


def project_schedule(inst: GadgetInstance, s: Schedule) -> Schedule:
    """Carry a schedule of -2 swaps on pi-dagger to block moves on the source.

    Each swap must exchange the two singleton strips ``[a_i]`` and
    ``[a_{i+1}]`` of one cage; it becomes the block move on the source that
    removes the descent ``(a_i, a_{i+1})``. Raises :class:`ProjectionError`
    for a swap that is not -2, :class:`CompatibilityViolation` when a -2 swap
    leaves its cage or has no -1 counterpart on the source.
    """
    if s.kind != SWAP:
        raise ProjectionError(0, "not a strip-swap schedule")
    if s.start != inst.pi_dagger:
        raise ProjectionError(0, "schedule does not start at pi_dagger")
    seq = inst.pi_dagger.elements
    tokens = list(inst.tokens)
    pairs: list[tuple[int, int]] = []
    for idx, m in enumerate(s.moves):
        bounds = strip_bounds(seq)
        if not 0 <= m.left < m.right < len(bounds):
            raise ProjectionError(idx, "invalid strip index")
        child = swap_seq(seq, bounds, m.left, m.right)
        delta = descent_count(child) - descent_count(seq)
        if delta != -2:
            raise ProjectionError(idx, f"swap changes rev by {delta}, not -2")
        (a0, a1), (b0, b1) = bounds[m.left], bounds[m.right]
        ta, tb = tokens[a0], tokens[b0]
        if not (
            a1 - a0 == 1 and b1 - b0 == 1 and ta.cage is not None and ta.cage == tb.cage
            and {ta.role, tb.role} == {"hi", "lo"}
        ):
            raise CompatibilityViolation(
                idx, f"-2 swap of {seq[a0:a1]} and {seq[b0:b1]} is not the inner swap of one cage"
            )
        hi_tok = ta if ta.role == "hi" else tb
        lo_tok = tb if hi_tok is ta else ta
        pairs.append((hi_tok.element, lo_tok.element))
        tokens = _swap_tokens(tokens, bounds, m.left, m.right)
        seq = child

    # choose source moves depth-first; the first choice only fails when
    # a later descent would become unreachable
    deepest = [0, ""]

    def place(idx: int, src: tuple) -> list[BlockMove] | None:
        if idx == len(pairs):
            return []
        pair = pairs[idx]
        if pair not in _descent_pairs(src):
            reason = f"descent {pair} is not present in the projected permutation"
        else:
            sb = strip_bounds(src)
            for k, g in _resolving_block_moves(src, pair):
                rest = place(idx + 1, block_seq(src, sb, k, g))
                if rest is not None:
                    return [BlockMove(k, g, src[sb[k][0]])] + rest
            reason = f"no block move removes descent {pair} with rev -1"
        if idx >= deepest[0]:
            deepest[:] = [idx, reason]
        return None

    out = place(0, inst.source.elements)
    if out is None:
        raise CompatibilityViolation(deepest[0], deepest[1])
    return Schedule(inst.source, "block", tuple(out))
