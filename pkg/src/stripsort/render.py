"""ASCII and SVG pictures of permutations, gadget instances and schedule traces."""

from __future__ import annotations

from html import escape

from stripsort.moves import Schedule
from stripsort.perm import Permutation, strips
from stripsort.reduction import GadgetInstance, TokenKind

ASCII = "ascii"
SVG = "svg"
FORMATS = (ASCII, SVG)

_FILL = {
    TokenKind.ORIGINAL: "#f2f2f2",
    TokenKind.SHADOW: "#f2f2f2",
    TokenKind.GUARD_LOW: "#e0e0e0",
    TokenKind.GUARD_HIGH: "#e0e0e0",
    TokenKind.MEDIAN: "#fff5cc",
    TokenKind.HINGE_LEFT: "#dde6ff",
    TokenKind.HINGE_RIGHT: "#dde6ff",
}

CELL_W = 44
CELL_H = 28
MARGIN = 10


def strip_boxes(p: Permutation) -> str:
    """``[2] [5 6] [3] [7 8 9] [4] [1]``"""
    seq = p.elements
    return " ".join(
        "[" + " ".join(map(str, seq[s.start:s.stop])) + "]" for s in strips(p)
    )


def instance_ascii(inst: GadgetInstance) -> str:
    """Strip boxes of pi-dagger, then ``value:label`` for every position."""
    tagged = " ".join(
        f"{v}:{t.label}" for v, t in zip(inst.pi_dagger.elements, inst.tokens)
    )
    return f"{strip_boxes(inst.pi_dagger)}\n{tagged}\n"


def trace_ascii(s: Schedule) -> str:
    lines = []
    states = s.trace()
    for k, state in enumerate(states):
        head = "start" if k == 0 else f"{k:>5}"
        lines.append(f"{head}  {strip_boxes(state)}")
    return "\n".join(lines) + "\n"


def _svg_row(values, labels, fills, y: int, caption: str | None = None) -> list[str]:
    out = []
    if caption:
        out.append(f'<text x="{MARGIN}" y="{y - 6}" font-size="11">{escape(caption)}</text>')
    for k, (v, label, fill) in enumerate(zip(values, labels, fills)):
        x = MARGIN + k * CELL_W
        out.append(
            f'<rect x="{x}" y="{y}" width="{CELL_W - 4}" height="{CELL_H}" '
            f'fill="{fill}" stroke="#333"/>'
        )
        text = escape(str(v)) if label is None else f"{escape(label)}"
        out.append(
            f'<text x="{x + (CELL_W - 4) / 2:g}" y="{y + CELL_H / 2 + 4:g}" '
            f'font-size="12" text-anchor="middle">{text}</text>'
        )
        if label is not None:
            out.append(
                f'<text x="{x + (CELL_W - 4) / 2:g}" y="{y - 2}" font-size="9" '
                f'text-anchor="middle" fill="#666">{v}</text>'
            )
    # descent arcs underneath
    for k in range(len(values) - 1):
        if values[k] > values[k + 1]:
            x0 = MARGIN + k * CELL_W + (CELL_W - 4) / 2
            x1 = x0 + CELL_W
            yb = y + CELL_H
            out.append(
                f'<path d="M {x0:g} {yb} C {x0:g} {yb + 16} {x1:g} {yb + 16} {x1:g} {yb}" '
                f'fill="none" stroke="#c00"/>'
            )
    return out


def _svg_document(body: list[str], width: int, height: int) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace">\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def permutation_svg(p: Permutation) -> str:
    seq = p.elements
    fills = []
    for k, s in enumerate(strips(p)):
        fills.extend(["#f2f2f2" if k % 2 == 0 else "#e6eef7"] * s.length)
    body = _svg_row(seq, [None] * len(seq), fills, MARGIN + 14)
    return _svg_document(body, 2 * MARGIN + len(seq) * CELL_W, CELL_H + 2 * MARGIN + 34)


def instance_svg(inst: GadgetInstance) -> str:
    values = inst.pi_dagger.elements
    labels = [t.label for t in inst.tokens]
    fills = [_FILL[t.kind] for t in inst.tokens]
    body = _svg_row(values, labels, fills, MARGIN + 26, caption=f"pi_dagger of {inst.source}")
    return _svg_document(body, 2 * MARGIN + len(values) * CELL_W, CELL_H + 2 * MARGIN + 46)


def trace_svg(s: Schedule) -> str:
    states = s.trace()
    body = []
    row_h = CELL_H + 40
    for k, state in enumerate(states):
        caption = "start" if k == 0 else f"after move {k}"
        body.extend(_svg_row(state.elements, [None] * state.n, ["#f2f2f2"] * state.n,
                             MARGIN + 14 + k * row_h, caption))
    n = s.start.n
    return _svg_document(body, 2 * MARGIN + n * CELL_W, 2 * MARGIN + len(states) * row_h)


def render(target, fmt: str = ASCII) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown render format {fmt!r}")
    if isinstance(target, GadgetInstance):
        return instance_ascii(target) if fmt == ASCII else instance_svg(target)
    if isinstance(target, Schedule):
        return trace_ascii(target) if fmt == ASCII else trace_svg(target)
    if isinstance(target, Permutation):
        return strip_boxes(target) + "\n" if fmt == ASCII else permutation_svg(target)
    raise TypeError(f"cannot render {type(target).__name__}")
