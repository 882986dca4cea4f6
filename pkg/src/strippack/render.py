"""SVG rendering of strip packings.

One unit of strip width is 600 user units and heights use the same scale.
Rects are colored from a fixed 16-color palette by ``packing.classes``;
regions (slips, bands, shelves, levels) are drawn as dashed outlines.
"""
from __future__ import annotations

from pathlib import Path

from .core import Instance, StripPacking

SCALE = 600.0
MARGIN = 10.0

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#1f77b4", "#aec7e8", "#ffbb78", "#98df8a", "#c5b0d5", "#c49c94",
)

REGION_STYLE = {
    "band": "#333333",
    "slip": "#777777",
    "shelf": "#333333",
    "level": "#333333",
}


def _f(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".") or "0"


def svg_string(instance: Instance, packing: StripPacking) -> str:
    rects = instance.by_id()
    H = packing.height * SCALE
    width, height = SCALE + 2 * MARGIN, H + 2 * MARGIN

    def Y(y: float, h: float) -> float:
        # SVG y grows downwards; the strip floor sits at the bottom
        return MARGIN + H - (y + h) * SCALE

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect class="strip" x="{_f(MARGIN)}" y="{_f(MARGIN)}" width="{_f(SCALE)}" '
        f'height="{_f(H)}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    for p in sorted(packing.placements, key=lambda p: p.rect_id):
        r = rects[p.rect_id]
        color = PALETTE[packing.classes.get(p.rect_id, 0) % len(PALETTE)]
        out.append(
            f'<rect class="item" id="r{p.rect_id}" x="{_f(MARGIN + p.x * SCALE)}" '
            f'y="{_f(Y(p.y, r.h))}" width="{_f(r.w * SCALE)}" height="{_f(r.h * SCALE)}" '
            f'fill="{color}" stroke="black" stroke-width="0.5"/>')
    for g in packing.regions:
        stroke = REGION_STYLE.get(g.kind, "#999999")
        out.append(
            f'<rect class="{g.kind}" x="{_f(MARGIN + g.x * SCALE)}" y="{_f(Y(g.y, g.h))}" '
            f'width="{_f(g.w * SCALE)}" height="{_f(g.h * SCALE)}" fill="none" '
            f'stroke="{stroke}" stroke-width="1" stroke-dasharray="4 3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(instance: Instance, packing: StripPacking, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.write_text(svg_string(instance, packing))
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
    return path
