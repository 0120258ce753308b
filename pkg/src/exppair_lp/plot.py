"""Deterministic SVG scatter of generations in coordinates (k, l - 1/2)."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .geometry import generation_pairs
from .pairs import HALF, ExponentPair

SIZE = 600
MARGIN = 40
SCALE = 2 * (SIZE - 2 * MARGIN)  # the unit square [0, 1/2]^2 fills the plot


def _xy(k, shifted_l) -> tuple[str, str]:
    x = MARGIN + float(k) * SCALE
    y = SIZE - MARGIN - float(shifted_l) * SCALE
    return f"{x:.3f}", f"{y:.3f}"


def plotted_points(initial: ExponentPair, depth: int) -> list[tuple[Fraction, Fraction]]:
    """Generations 1..depth, or just the initial pair for depth 0."""
    if depth == 0:
        return [initial.point]
    pts = []
    for n in range(1, depth + 1):
        pts.extend(generation_pairs(initial, n))
    return pts


def render_svg(initial: ExponentPair, depth: int) -> str:
    pts = plotted_points(initial, depth)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    x0, y0 = _xy(0, 0)
    x1, _ = _xy(HALF, 0)
    _, y1 = _xy(0, HALF)
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    out.append(f'<text x="{x1}" y="{float(y0) + 20:.3f}" font-size="12">k</text>')
    out.append(f'<text x="{float(x0) - 30:.3f}" y="{y1}" font-size="12">l-1/2</text>')
    sixth = Fraction(1, 6)
    # the two rectangles holding A-images and BA-images of P(1/6, 2/3)
    for (ka, kb), (la, lb) in (((0, sixth), (sixth, HALF)), ((sixth, HALF), (0, sixth))):
        xa, ya = _xy(ka, lb)
        xb, yb = _xy(kb, la)
        out.append(f'<rect x="{xa}" y="{ya}" width="{float(xb) - float(xa):.3f}" '
                   f'height="{float(yb) - float(ya):.3f}" fill="none" stroke="gray" '
                   f'stroke-dasharray="4 2"/>')
    for k, l in pts:
        x, y = _xy(k, l - HALF)
        out.append(f'<circle cx="{x}" cy="{y}" r="1.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_generations(initial: ExponentPair, depth: int, path) -> int:
    """Write the SVG and return the number of plotted points."""
    svg = render_svg(initial, depth)
    Path(path).write_text(svg, encoding="utf-8")
    return svg.count("<circle")
