"""Static SVG scatter plots of planar point sets."""
from __future__ import annotations

from pathlib import Path


def _n(x: float) -> str:
    return format(round(x, 3), "g")


def emit_svg(points, window, out=None, scale: float = 8.0, radius: float = 1.5) -> str:
    """Render points inside a planar window; ``scale`` pixels per unit.

    Output depends only on the arguments, so repeated runs are byte-identical.
    """
    lo, hi = (window.lower, window.upper) if hasattr(window, "lower") else window
    if len(lo) != 2:
        raise ValueError("SVG output needs planar points")
    x0, y0 = float(lo[0]), float(lo[1])
    x1, y1 = float(hi[0]), float(hi[1])
    w, h = (x1 - x0) * scale, (y1 - y0) * scale

    def sx(x):
        return (float(x) - x0) * scale

    def sy(y):
        return (y1 - float(y)) * scale

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(w)}" height="{_n(h)}" '
        f'viewBox="0 0 {_n(w)} {_n(h)}">',
        f'<rect x="0" y="0" width="{_n(w)}" height="{_n(h)}" fill="white" stroke="black"/>',
    ]
    if x0 <= 0 <= x1:
        lines.append(f'<line class="axis" x1="{_n(sx(0))}" y1="0" x2="{_n(sx(0))}" y2="{_n(h)}" stroke="gray"/>')
    if y0 <= 0 <= y1:
        lines.append(f'<line class="axis" x1="0" y1="{_n(sy(0))}" x2="{_n(w)}" y2="{_n(sy(0))}" stroke="gray"/>')
    for p in points:
        if len(p) != 2:
            raise ValueError("SVG output needs planar points")
        lines.append(f'<circle cx="{_n(sx(p[0]))}" cy="{_n(sy(p[1]))}" r="{_n(radius)}"/>')
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if out is not None:
        Path(out).write_text(text)
    return text
