"""Minimal SVG output: one <path> per polygon, drawn in y-up coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import quoteattr

PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f"]


@dataclass
class Shape:
    vertices: Sequence[Sequence[float]]
    fill: str = "none"
    stroke: str = "#333333"
    opacity: float = 1.0
    label: Optional[str] = None


def path_data(vertices) -> str:
    pts = [f"{float(x):.9g},{float(y):.9g}" for x, y in vertices]
    return "M" + " L".join(pts) + " Z"


def render_svg(shapes: Iterable[Shape], bounds, width: int = 600, window=None) -> str:
    """SVG text for ``shapes`` inside ``bounds = (xmin, xmax, ymin, ymax)``.

    The flip ``scale(1,-1)`` makes the drawing y-up. ``window`` optionally
    adds a dashed outline of [-l, l]^2 and clips every shape to it.
    """
    xmin, xmax, ymin, ymax = bounds
    w, h = xmax - xmin, ymax - ymin
    height = max(1, int(round(width * h / w)))
    stroke = max(w, h) / 400.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{xmin:.9g} {-ymax:.9g} {w:.9g} {h:.9g}">',
    ]
    clip = ""
    if window is not None:
        l = float(window)
        out.append(f'<defs><clipPath id="win"><rect x="{-l}" y="{-l}" width="{2 * l}" height="{2 * l}"/></clipPath></defs>')
        clip = ' clip-path="url(#win)"'
    out.append(f'<g transform="scale(1,-1)" stroke-width="{stroke:.6g}">')
    out.append(f"<g{clip}>")
    for s in shapes:
        title = f"<title>{s.label}</title>" if s.label else ""
        out.append(
            f'<path d="{path_data(s.vertices)}" fill={quoteattr(s.fill)} stroke={quoteattr(s.stroke)} '
            f'fill-opacity="{s.opacity:.3g}">{title}</path>'
        )
    out.append("</g>")
    if window is not None:
        l = float(window)
        out.append(
            f'<rect x="{-l}" y="{-l}" width="{2 * l}" height="{2 * l}" fill="none" stroke="#000000" '
            f'stroke-dasharray="{4 * stroke:.6g}"/>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bounds_of(polygons, margin: float = 0.05):
    xs = [float(p[0]) for poly in polygons for p in poly]
    ys = [float(p[1]) for poly in polygons for p in poly]
    dx = (max(xs) - min(xs)) or 1.0
    dy = (max(ys) - min(ys)) or 1.0
    m = margin * max(dx, dy)
    return min(xs) - m, max(xs) + m, min(ys) - m, max(ys) + m


def color(i: int) -> str:
    return PALETTE[i % len(PALETTE)]
