"""Rectilinear stair polygons.

A stair polygon has a vertical left side, a vertical right side, a top chain
that rises ``l_up`` times and then falls ``r_up`` times, and a bottom chain
that falls ``l_down`` times and then rises ``r_down`` times. Its signature is
``(l_up, r_up, l_down, r_down)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .disk import QuarterConvexDisk
from .errors import BadAbscissas, NotRectilinear, NotSimple, NotStair, UnsupportedSignature

STEP_TOL = 1e-12

Point = tuple[float, float]
Signature = tuple[int, int, int, int]


@dataclass(frozen=True)
class StairPolygon:
    vertices: tuple[Point, ...]  # counterclockwise
    signature: Signature

    @property
    def area(self) -> float:
        return shoelace_area(self.vertices)

    def translate(self, v) -> "StairPolygon":
        dx, dy = float(v[0]), float(v[1])
        return StairPolygon(tuple((x + dx, y + dy) for x, y in self.vertices), self.signature)

    def columns(self) -> list[tuple[float, float, float, float]]:
        """Vertical slabs ``(x0, x1, y_bottom, y_top)`` for a flat-bottomed stair."""
        return stair_columns(self.vertices)

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "signature": list(self.signature)}


def shoelace_area(vertices) -> float:
    p = np.asarray(vertices, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))) / 2.0


def _check_abscissas(xs) -> list[float]:
    xs = [float(x) for x in xs]
    if not xs:
        raise BadAbscissas("need at least one abscissa")
    if xs[0] <= 0.0 or xs[-1] > 1.0:
        raise BadAbscissas("abscissas must lie in (0, 1]")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise BadAbscissas("abscissas must be strictly increasing")
    return xs


def stair_columns_from_abscissas(disk: QuarterConvexDisk, xs) -> tuple[list[float], list[float]]:
    """Drop steps of zero height change and zero-height columns.

    Returns the surviving abscissas and the column heights f(x_k).
    """
    xs = _check_abscissas(xs)
    hs = [float(h) for h in disk.f(np.asarray(xs))]
    kx, kh = [], []
    for k, (x, h) in enumerate(zip(xs, hs)):
        if k + 1 < len(xs) and abs(h - hs[k + 1]) <= STEP_TOL:
            continue
        if h <= STEP_TOL:
            continue
        kx.append(x)
        kh.append(h)
    if not kx:
        raise BadAbscissas("stair polygon would have zero area")
    return kx, kh


def build_stair(disk: QuarterConvexDisk, xs: Sequence[float]) -> StairPolygon:
    kx, kh = stair_columns_from_abscissas(disk, xs)
    verts: list[Point] = [(0.0, 0.0), (kx[-1], 0.0)]
    for k in range(len(kx) - 1, -1, -1):
        left = kx[k - 1] if k > 0 else 0.0
        verts.append((kx[k], kh[k]))
        verts.append((left, kh[k]))
    verts = _dedupe(verts)
    return StairPolygon(tuple(verts), (0, len(kx) - 1, 0, 0))


def stair_area(s: StairPolygon) -> float:
    return s.area


def _dedupe(verts: list[Point]) -> list[Point]:
    out: list[Point] = []
    for v in verts:
        if not out or (abs(v[0] - out[-1][0]) > STEP_TOL or abs(v[1] - out[-1][1]) > STEP_TOL):
            out.append(v)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= STEP_TOL and abs(out[0][1] - out[-1][1]) <= STEP_TOL:
        out.pop()
    # drop collinear middle vertices
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            a, b, c = out[i - 1], out[i], out[(i + 1) % len(out)]
            same_x = abs(a[0] - b[0]) <= STEP_TOL and abs(b[0] - c[0]) <= STEP_TOL
            same_y = abs(a[1] - b[1]) <= STEP_TOL and abs(b[1] - c[1]) <= STEP_TOL
            if same_x or same_y:
                out.pop(i)
                changed = True
                break
    return out


def _edges(verts):
    return list(zip(verts, verts[1:] + verts[:1]))


def _check_simple(verts) -> None:
    edges = _edges(verts)
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _axis_segments_touch(edges[i], edges[j]):
                raise NotSimple("polygon edges intersect")


def _axis_segments_touch(e1, e2) -> bool:
    (a, b), (c, d) = e1, e2
    x1lo, x1hi = sorted((a[0], b[0]))
    y1lo, y1hi = sorted((a[1], b[1]))
    x2lo, x2hi = sorted((c[0], d[0]))
    y2lo, y2hi = sorted((c[1], d[1]))
    return x1lo <= x2hi and x2lo <= x1hi and y1lo <= y2hi and y2lo <= y1hi


def _steps(heights: list[float], tol: float) -> tuple[int, int, bool]:
    """Count rises and falls; report whether the order is rises-then-falls."""
    rises = falls = 0
    seen_fall = False
    ok = True
    for a, b in zip(heights, heights[1:]):
        if b > a + tol:
            rises += 1
            if seen_fall:
                ok = False
        elif b < a - tol:
            falls += 1
            seen_fall = True
    return rises, falls, ok


def classify_stair(vertices: Sequence[Sequence[float]], tol: float = STEP_TOL) -> Signature:
    verts = [(float(x), float(y)) for x, y in vertices]
    verts = _dedupe(verts)
    if len(verts) < 4:
        raise NotRectilinear("need at least four vertices")
    for a, b in _edges(verts):
        if abs(a[0] - b[0]) > tol and abs(a[1] - b[1]) > tol:
            raise NotRectilinear(f"edge {a} -> {b} is not axis-parallel")
    signed = sum(a[0] * b[1] - b[0] * a[1] for a, b in _edges(verts))
    if signed < 0:
        verts.reverse()
    _check_simple(verts)

    xmin = min(v[0] for v in verts)
    xmax = max(v[0] for v in verts)
    n = len(verts)
    left = [i for i in range(n) if abs(verts[i][0] - xmin) <= tol and abs(verts[(i + 1) % n][0] - xmin) <= tol]
    right = [i for i in range(n) if abs(verts[i][0] - xmax) <= tol and abs(verts[(i + 1) % n][0] - xmax) <= tol]
    if len(left) != 1 or len(right) != 1:
        raise NotStair("left and right sides must each be a single vertical edge")
    # counterclockwise: the left edge runs downwards, the right edge upwards
    start = (left[0] + 1) % n
    bottom = [verts[(start + k) % n] for k in range((right[0] - start) % n + 1)]
    tstart = (right[0] + 1) % n
    top = [verts[(tstart + k) % n] for k in range((left[0] - tstart) % n + 1)]
    top.reverse()

    def heights(chain):
        hs = []
        for a, b in zip(chain, chain[1:]):
            if abs(a[1] - b[1]) <= tol:
                if b[0] < a[0] - tol:
                    raise NotStair("chain is not monotone in x")
                hs.append(a[1])
        return hs

    top_h = heights(top)
    bot_h = heights(bottom)
    l_up, r_up, ok_top = _steps(top_h, tol)
    r_down, l_down, _ = _steps(bot_h, tol)
    # bottom must fall first, then rise
    _, _, ok_bot = _steps([-h for h in bot_h], tol)
    if not ok_top:
        raise NotStair("top chain rises again after falling")
    if not ok_bot:
        raise NotStair("bottom chain falls again after rising")
    return (l_up, r_up, l_down, r_down)


def stair_columns(vertices) -> list[tuple[float, float, float, float]]:
    """Slabs of a stair polygon whose bottom chain is flat."""
    verts = _dedupe([(float(x), float(y)) for x, y in vertices])
    ybot = min(v[1] for v in verts)
    xs = sorted({v[0] for v in verts})
    cols = []
    for x0, x1 in zip(xs, xs[1:]):
        xm = 0.5 * (x0 + x1)
        tops = []
        for a, b in _edges(verts):
            if abs(a[1] - b[1]) <= STEP_TOL and min(a[0], b[0]) <= xm <= max(a[0], b[0]):
                tops.append(a[1])
        cols.append((x0, x1, ybot, max(tops)))
    return cols


def stair_lattice(s: StairPolygon) -> tuple[Point, Point]:
    """Lattice basis whose translates of ``s`` tile the plane.

    Only (0,0,0,0) rectangles and (0,1,0,0) one-step stairs are supported.
    For a step at ``x1`` (relative width) in a stair of width ``x2`` with
    heights ``h1 >= h2`` the basis is ``(x1, h2)`` and ``(x2, h2 - h1)``.
    """
    sig = s.signature
    if sig not in ((0, 0, 0, 0), (0, 1, 0, 0)):
        raise UnsupportedSignature(f"no tiling lattice for signature {sig}")
    cols = s.columns()
    x0 = cols[0][0]
    ybot = cols[0][2]
    merged: list[list[float]] = []
    for a, b, _, top in cols:
        if merged and abs(merged[-1][2] - top) <= STEP_TOL:
            merged[-1][1] = b
        else:
            merged.append([a, b, top])
    if len(merged) == 1:
        w = merged[0][1] - x0
        h = merged[0][2] - ybot
        return (w, 0.0), (0.0, h)
    (a1, b1, t1), (a2, b2, t2) = merged
    x1, x2 = b1 - x0, b2 - x0
    h1, h2 = t1 - ybot, t2 - ybot
    return (x1, h2), (x2, h2 - h1)
