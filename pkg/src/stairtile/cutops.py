"""The ⊓ and ⊖ operators on translates of a disk, and the stair decomposition.

For translates K1 = K + u1 and K2 = K + u2 of one disk, ``K1 ⊓ K2`` is the
part of ``K1 ∩ K2`` that K1 hands over to K2, and ``K1 ⊖ K2 = K1 minus
(K1 ⊓ K2)``. Pointwise, a point of the overlap goes to the copy whose curved
boundary is higher above it. When the curves are at equal height, it goes to
the copy that reaches further right.

Three routes to the same sets are provided and cross-checked in the tests:

* ``in_sqcap`` / ``sqcap_mask``: the pointwise curve-height rule;
* ``sqcap_region``: the region definition via the curves' first common
  abscissa ``x0`` and the orientation of the axis sides;
* ``cut_quadrant`` / ``cut_region``: ``K1 ⊖ K2`` as K1 minus an up-facing
  quadrant, used by the decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .disk import QuarterConvexDisk, boundary_curve
from .errors import (
    AmbiguousOrientation,
    DisjointCopies,
    IdenticalCopies,
    NotACovering,
    NotStair,
    PointOutside,
)
from .stair import classify_stair

TOL = 1e-9
LEVEL_TOL = 1e-12

Point = tuple[float, float]


# ---------------------------------------------------------------------------
# pointwise predicates


def curve_heights(disk: QuarterConvexDisk, ux, uy, x):
    """Height of the curve C_{K+u} above ``x``; NaN where the line misses it."""
    ux = np.asarray(ux, dtype=float)
    uy = np.asarray(uy, dtype=float)
    t = np.asarray(x, dtype=float) - ux
    inside = (t >= -TOL) & (t <= 1.0 + TOL)
    h = uy + disk.f(np.clip(t, 0.0, 1.0))
    return np.where(inside, h, np.nan)


def curve_height(disk: QuarterConvexDisk, u, x) -> Optional[float]:
    h = curve_heights(disk, u[0], u[1], x)
    return None if np.isnan(h) else float(h)


def in_copies(disk: QuarterConvexDisk, P, U, tol: float = TOL) -> np.ndarray:
    """Closed membership of points P[k] in K + U[k] (row-wise)."""
    P = np.asarray(P, dtype=float)
    U = np.asarray(U, dtype=float)
    t = P[..., 0] - U[..., 0]
    s = P[..., 1] - U[..., 1]
    ok = (t >= -tol) & (t <= 1.0 + tol) & (s >= -tol)
    return ok & (s <= disk.f(np.clip(t, 0.0, 1.0)) + tol)


def tie_rule(U1, U2) -> np.ndarray:
    """Decide equal curve heights: K1 hands over iff (u2x-u1x, u1y-u2y) > 0 lexicographically."""
    U1 = np.asarray(U1, dtype=float)
    U2 = np.asarray(U2, dtype=float)
    a = U2[..., 0] - U1[..., 0]
    b = U1[..., 1] - U2[..., 1]
    return (a > TOL) | ((np.abs(a) <= TOL) & (b > TOL))


def sqcap_mask(disk: QuarterConvexDisk, P, U1, U2, tie=tie_rule) -> np.ndarray:
    """Row-wise P[k] in (K+U1[k]) ⊓ (K+U2[k]), assuming P[k] lies in both."""
    P = np.asarray(P, dtype=float)
    U1 = np.asarray(U1, dtype=float)
    U2 = np.asarray(U2, dtype=float)
    y1 = curve_heights(disk, U1[..., 0], U1[..., 1], P[..., 0])
    y2 = curve_heights(disk, U2[..., 0], U2[..., 1], P[..., 0])
    return (y1 < y2 - TOL) | ((np.abs(y1 - y2) <= TOL) & tie(U1, U2))


def cut_mask(disk: QuarterConvexDisk, P, U1, U2, sqcap=sqcap_mask) -> np.ndarray:
    """Row-wise P[k] in (K+U1[k]) ⊖ (K+U2[k])."""
    in1 = in_copies(disk, P, U1)
    in2 = in_copies(disk, P, U2)
    return in1 & ~(in2 & sqcap(disk, P, U1, U2))


def in_sqcap(disk: QuarterConvexDisk, p, u1, u2) -> bool:
    p = np.asarray(p, dtype=float)
    if not (in_copies(disk, p, u1) and in_copies(disk, p, u2)):
        raise PointOutside(f"{tuple(p)} is not in both copies")
    return bool(sqcap_mask(disk, p, u1, u2))


def in_cut(disk: QuarterConvexDisk, p, u1, u2) -> bool:
    return bool(cut_mask(disk, np.asarray(p, dtype=float), u1, u2))


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class StepRegion:
    """``{(x, y) : xl <= x <= xr, y0 <= y <= top(x)}`` with a piecewise-linear top.

    ``pieces`` holds ``(xa, xb, ya, yb)`` segments covering ``[xl, xr]`` in
    order; the top may jump between pieces.
    """

    xl: float
    xr: float
    y0: float
    pieces: tuple[tuple[float, float, float, float], ...]

    @property
    def area(self) -> float:
        return float(sum((xb - xa) * (0.5 * (ya + yb) - self.y0) for xa, xb, ya, yb in self.pieces))

    def contains(self, P, closed: bool = True, tol: float = TOL) -> np.ndarray:
        P = np.atleast_2d(np.asarray(P, dtype=float))
        x, y = P[:, 0], P[:, 1]
        if closed:
            ok = np.zeros(x.shape, dtype=bool)
            for xa, xb, ya, yb in self.pieces:
                inx = (x >= xa - tol) & (x <= xb + tol)
                w = xb - xa
                t = np.clip((x - xa) / w, 0.0, 1.0) if w > 0 else np.zeros_like(x)
                top = ya + t * (yb - ya)
                ok |= inx & (y >= self.y0 - tol) & (y <= top + tol)
            return ok
        ok = np.zeros(x.shape, dtype=bool)
        for xa, xb, ya, yb in self.pieces:
            inx = (x >= xa) & (x < xb)
            w = xb - xa
            t = (x - xa) / w if w > 0 else np.zeros_like(x)
            top = ya + t * (yb - ya)
            ok |= inx & (y >= self.y0) & (y < top)
        return ok

    def polygon(self) -> list[Point]:
        pts: list[Point] = [(self.xl, self.y0), (self.xr, self.y0)]
        for xa, xb, ya, yb in reversed(self.pieces):
            pts.append((xb, yb))
            pts.append((xa, ya))
        return _dedupe_ring(pts)

    def is_rectilinear(self, tol: float = LEVEL_TOL) -> bool:
        return all(abs(ya - yb) <= tol for _, _, ya, yb in self.pieces)

    def to_json(self) -> dict:
        return {"polygon": [list(p) for p in self.polygon()], "area": self.area}


def _dedupe_ring(pts: list[Point], tol: float = LEVEL_TOL) -> list[Point]:
    out: list[Point] = []
    for p in pts:
        if not out or abs(p[0] - out[-1][0]) > tol or abs(p[1] - out[-1][1]) > tol:
            out.append(p)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= tol and abs(out[0][1] - out[-1][1]) <= tol:
        out.pop()
    return out


def _curve_pieces(disk: QuarterConvexDisk, u: Point, xl: float, xr: float, extra=()):
    """Breakpoint list for the curve of K + u over [xl, xr], refined by ``extra``."""
    xs = disk.xs + u[0]
    cuts = [xl, xr] + [x for x in xs if xl < x < xr] + [x for x in extra if xl < x < xr]
    return np.unique(np.asarray(cuts, dtype=float))


def copies_intersect(disk: QuarterConvexDisk, u1, u2) -> bool:
    xl = max(u1[0], u2[0])
    xr = min(u1[0], u2[0]) + 1.0
    y0 = max(u1[1], u2[1])
    if xl > xr + TOL:
        return False
    top = min(u1[1] + disk.f(min(max(xl - u1[0], 0.0), 1.0)), u2[1] + disk.f(min(max(xl - u2[0], 0.0), 1.0)))
    return bool(top >= y0 - TOL)


def overlap_region(disk: QuarterConvexDisk, u1, u2, xmin=-np.inf, xmax=np.inf) -> Optional[StepRegion]:
    """K1 ∩ K2 restricted to xmin <= x <= xmax, or None when empty."""
    u1 = (float(u1[0]), float(u1[1]))
    u2 = (float(u2[0]), float(u2[1]))
    xl = max(u1[0], u2[0], xmin)
    xr = min(u1[0] + 1.0, u2[0] + 1.0, xmax)
    y0 = max(u1[1], u2[1])
    if xr < xl:
        return None

    def top(x):
        return np.minimum(
            u1[1] + disk.f(np.clip(x - u1[0], 0, 1)),
            u2[1] + disk.f(np.clip(x - u2[0], 0, 1)),
        )

    cuts = np.unique(np.concatenate([
        _curve_pieces(disk, u1, xl, xr),
        _curve_pieces(disk, u2, xl, xr),
    ]))
    # add crossings of the two curves and of the top with the floor y0
    extra = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        h1a = u1[1] + disk.f(np.clip(a - u1[0], 0, 1))
        h1b = u1[1] + disk.f(np.clip(b - u1[0], 0, 1))
        h2a = u2[1] + disk.f(np.clip(a - u2[0], 0, 1))
        h2b = u2[1] + disk.f(np.clip(b - u2[0], 0, 1))
        da, db = h1a - h2a, h1b - h2b
        if da * db < 0:
            extra.append(a + (b - a) * da / (da - db))
    cuts = np.unique(np.concatenate([cuts, extra]))
    extra = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        ta, tb = top(a) - y0, top(b) - y0
        if ta * tb < 0:
            extra.append(a + (b - a) * ta / (ta - tb))
    cuts = np.unique(np.concatenate([cuts, extra]))
    vals = top(cuts)
    keep = vals >= y0 - LEVEL_TOL
    if not np.any(keep):
        return None
    idx = np.nonzero(keep)[0]
    cuts, vals = cuts[idx[0]: idx[-1] + 1], np.maximum(vals[idx[0]: idx[-1] + 1], y0)
    if cuts.size == 1:
        return StepRegion(float(cuts[0]), float(cuts[0]), y0, ((float(cuts[0]),) * 2 + (float(vals[0]),) * 2,))
    pieces = tuple(
        (float(a), float(b), float(va), float(vb))
        for a, b, va, vb in zip(cuts[:-1], cuts[1:], vals[:-1], vals[1:])
    )
    return StepRegion(float(cuts[0]), float(cuts[-1]), y0, pieces)


def _point_segment_distance(p, a, b) -> float:
    ab = b - a
    t = float(np.clip((p - a) @ ab / max(float(ab @ ab), 1e-300), 0.0, 1.0))
    return float(np.linalg.norm(a + t * ab - p))


def _segment_intersections(p1, p2, q1, q2, tol: float = TOL) -> list[Point]:
    p1, p2, q1, q2 = (np.asarray(v, dtype=float) for v in (p1, p2, q1, q2))
    r = p2 - p1
    s = q2 - q1
    if np.linalg.norm(r) <= tol:
        return [tuple(p1)] if _point_segment_distance(p1, q1, q2) <= tol else []
    if np.linalg.norm(s) <= tol:
        return [tuple(q1)] if _point_segment_distance(q1, p1, p2) <= tol else []
    denom = r[0] * s[1] - r[1] * s[0]
    qp = q1 - p1
    scale = max(np.linalg.norm(r), np.linalg.norm(s), 1.0)
    if abs(denom) <= tol * scale * scale:
        # parallel: check collinearity, then overlap
        if abs(qp[0] * r[1] - qp[1] * r[0]) > tol * scale * scale:
            return []
        rr = float(r @ r)
        if rr == 0.0:
            return [tuple(p1)] if np.linalg.norm(qp) <= tol else []
        t0 = float(qp @ r) / rr
        t1 = float((q2 - p1) @ r) / rr
        lo, hi = max(min(t0, t1), 0.0), min(max(t0, t1), 1.0)
        if lo > hi + tol:
            return []
        return [tuple(p1 + lo * r), tuple(p1 + min(hi, 1.0) * r)]
    t = (qp[0] * s[1] - qp[1] * s[0]) / denom
    w = (qp[0] * r[1] - qp[1] * r[0]) / denom
    if -tol <= t <= 1 + tol and -tol <= w <= 1 + tol:
        return [tuple(p1 + min(max(t, 0.0), 1.0) * r)]
    return []


def curve_polyline(disk: QuarterConvexDisk, u) -> list[Point]:
    return [(x + u[0], y + u[1]) for x, y in boundary_curve(disk).vertices]


def curve_intersection_x0(disk: QuarterConvexDisk, u1, u2) -> Optional[float]:
    """Smallest abscissa of C_{K1} ∩ C_{K2}, or None if the curves are disjoint."""
    c1 = curve_polyline(disk, u1)
    c2 = curve_polyline(disk, u2)
    xs = []
    for a, b in zip(c1[:-1], c1[1:]):
        for c, d in zip(c2[:-1], c2[1:]):
            xs.extend(p[0] for p in _segment_intersections(a, b, c, d))
    return min(xs) if xs else None


def _polyline_meets_copy(disk: QuarterConvexDisk, line: list[Point], u) -> bool:
    if np.any(in_copies(disk, np.asarray(line), np.asarray(u, dtype=float)[None, :])):
        return True
    poly = [(x + u[0], y + u[1]) for x, y in disk.polygon()]
    edges = list(zip(poly, poly[1:] + poly[:1]))
    for a, b in zip(line[:-1], line[1:]):
        for c, d in edges:
            if _segment_intersections(a, b, c, d):
                return True
    return False


def _side_meets_bottom(u_left_side, u_bottom) -> bool:
    """S^v of K + u_left_side meets S^h of K + u_bottom."""
    return (
        u_bottom[0] - TOL <= u_left_side[0] <= u_bottom[0] + 1.0 + TOL
        and u_left_side[1] - TOL <= u_bottom[1] <= u_left_side[1] + 1.0 + TOL
    )


def _check_pair(disk, u1, u2):
    u1 = (float(u1[0]), float(u1[1]))
    u2 = (float(u2[0]), float(u2[1]))
    if abs(u1[0] - u2[0]) <= TOL and abs(u1[1] - u2[1]) <= TOL:
        raise IdenticalCopies("copies must be distinct")
    if not copies_intersect(disk, u1, u2):
        raise DisjointCopies(f"K+{u1} and K+{u2} do not meet")
    return u1, u2


def sqcap_region(disk: QuarterConvexDisk, u1, u2) -> Optional[StepRegion]:
    """K1 ⊓ K2 by the region definition; None when it is empty.

    If the curves are disjoint, exactly one of them meets the overlap and its
    owner hands over the whole overlap. Otherwise, with ``x0`` the first
    common abscissa of the curves and ``(i, j)`` chosen so that the left side
    of Ki meets the bottom of Kj, Ki hands over the overlap left of x0 and Kj
    the part right of it.
    """
    u1, u2 = _check_pair(disk, u1, u2)
    x0 = curve_intersection_x0(disk, u1, u2)
    if x0 is None:
        c1 = curve_polyline(disk, u1)
        c2 = curve_polyline(disk, u2)
        m1 = _polyline_meets_copy(disk, c1, u2)
        m2 = _polyline_meets_copy(disk, c2, u1)
        if m1 == m2:
            raise AmbiguousOrientation("both or neither curve meets the overlap")
        return overlap_region(disk, u1, u2) if m1 else None
    o12 = _side_meets_bottom(u1, u2)
    o21 = _side_meets_bottom(u2, u1)
    if o12 == o21:
        raise AmbiguousOrientation(f"orientation undecided for {u1}, {u2}")
    if o12:  # (i, j) = (1, 2): K1 hands over the left part
        return overlap_region(disk, u1, u2, xmax=x0)
    return overlap_region(disk, u1, u2, xmin=x0)


def _switch_abscissa(disk: QuarterConvexDisk, ua, ub) -> float:
    """First x where the curve of K+ua stops being strictly above that of K+ub.

    ``ub`` must lie to the right of ``ua``. The height difference is
    non-increasing in x, because f is concave. Returns ``ua.x + 1`` when the
    curve of K+ua stays above on the whole common range.
    """
    lo, hi = ub[0], ua[0] + 1.0
    if hi <= lo:
        return hi
    cuts = np.unique(np.concatenate([
        [lo, hi],
        [x for x in disk.xs + ua[0] if lo < x < hi],
        [x for x in disk.xs + ub[0] if lo < x < hi],
    ]))
    h = (ua[1] + disk.f(np.clip(cuts - ua[0], 0, 1))) - (ub[1] + disk.f(np.clip(cuts - ub[0], 0, 1)))
    below = np.nonzero(h <= TOL)[0]
    if below.size == 0:
        return hi
    k = int(below[0])
    if k == 0:
        return float(lo)
    a, b = cuts[k - 1], cuts[k]
    ha, hb = h[k - 1], h[k]
    if hb >= 0:
        return float(b)
    return float(a + (b - a) * ha / (ha - hb))


@dataclass(frozen=True)
class Quadrant:
    """Up-facing quadrant: ``kind='R'`` is {x >= a, y >= b}, ``'L'`` is {x < a, y >= b}."""

    kind: str
    anchor: Point

    def contains(self, P, tol: float = 0.0) -> np.ndarray:
        P = np.atleast_2d(np.asarray(P, dtype=float))
        a, b = self.anchor
        iny = P[:, 1] >= b - tol
        if self.kind == "R":
            return iny & (P[:, 0] >= a - tol)
        return iny & (P[:, 0] < a + tol)


def cut_quadrant(disk: QuarterConvexDisk, u1, u2) -> Optional[Quadrant]:
    """Quadrant Q with K1 ⊖ K2 = K1 minus Q, or None when nothing is cut."""
    u1 = (float(u1[0]), float(u1[1]))
    u2 = (float(u2[0]), float(u2[1]))
    dx, dy = u2[0] - u1[0], u2[1] - u1[1]
    if dx >= 0 and dy >= 0:
        return Quadrant("R", u2)
    if dx <= 0 and dy <= 0:
        return None
    if dx > 0:  # K2 lower-right of K1
        xs = _switch_abscissa(disk, u1, u2)
        return Quadrant("R", (xs, u1[1]))
    xs = _switch_abscissa(disk, u2, u1)  # K1 lower-right of K2
    return Quadrant("L", (xs, u2[1]))


def _subtract_quadrant(disk: QuarterConvexDisk, u, q: Optional[Quadrant]) -> Optional[StepRegion]:
    xl, xr, y0 = u[0], u[0] + 1.0, u[1]
    levels = []
    if q is not None:
        a, b = q.anchor
        if q.kind == "R":
            if b <= y0 + LEVEL_TOL:
                xr = min(xr, a)
            elif xl < a < xr:
                levels.append(("R", a, b))
            elif a <= xl:
                levels.append(("R", xl, b))
        else:
            if b <= y0 + LEVEL_TOL:
                xl = max(xl, a)
            elif xl < a < xr:
                levels.append(("L", a, b))
            elif a >= xr:
                levels.append(("L", xr + 1.0, b))
    if xr <= xl:
        return None
    extra = []
    for kind, a, b in levels:
        extra.append(a)
        t = _inverse_curve(disk, u, b)
        if t is not None:
            extra.append(t)
    cuts = _curve_pieces(disk, u, xl, xr, extra)
    pieces = []
    for ca, cb in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (ca + cb)
        cap = np.inf
        for kind, a, b in levels:
            if (kind == "R" and mid >= a) or (kind == "L" and mid < a):
                cap = min(cap, b)
        ya = min(float(u[1] + disk.f(ca - u[0])), cap)
        yb = min(float(u[1] + disk.f(cb - u[0])), cap)
        pieces.append((float(ca), float(cb), ya, yb))
    return StepRegion(float(xl), float(xr), float(y0), tuple(pieces))


def _inverse_curve(disk: QuarterConvexDisk, u, level: float) -> Optional[float]:
    """Abscissa where the curve of K+u crosses ``level`` (the rightmost one)."""
    ys = disk.ys + u[1]
    xs = disk.xs + u[0]
    if level > ys[0] or level < ys[-1]:
        return None
    # ys is non-increasing; interpolate on reversed arrays
    return float(np.interp(level, ys[::-1], xs[::-1]))


@dataclass(frozen=True)
class CutResult:
    quadrant: Optional[Quadrant]
    region: Optional[StepRegion]

    @property
    def kind(self) -> Optional[str]:
        return None if self.quadrant is None else self.quadrant.kind

    @property
    def anchor(self) -> Optional[Point]:
        return None if self.quadrant is None else self.quadrant.anchor


def cut_region(disk: QuarterConvexDisk, u1, u2) -> CutResult:
    u1, u2 = _check_pair(disk, u1, u2)
    q = cut_quadrant(disk, u1, u2)
    return CutResult(q, _subtract_quadrant(disk, u1, q))


# ---------------------------------------------------------------------------
# coverings and their decomposition


@dataclass(frozen=True)
class CoveringInstance:
    disk: QuarterConvexDisk
    translates: tuple[Point, ...]
    l: float
    validate: bool = field(default=True, compare=False, repr=False)
    resolution: int = field(default=256, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "translates", tuple((float(x), float(y)) for x, y in self.translates))
        if not self.l > 0:
            raise ValueError("window half-size l must be positive")
        if len(set(self.translates)) != len(self.translates):
            raise ValueError("translates must be pairwise distinct")
        if self.validate:
            uncovered = uncovered_samples(self.disk, self.translates, self.l, self.resolution)
            if uncovered.size:
                raise NotACovering(f"{len(uncovered)} window samples uncovered, e.g. {tuple(uncovered[0])}")
            gap = uncovered_area(self.disk, self.translates, self.l)
            if gap > 1e-12 * max(1.0, 4 * self.l * self.l):
                raise NotACovering(f"uncovered area {gap:.3g} inside the window")

    @property
    def N(self) -> int:
        return len(self.translates)

    @property
    def window_area(self) -> float:
        return 4.0 * self.l * self.l

    def to_json(self) -> dict:
        return {"translates": [list(t) for t in self.translates], "l": self.l}


def uncovered_samples(disk: QuarterConvexDisk, translates, l: float, resolution: int) -> np.ndarray:
    from .raster import coverage_counts, grid_centers

    counts = coverage_counts(disk, translates, l, resolution)
    c = grid_centers(l, resolution)
    iy, ix = np.nonzero(counts == 0)
    return np.column_stack([c[ix], c[iy]])


def uncovered_area(disk: QuarterConvexDisk, translates, l: float) -> float:
    """Exact area of the window not covered by the copies (polygon union)."""
    from shapely.geometry import Polygon, box
    from shapely.ops import unary_union

    window = box(-l, -l, l, l)
    base = disk.polygon()
    polys = []
    for ux, uy in translates:
        if ux > l or ux + 1 < -l or uy > l or uy + 1 < -l:
            continue
        polys.append(Polygon([(x + ux, y + uy) for x, y in base]))
    if not polys:
        return window.area
    return float(window.difference(unary_union(polys)).area)


@dataclass(frozen=True)
class CellRegion:
    """Cell S_i of copy ``owner``: flat bottom ``y0`` and a step top.

    ``steps`` lists ``(xa, xb, level)`` in left-to-right order.
    """

    owner: int
    y0: float
    steps: tuple[tuple[float, float, float], ...]
    signature: tuple[int, int, int, int]

    @property
    def xl(self) -> float:
        return self.steps[0][0]

    @property
    def xr(self) -> float:
        return self.steps[-1][1]

    @property
    def l_i(self) -> int:
        return self.signature[0]

    @property
    def r_i(self) -> int:
        return self.signature[1]

    @property
    def area(self) -> float:
        return float(sum((xb - xa) * (h - self.y0) for xa, xb, h in self.steps))

    def polygon(self) -> list[Point]:
        pts: list[Point] = [(self.xl, self.y0), (self.xr, self.y0)]
        for xa, xb, h in reversed(self.steps):
            pts.append((xb, h))
            pts.append((xa, h))
        return _dedupe_ring(pts)

    def as_region(self) -> StepRegion:
        return StepRegion(self.xl, self.xr, self.y0, tuple((a, b, h, h) for a, b, h in self.steps))

    def contains(self, P, closed: bool = False) -> np.ndarray:
        return self.as_region().contains(P, closed=closed)

    def to_json(self) -> dict:
        return {
            "owner": self.owner,
            "polygon": [list(p) for p in self.polygon()],
            "signature": list(self.signature),
            "area": self.area,
        }


def _cell(disk: QuarterConvexDisk, i: int, translates, l: float, tol: float = TOL) -> Optional[CellRegion]:
    u = translates[i]
    xl, xr = max(u[0], -l), min(u[0] + 1.0, l)
    y0 = max(u[1], -l)
    if xr <= xl or y0 >= l:
        return None
    quads = []
    for j, v in enumerate(translates):
        if j == i or not copies_intersect(disk, u, v):
            continue
        q = cut_quadrant(disk, u, v)
        if q is not None:
            quads.append(q)
    levels = []
    for q in quads:
        a, b = q.anchor
        if b <= y0 + LEVEL_TOL:
            if q.kind == "R":
                xr = min(xr, a)
            else:
                xl = max(xl, a)
        else:
            levels.append(q)
    if xr - xl <= LEVEL_TOL:
        return None
    cuts = sorted({xl, xr, *[q.anchor[0] for q in levels if xl < q.anchor[0] < xr]})
    steps = []
    for ca, cb in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (ca + cb)
        level = l
        for q in levels:
            a, b = q.anchor
            if (q.kind == "R" and mid >= a) or (q.kind == "L" and mid < a):
                level = min(level, b)
        # the copy's own curve must lie on or above the cell (it is cut away)
        curve_end = u[1] + float(disk.f(min(max(cb - u[0], 0.0), 1.0)))
        if curve_end < level - tol and cb - ca > tol:
            raise NotACovering(
                f"curve of copy {i} is uncut near x={cb:.6g}; points up-right of it are uncovered"
            )
        if level <= y0 + LEVEL_TOL:
            raise NotStair(f"cell {i} is disconnected at x={mid:.6g}")
        if steps and abs(steps[-1][2] - level) <= LEVEL_TOL:
            steps[-1] = (steps[-1][0], cb, steps[-1][2])
        else:
            steps.append((ca, cb, level))
    heights = [h for _, _, h in steps]
    rises = sum(1 for a, b in zip(heights, heights[1:]) if b > a)
    falls = sum(1 for a, b in zip(heights, heights[1:]) if b < a)
    cell = CellRegion(i, y0, tuple(steps), (rises, falls, 0, 0))
    sig = classify_stair(cell.polygon())
    if sig != cell.signature:
        raise NotStair(f"cell {i}: top chain {heights} classifies as {sig}")
    return cell


def decompose_covering(instance: CoveringInstance) -> list[CellRegion]:
    """Cells ``S_i = closure(lI² ∩ ⋂_{j≠i} (K_i ⊖ K_j))``; empty cells are dropped."""
    cells = []
    for i in range(instance.N):
        c = _cell(instance.disk, i, instance.translates, instance.l)
        if c is not None:
            cells.append(c)
    return cells


@dataclass(frozen=True)
class DecompositionAudit:
    tiling_ok: bool
    tiling_bad_samples: int
    area_sum: float
    window_area: float
    area_ok: bool
    sum_r: int
    N: int
    n_translates: int
    A1: float
    A_sharp: float
    bound_counting_ok: bool
    bound_main_ok: bool
    bound_sharp_ok: bool
    cells_within_A_ok: bool

    @property
    def ok(self) -> bool:
        return all((self.tiling_ok, self.area_ok, self.bound_counting_ok, self.bound_main_ok,
                    self.bound_sharp_ok, self.cells_within_A_ok))

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def audit_decomposition(
    instance: CoveringInstance,
    cells: Sequence[CellRegion],
    A=None,
    resolution: int = 512,
    tol: float = 1e-6,
) -> DecompositionAudit:
    """Check the cells against the inequality chain

    |lI²| = Σ|S_i| <= Σ A(r_i) <= N A(Σr_i / N) <= N A((N-1)/N) <= N A(1).

    ``A`` is a ConcaveExtension covering at least max(1, max r_i); it is
    computed when not given.
    """
    from .inscribe import extend_A
    from .raster import region_multiplicity

    N = len(cells)
    sum_r = int(sum(c.r_i for c in cells))
    R = max([1] + [c.r_i for c in cells])
    if A is None or A.R < R:
        A = extend_A(instance.disk, R)
    window = instance.window_area
    area_sum = float(sum(c.area for c in cells))

    counts = region_multiplicity([c.as_region() for c in cells], instance.l, resolution)
    bad = int(np.count_nonzero(counts != 1))

    A1 = float(A(1))
    A_sharp = float(A((N - 1) / N)) if N else 0.0
    cells_ok = all(c.area <= A(c.r_i) + tol for c in cells)
    return DecompositionAudit(
        tiling_ok=bad == 0,
        tiling_bad_samples=bad,
        area_sum=area_sum,
        window_area=window,
        area_ok=abs(area_sum - window) <= tol * window,
        sum_r=sum_r,
        N=N,
        n_translates=instance.N,
        A1=A1,
        A_sharp=A_sharp,
        bound_counting_ok=sum_r <= N - 1,
        bound_main_ok=window <= N * A1 + tol,
        bound_sharp_ok=area_sum <= N * A_sharp + tol,
        cells_within_A_ok=bool(cells_ok),
    )
