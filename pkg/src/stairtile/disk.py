"""Quarter-convex disks K_f = {(x, y) : 0 <= x <= 1, 0 <= y <= f(x)}.

``f`` is stored as a piecewise-linear function through a list of breakpoints.
It must start at (0, 1), be non-increasing, stay non-negative and have
non-increasing slopes, so that K_f is a convex disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadDomain,
    Degenerate,
    NegativeHeight,
    NoFeasibleAssignment,
    NotConvex,
    NotConvexQuad,
    NotMonotone,
    OutOfDomain,
)

SLOPE_TOL = 1e-12
DOMAIN_TOL = 1e-12
Point = tuple[float, float]


@dataclass(frozen=True)
class QuarterConvexDisk:
    breakpoints: tuple[Point, ...]

    @cached_property
    def xs(self) -> np.ndarray:
        return np.array([p[0] for p in self.breakpoints], dtype=float)

    @cached_property
    def ys(self) -> np.ndarray:
        return np.array([p[1] for p in self.breakpoints], dtype=float)

    @property
    def f1(self) -> float:
        return self.breakpoints[-1][1]

    @cached_property
    def slopes(self) -> np.ndarray:
        return np.diff(self.ys) / np.diff(self.xs)

    def f(self, x):
        """Evaluate f without a domain check (vectorised)."""
        return np.interp(x, self.xs, self.ys)

    @cached_property
    def area(self) -> float:
        xs, ys = self.xs, self.ys
        return float(np.sum(np.diff(xs) * (ys[1:] + ys[:-1])) / 2.0)

    def polygon(self) -> list[Point]:
        """Counterclockwise vertex list of K."""
        pts: list[Point] = [(0.0, 0.0), (1.0, 0.0)]
        top = list(reversed(self.breakpoints))
        if top[0][1] <= 0.0:
            top = top[1:]
        return pts + [(float(x), float(y)) for x, y in top]

    @property
    def is_triangle(self) -> bool:
        return len(self.breakpoints) == 2 and self.f1 == 0.0

    @property
    def is_square(self) -> bool:
        return len(self.breakpoints) == 2 and self.f1 == 1.0

    def to_json(self) -> dict:
        return {"breakpoints": [[x, y] for x, y in self.breakpoints]}


@dataclass(frozen=True)
class BoundaryCurve:
    """The curved part C_K of the boundary, as a polyline."""

    vertices: tuple[Point, ...]

    def segments(self):
        return list(zip(self.vertices[:-1], self.vertices[1:]))


@dataclass(frozen=True)
class AffineMap:
    linear: tuple[tuple[float, float], tuple[float, float]]
    translation: Point

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear, dtype=float)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def apply(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return pts @ self.matrix.T + np.asarray(self.translation)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """Return self o other."""
        m = self.matrix @ other.matrix
        t = self.matrix @ np.asarray(other.translation) + np.asarray(self.translation)
        return _affine(m, t)

    def inverse(self) -> "AffineMap":
        m = np.linalg.inv(self.matrix)
        return _affine(m, -m @ np.asarray(self.translation))

    def to_json(self) -> dict:
        return {"linear": [list(r) for r in self.linear], "translation": list(self.translation)}


def _affine(m, t) -> AffineMap:
    return AffineMap(
        linear=((float(m[0, 0]), float(m[0, 1])), (float(m[1, 0]), float(m[1, 1]))),
        translation=(float(t[0]), float(t[1])),
    )


def make_disk(points: Sequence[Sequence[float]]) -> QuarterConvexDisk:
    """Validate breakpoints and return the disk in canonical form.

    Collinear interior breakpoints are merged, so two disks describing the
    same f compare equal.
    """
    pts = [(float(p[0]), float(p[1])) for p in points]
    if not pts or not all(math.isfinite(c) for p in pts for c in p):
        raise BadDomain("breakpoints must be a non-empty list of finite points")
    if len(pts) < 2:
        raise BadDomain("need at least two breakpoints")
    if abs(pts[0][0]) > DOMAIN_TOL or abs(pts[-1][0] - 1.0) > DOMAIN_TOL:
        raise BadDomain("abscissas must run from 0 to 1")
    if abs(pts[0][1] - 1.0) > DOMAIN_TOL:
        raise BadDomain("f(0) must equal 1")
    pts[0] = (0.0, 1.0)
    pts[-1] = (1.0, pts[-1][1])
    xs = [p[0] for p in pts]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise BadDomain("abscissas must be strictly increasing")
    ys = [p[1] for p in pts]
    if any(y < -DOMAIN_TOL for y in ys):
        raise NegativeHeight("f must be non-negative")
    if any(b > a + DOMAIN_TOL for a, b in zip(ys, ys[1:])):
        raise NotMonotone("f must be non-increasing")
    slopes = [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]
    if any(s1 > s0 + SLOPE_TOL for s0, s1 in zip(slopes, slopes[1:])):
        raise NotConvex("slopes of f must be non-increasing for K_f to be convex")

    keep = [pts[0]]
    for i in range(1, len(pts) - 1):
        if abs(slopes[i] - slopes[i - 1]) > SLOPE_TOL:
            keep.append(pts[i])
    keep.append(pts[-1])
    # heights within tolerance of 0 or 1 snap, so f(1) = 1e-16 does not create a sliver edge
    clean = tuple((x, 0.0 if y <= DOMAIN_TOL else 1.0 if y >= 1.0 - DOMAIN_TOL else y) for x, y in keep)
    return QuarterConvexDisk(clean)


def eval_f(disk: QuarterConvexDisk, x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -DOMAIN_TOL) or np.any(arr > 1.0 + DOMAIN_TOL):
        raise OutOfDomain(f"x={x} outside [0, 1]")
    val = disk.f(np.clip(arr, 0.0, 1.0))
    return float(val) if np.ndim(val) == 0 else val


def disk_area(disk: QuarterConvexDisk) -> float:
    return disk.area


def boundary_curve(disk: QuarterConvexDisk) -> BoundaryCurve:
    verts = [(float(x), float(y)) for x, y in disk.breakpoints]
    if disk.f1 > 0.0:
        verts.append((1.0, 0.0))
    return BoundaryCurve(tuple(verts))


def disk_from_function(fn: Callable, samples: int = 64) -> QuarterConvexDisk:
    """Sample a continuous concave f on a uniform grid of ``samples`` intervals."""
    xs = np.linspace(0.0, 1.0, samples + 1)
    ys = np.asarray(fn(xs), dtype=float) * np.ones_like(xs)
    return make_disk(list(zip(xs, ys)))


def triangle() -> QuarterConvexDisk:
    return make_disk([(0, 1), (1, 0)])


def square() -> QuarterConvexDisk:
    return make_disk([(0, 1), (1, 1)])


def _basis_map(origin, e1_image, e2_image) -> AffineMap:
    """Affine map sending origin -> (0,0), e1_image -> (1,0), e2_image -> (0,1)."""
    o = np.asarray(origin, dtype=float)
    b = np.column_stack([np.asarray(e1_image, float) - o, np.asarray(e2_image, float) - o])
    m = np.linalg.inv(b)
    return _affine(m, -m @ o)


def _signed_area(poly) -> float:
    p = np.asarray(poly, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)) / 2.0


def normalize_triangle(v1, v2, v3) -> tuple[QuarterConvexDisk, AffineMap]:
    if abs(_signed_area([v1, v2, v3])) <= 1e-12 * max(1.0, _scale([v1, v2, v3]) ** 2):
        raise Degenerate("triangle has zero area")
    return triangle(), _basis_map(v1, v2, v3)


def _scale(pts) -> float:
    p = np.asarray(pts, dtype=float)
    return float(np.max(np.ptp(p, axis=0)))


def _ccw_order(pts: np.ndarray) -> list[int]:
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    return [int(i) for i in np.argsort(ang, kind="stable")]


def normalize_quadrilateral(v1, v2, v3, v4, tol: float = 1e-9) -> tuple[QuarterConvexDisk, AffineMap]:
    """Affinely map a convex quadrilateral onto (0,0),(1,0),(x,y),(0,1).

    The normal form needs 0 <= x, y <= 1 and x + y >= 1. Every corner and
    both neighbour orientations are tried; among feasible assignments the
    lexicographically smallest (x, y) wins, with ties going to the lowest
    input vertex index. Picking the minimum rather than the first feasible
    corner makes the result independent of vertex labelling and hence
    affinely invariant.
    """
    pts = np.asarray([v1, v2, v3, v4], dtype=float)
    order = _ccw_order(pts)
    ring = pts[order]
    n = 4
    crosses = []
    for k in range(n):
        a, b, c = ring[k], ring[(k + 1) % n], ring[(k + 2) % n]
        crosses.append((b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]))
    scale2 = max(_scale(pts), 1e-300) ** 2
    if min(crosses) <= 1e-12 * scale2:
        raise NotConvexQuad("vertices do not form a strictly convex quadrilateral")

    candidates = []
    for k in range(n):
        corner, nxt, opp, prv = (ring[(k + j) % n] for j in range(4))
        for orient, (e1, e2) in enumerate(((nxt, prv), (prv, nxt))):
            amap = _basis_map(corner, e1, e2)
            x, y = amap.apply(opp)[0]
            if -tol <= x <= 1 + tol and -tol <= y <= 1 + tol and x + y >= 1 - tol:
                key = (round(float(x), 9), round(float(y), 9), order[k], orient)
                candidates.append((key, float(x), float(y), amap))
    if not candidates:
        raise NoFeasibleAssignment("no corner assignment reaches the normal form")
    _, x, y, amap = min(candidates, key=lambda c: c[0])
    x = min(max(x, 0.0), 1.0)
    y = min(max(y, 0.0), 1.0)
    if x >= 1.0 - tol:
        disk = make_disk([(0.0, 1.0), (1.0, y)])
    else:
        disk = make_disk([(0.0, 1.0), (x, y), (1.0, 0.0)])
    return disk, amap
