"""Raster sampling of the window [-l, l]^2 at pixel centres.

Each shape is only evaluated on the sub-grid covered by its bounding box, so
cost scales with the total shape area rather than shapes times pixels.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .disk import QuarterConvexDisk

MEMBER_TOL = 1e-12


def grid_centers(l: float, resolution: int) -> np.ndarray:
    h = 2.0 * l / resolution
    return -l + (np.arange(resolution) + 0.5) * h


def _index_range(lo: float, hi: float, l: float, resolution: int, pad: int = 0) -> tuple[int, int]:
    h = 2.0 * l / resolution
    i0 = int(np.floor((lo + l) / h - 0.5)) - pad
    i1 = int(np.ceil((hi + l) / h - 0.5)) + 1 + pad
    return max(i0, 0), min(i1, resolution)


def accumulate(
    shapes: Iterable,
    bbox: Callable,
    member: Callable,
    l: float,
    resolution: int,
    edges: bool = False,
):
    """Sum the membership masks of ``shapes`` over the window grid.

    ``bbox(shape)`` gives ``(xmin, xmax, ymin, ymax)``; ``member(shape, X, Y)``
    returns a boolean mask. With ``edges=True`` also returns a mask of the
    samples next to a membership change of some shape.
    """
    c = grid_centers(l, resolution)
    counts = np.zeros((resolution, resolution), dtype=np.int32)
    edge = np.zeros((resolution, resolution), dtype=bool) if edges else None
    pad = 1 if edges else 0
    for s in shapes:
        x0, x1, y0, y1 = bbox(s)
        ix0, ix1 = _index_range(x0, x1, l, resolution, pad)
        iy0, iy1 = _index_range(y0, y1, l, resolution, pad)
        if ix0 >= ix1 or iy0 >= iy1:
            continue
        X, Y = np.meshgrid(c[ix0:ix1], c[iy0:iy1])
        m = member(s, X, Y)
        counts[iy0:iy1, ix0:ix1] += m
        if edges:
            e = np.zeros_like(m)
            e[1:, :] |= m[1:, :] != m[:-1, :]
            e[:-1, :] |= m[1:, :] != m[:-1, :]
            e[:, 1:] |= m[:, 1:] != m[:, :-1]
            e[:, :-1] |= m[:, 1:] != m[:, :-1]
            edge[iy0:iy1, ix0:ix1] |= e
    return (counts, edge) if edges else counts


def copy_member(disk: QuarterConvexDisk, ux: float, uy: float, X, Y, tol: float = MEMBER_TOL):
    t = X - ux
    s = Y - uy
    ok = (t >= -tol) & (t <= 1.0 + tol) & (s >= -tol)
    return ok & (s <= disk.f(np.clip(t, 0.0, 1.0)) + tol)


def coverage_counts(disk: QuarterConvexDisk, translates, l: float, resolution: int, edges: bool = False):
    """How many closed copies K + u contain each window sample."""
    top = float(disk.ys.max())
    return accumulate(
        translates,
        lambda u: (u[0], u[0] + 1.0, u[1], u[1] + top),
        lambda u, X, Y: copy_member(disk, u[0], u[1], X, Y),
        l,
        resolution,
        edges,
    )


def polygon_member(vertices, X, Y):
    """Crossing-number test; half-open, so polygons that tile the plane never share samples."""
    v = np.asarray(vertices, dtype=float)
    inside = np.zeros(np.shape(X), dtype=bool)
    for (ax, ay), (bx, by) in zip(v, np.roll(v, -1, axis=0)):
        if ay == by:
            continue
        crosses = (ay > Y) != (by > Y)
        xint = ax + (Y - ay) * (bx - ax) / (by - ay)
        inside ^= crosses & (X < xint)
    return inside


def _poly_bbox(vertices):
    v = np.asarray(vertices, dtype=float)
    return v[:, 0].min(), v[:, 0].max(), v[:, 1].min(), v[:, 1].max()


def polygon_multiplicity(polygons: Sequence, l: float, resolution: int, edges: bool = False):
    return accumulate(polygons, _poly_bbox, polygon_member, l, resolution, edges)


def region_multiplicity(regions: Sequence, l: float, resolution: int, edges: bool = False):
    """Half-open membership counts for StepRegion-like objects."""

    def bbox(r):
        top = max(max(ya, yb) for _, _, ya, yb in r.pieces)
        return r.xl, r.xr, r.y0, top

    def member(r, X, Y):
        m = r.contains(np.column_stack([X.ravel(), Y.ravel()]), closed=False)
        return m.reshape(X.shape)

    return accumulate(regions, bbox, member, l, resolution, edges)


def histogram(counts: np.ndarray) -> dict[int, int]:
    vals, freq = np.unique(counts, return_counts=True)
    return {int(v): int(n) for v, n in zip(vals, freq)}
