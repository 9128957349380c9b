"""Reference computations that share no code with the package internals."""

from __future__ import annotations

import itertools

import numpy as np
from shapely.geometry import Polygon, box


def disk_polygon(breakpoints, u=(0.0, 0.0)) -> Polygon:
    pts = [(0.0, 0.0), (1.0, 0.0)] + [tuple(p) for p in reversed(breakpoints)]
    return Polygon([(x + u[0], y + u[1]) for x, y in pts]).buffer(0)


def raster_area(breakpoints, resolution: int = 1024) -> float:
    xs = np.array([p[0] for p in breakpoints], dtype=float)
    ys = np.array([p[1] for p in breakpoints], dtype=float)
    c = (np.arange(resolution) + 0.5) / resolution
    X, Y = np.meshgrid(c, c)
    return float(np.mean(Y <= np.interp(X, xs, ys)))


def brute_stair_max(f, r: int, grid_n: int) -> tuple[float, tuple[float, ...]]:
    """Exhaustive maximum over increasing (r+1)-subsets of {k/grid_n}."""
    g = [k / grid_n for k in range(1, grid_n + 1)]
    best, arg = -1.0, ()
    for n in range(1, r + 2):
        for xs in itertools.combinations(g, n):
            prev, total = 0.0, 0.0
            for x in xs:
                total += (x - prev) * f(x)
                prev = x
            if total > best + 1e-15:
                best, arg = total, xs
    return best, arg


def strictly_included_right(breakpoints, u1, u2, x: float, eps: float = 1e-12):
    """Whether K1 ∩ R_x ⊂ K2 ∩ R_x strictly, by exact polygon differences.

    Returns True, False (reverse strict inclusion) or None (incomparable/equal).
    """
    half = box(x, -10.0, 10.0, 10.0)
    a = disk_polygon(breakpoints, u1).intersection(half)
    b = disk_polygon(breakpoints, u2).intersection(half)
    a_in_b = a.difference(b).area <= eps
    b_in_a = b.difference(a).area <= eps
    if a_in_b and not b_in_a:
        return True
    if b_in_a and not a_in_b:
        return False
    return None


def polyomino_cells(heights) -> set[tuple[int, int]]:
    """Unit cells of a bottom-aligned column polyomino."""
    return {(i, j) for i, h in enumerate(heights) for j in range(h)}


def can_surround(piece: set[tuple[int, int]], radius: int, max_nodes: int = 200000) -> bool:
    """Can translates of ``piece`` cover every cell within ``radius`` of one fixed copy?

    Translates may stick out of the neighbourhood but may not overlap. If this
    fails, no tiling of the plane by translates exists. Backtracking always
    fills the lowest-then-leftmost empty target cell.
    """
    target = {
        (x + dx, y + dy)
        for x, y in piece
        for dx in range(-radius, radius + 1)
        for dy in range(-radius, radius + 1)
    }
    used = set(piece)
    nodes = 0

    def first_empty():
        todo = [c for c in target if c not in used]
        return min(todo, key=lambda c: (c[1], c[0])) if todo else None

    def solve() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise RuntimeError("search budget exceeded")
        cell = first_empty()
        if cell is None:
            return True
        for ax, ay in piece:
            shift = (cell[0] - ax, cell[1] - ay)
            placed = {(x + shift[0], y + shift[1]) for x, y in piece}
            if placed & used:
                continue
            used.update(placed)
            if solve():
                return True
            used.difference_update(placed)
        return False

    return solve()
