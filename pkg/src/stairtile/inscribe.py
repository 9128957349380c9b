"""Largest (0, r, 0, 0) stair polygon inscribed in a quarter-convex disk.

A stair with step abscissas ``0 < x_1 < ... < x_{r+1} <= 1`` has area
``sum_k (x_k - x_{k-1}) f(x_k)`` with ``x_0 = 0``. ``max_stair_area`` finds
the supremum A(r) by multi-start coordinate ascent; ``oracle_max_stair_area``
solves the same problem exactly on a finite grid by dynamic programming and
serves as the independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import Config
from .disk import QuarterConvexDisk
from .errors import BadAbscissas, BudgetTooLarge, InvalidBudget

TIE_TOL = 1e-12


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    xs: tuple[float, ...]
    iterations: int
    restarts_used: int
    oracle_gap: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "xs": list(self.xs),
            "iterations": self.iterations,
            "restarts_used": self.restarts_used,
            "oracle_gap": self.oracle_gap,
        }


@dataclass(frozen=True)
class ConcaveExtension:
    values: tuple[float, ...]  # A(0), ..., A(R)
    xs: tuple[tuple[float, ...], ...] = field(default=(), compare=False)

    @property
    def R(self) -> int:
        return len(self.values) - 1

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0) or np.any(t_arr > self.R + 1e-12):
            raise ValueError(f"t={t} outside [0, {self.R}]")
        out = np.interp(t_arr, np.arange(self.R + 1), np.asarray(self.values))
        return float(out) if out.ndim == 0 else out

    def second_differences(self) -> np.ndarray:
        return np.diff(np.asarray(self.values), 2)

    def is_concave(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.second_differences() <= tol))

    def is_monotone(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.diff(np.asarray(self.values)) >= -tol))


def _check_xs(xs) -> np.ndarray:
    arr = np.asarray(xs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise BadAbscissas("need a non-empty list of abscissas")
    if arr[0] <= 0.0 or arr[-1] > 1.0 or np.any(np.diff(arr) <= 0.0):
        raise BadAbscissas("need 0 < x_1 < ... < x_n <= 1")
    return arr


def stair_objective(disk: QuarterConvexDisk, xs: Sequence[float]) -> float:
    arr = _check_xs(xs)
    widths = np.diff(np.concatenate([[0.0], arr]))
    return float(np.sum(widths * disk.f(arr)))


def _objective_rows(disk: QuarterConvexDisk, X: np.ndarray) -> np.ndarray:
    widths = np.diff(np.concatenate([np.zeros((X.shape[0], 1)), X], axis=1), axis=1)
    return np.sum(widths * disk.f(X), axis=1)


class _Pieces:
    """Linear pieces of f as arrays: f(x) = alpha + beta * x on [lo, hi]."""

    def __init__(self, disk: QuarterConvexDisk):
        xs, ys = disk.xs, disk.ys
        self.lo = xs[:-1]
        self.hi = xs[1:]
        self.beta = np.diff(ys) / np.diff(xs)
        self.alpha = ys[:-1] - self.beta * xs[:-1]


def _coordinate_argmax(disk, pieces: _Pieces, a, b, c):
    """Maximise ``(x - a) f(x) - c x`` over ``x`` in ``[a, b]`` for each row.

    On every linear piece of f this is a concave quadratic (or linear), so
    the exact maximiser is a clipped vertex of one of the pieces.
    """
    a = a[:, None]
    b = b[:, None]
    c = c[:, None]
    lo = np.maximum(a, pieces.lo[None, :])
    hi = np.minimum(b, pieces.hi[None, :])
    valid = lo <= hi
    beta = pieces.beta[None, :]
    alpha = pieces.alpha[None, :]
    lin = alpha - a * beta - c  # coefficient of x
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = np.where(beta < 0, -lin / (2.0 * beta), np.where(lin >= 0, hi, lo))
    cand = np.clip(vertex, lo, np.maximum(lo, hi))
    val = (cand - a) * (alpha + beta * cand) - c * cand
    val = np.where(valid, val, -np.inf)
    j = np.argmax(val, axis=1)
    rows = np.arange(cand.shape[0])
    return cand[rows, j], val[rows, j]


def _ascend(disk: QuarterConvexDisk, X: np.ndarray, max_sweeps: int, tol: float):
    """Cyclic exact coordinate ascent on every row of X (closed simplex)."""
    pieces = _Pieces(disk)
    n = X.shape[1]
    value = _objective_rows(disk, X)
    sweeps = 0
    zeros = np.zeros(X.shape[0])
    ones = np.ones(X.shape[0])
    for sweeps in range(1, max_sweeps + 1):
        for k in range(n):
            a = X[:, k - 1] if k > 0 else zeros
            if k + 1 < n:
                b = X[:, k + 1]
                c = disk.f(b)
            else:
                b, c = ones, zeros
            new_x, _ = _coordinate_argmax(disk, pieces, a, b, c)
            X[:, k] = new_x
        new_value = _objective_rows(disk, X)
        delta = float(np.max(new_value - value))
        value = np.maximum(value, new_value)
        if delta < tol:
            break
    return X, _objective_rows(disk, X), sweeps


def collapse(disk: QuarterConvexDisk, xs) -> tuple[float, ...]:
    """Remove ties x_k = x_{k+1} and an empty first column; area is unchanged."""
    out: list[float] = []
    for x in sorted(float(v) for v in xs):
        if x <= TIE_TOL:
            continue
        if out and x - out[-1] <= TIE_TOL:
            out[-1] = max(out[-1], x)
            continue
        out.append(min(x, 1.0))
    if not out:
        out = [1.0]
    return tuple(out)


def _refine(disk: QuarterConvexDisk, x: np.ndarray, step: float, span: int = 2) -> np.ndarray:
    """One pass of joint moves of adjacent coordinate pairs on a fine grid."""
    best = x.copy()
    best_val = _objective_rows(disk, best[None, :])[0]
    n = best.size
    offs = np.arange(-span, span + 1) * step
    di, dj = np.meshgrid(offs, offs, indexing="ij")
    di, dj = di.ravel(), dj.ravel()
    for k in range(n):
        pairs = [(k, k + 1)] if k + 1 < n else [(k, None)]
        for i, j in pairs:
            trial = np.repeat(best[None, :], di.size, axis=0)
            trial[:, i] += di
            if j is not None:
                trial[:, j] += dj
            trial = np.clip(trial, 0.0, 1.0)
            ok = np.all(np.diff(np.concatenate([np.zeros((trial.shape[0], 1)), trial], axis=1), axis=1) >= 0, axis=1)
            if not np.any(ok):
                continue
            vals = np.where(ok, _objective_rows(disk, trial), -np.inf)
            m = int(np.argmax(vals))
            if vals[m] > best_val + 1e-15:
                best, best_val = trial[m].copy(), vals[m]
    return best


def max_stair_area(
    disk: QuarterConvexDisk,
    r: int,
    cfg: Optional[Config] = None,
    oracle_grid: Optional[int] = None,
) -> OptimizationResult:
    """A(r) by multi-start coordinate ascent followed by a fine-grid polish."""
    if r < 0 or int(r) != r:
        raise InvalidBudget(f"step budget must be a non-negative integer, got {r}")
    cfg = cfg or Config()
    n = int(r) + 1
    rng = np.random.default_rng(cfg.seed + 7919 * n)
    starts = [np.arange(1, n + 1) / (n + 1), np.arange(1, n + 1) / n]
    extra = max(cfg.restarts - len(starts), 0)
    if extra:
        starts.extend(np.sort(rng.uniform(0.0, 1.0, size=(extra, n)), axis=1))
    X = np.array(starts[: max(cfg.restarts, 1)], dtype=float)
    X, vals, sweeps = _ascend(disk, X, cfg.max_sweeps, 1e-12)
    best = X[int(np.argmax(vals))]

    polished = _refine(disk, best, cfg.refine_step)
    Y, yvals, more = _ascend(disk, polished[None, :].copy(), cfg.max_sweeps, 1e-12)
    if yvals[0] >= vals.max():
        best = Y[0]
    xs = collapse(disk, best)
    value = stair_objective(disk, xs)
    gap = None
    grid = oracle_grid if oracle_grid is not None else None
    if grid:
        ov, _ = oracle_max_stair_area(disk, r, grid)
        gap = float(ov - value)
    return OptimizationResult(value, xs, sweeps + more, X.shape[0], gap)


def oracle_grid_points(disk: QuarterConvexDisk, grid_n: int, include_breakpoints: bool = True) -> np.ndarray:
    g = np.arange(grid_n + 1) / grid_n
    if include_breakpoints:
        g = np.union1d(g, disk.xs)
    return g


def oracle_max_stair_area(
    disk: QuarterConvexDisk,
    r: int,
    grid_n: int,
    include_breakpoints: bool = True,
) -> tuple[float, tuple[float, ...]]:
    """Exact maximum of the stair area over abscissas drawn from a grid.

    Dynamic programme over (grid index, abscissas used); the breakpoints of
    f are added to the grid by default since optima often sit on kinks.
    Fewer than r + 1 abscissas are allowed, matching tied coordinates.
    """
    if r < 0:
        raise InvalidBudget(f"step budget must be non-negative, got {r}")
    if grid_n < 2:
        raise BudgetTooLarge("grid_n must be at least 2")
    g = oracle_grid_points(disk, grid_n, include_breakpoints)
    m = g.size
    if m * m * (r + 1) > 2e9:
        raise BudgetTooLarge(f"grid of {m} points with {r + 1} abscissas is too large")
    fg = disk.f(g)
    n = r + 1
    neg = -np.inf
    prev = np.full(m, neg)
    prev[0] = 0.0
    back = []
    best_val, best_layer, best_idx = neg, 0, 0
    chunk = max(1, int(4e6 // m))
    for layer in range(1, n + 1):
        cur = np.full(m, neg)
        arg = np.zeros(m, dtype=np.int64)
        for j0 in range(1, m, chunk):
            j1 = min(m, j0 + chunk)
            js = np.arange(j0, j1)
            # score[i, j] = prev[i] - g_i f(g_j), restricted to i < j
            score = prev[:, None] - g[:, None] * fg[None, js]
            score[np.arange(m)[:, None] >= js[None, :]] = neg
            i_best = np.argmax(score, axis=0)
            cur[js] = score[i_best, np.arange(js.size)] + g[js] * fg[js]
            arg[js] = i_best
        back.append(arg)
        j = int(np.argmax(cur))
        if cur[j] > best_val + 1e-15:
            best_val, best_layer, best_idx = float(cur[j]), layer, j
        prev = cur
    xs = []
    j = best_idx
    for layer in range(best_layer, 0, -1):
        xs.append(float(g[j]))
        j = int(back[layer - 1][j])
    xs.reverse()
    return best_val, tuple(xs)


def extend_A(disk: QuarterConvexDisk, R: int, cfg: Optional[Config] = None) -> ConcaveExtension:
    """Knots A(0..R) joined piecewise-linearly."""
    if R < 1:
        raise InvalidBudget("R must be at least 1")
    results = [max_stair_area(disk, r, cfg) for r in range(R + 1)]
    return ConcaveExtension(tuple(res.value for res in results), tuple(res.xs for res in results))
