"""Randomised checks of the ⊓/⊖ chain properties and fuzz-instance generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import Config
from .cutops import (
    CoveringInstance,
    audit_decomposition,
    curve_heights,
    cut_mask,
    decompose_covering,
    in_copies,
    sqcap_mask,
    tie_rule,
)
from .disk import QuarterConvexDisk, make_disk, normalize_quadrilateral
from .errors import GenerationFailed, GeometryError, NoFeasibleAssignment
from .inscribe import extend_A
from .raster import coverage_counts, grid_centers


# ---------------------------------------------------------------------------
# generators


def random_disk(rng: np.random.Generator, max_pieces: int = 5) -> QuarterConvexDisk:
    """Random piecewise-linear concave non-increasing f with f(0) = 1."""
    k = int(rng.integers(1, max_pieces + 1))
    widths = rng.dirichlet(np.ones(k))
    drops = np.sort(rng.uniform(0.0, 1.0, k))  # steepness grows to the right
    total = float(rng.uniform(0.0, 1.0))
    if rng.random() < 0.2:
        total = 1.0
    scale = total / max(float(np.dot(widths, drops)), 1e-12)
    slopes = -drops * scale
    xs = np.concatenate([[0.0], np.cumsum(widths)])
    xs[-1] = 1.0
    ys = np.concatenate([[1.0], 1.0 + np.cumsum(widths * slopes)])
    ys = np.maximum(ys, 0.0)
    return make_disk(list(zip(xs, ys)))


def random_convex_quad(rng: np.random.Generator) -> np.ndarray:
    """Four vertices of a random convex quadrilateral in random affine position."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2 * np.pi, 4))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
        if gaps.min() > 0.15 and gaps.max() < np.pi - 0.05:
            break
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    m = rng.normal(size=(2, 2))
    while abs(np.linalg.det(m)) < 0.2:
        m = rng.normal(size=(2, 2))
    pts = pts @ m.T + rng.normal(size=2)
    return pts[rng.permutation(4)]


def random_quad_disk(rng: np.random.Generator) -> QuarterConvexDisk:
    for _ in range(100):
        try:
            disk, _ = normalize_quadrilateral(*random_convex_quad(rng))
            return disk
        except NoFeasibleAssignment:
            continue
    raise GenerationFailed("could not draw a normalisable quadrilateral")


def _patch_point(disk: QuarterConvexDisk, p) -> tuple[float, float]:
    cx, cy = _centroid(disk)
    return (float(p[0] - cx), float(p[1] - cy))


def _centroid(disk: QuarterConvexDisk) -> tuple[float, float]:
    pts = np.asarray(disk.polygon(), dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = cross.sum() / 2.0
    return float(((x + xn) * cross).sum() / (6 * a)), float(((y + yn) * cross).sum() / (6 * a))


def random_covering(
    disk: QuarterConvexDisk,
    l: float,
    extras: int = 0,
    seed: int = 0,
    jitter: float = 0.2,
    resolution: int = 256,
    max_patches: int = 500,
) -> CoveringInstance:
    """Jittered optimal-lattice covering of [-l, l]^2 plus ``extras`` random copies.

    Holes are patched by adding a copy centred on an uncovered point, then the
    instance is re-validated.
    """
    from shapely.geometry import Polygon, box
    from shapely.ops import unary_union

    from .lattice import _translates_for_window, lattice_covering_density

    if not l > 0:
        raise ValueError("window half-size l must be positive")
    if extras < 0:
        raise ValueError("extras must be non-negative")
    rng = np.random.default_rng(seed)
    lat = lattice_covering_density(disk).lattice
    base = _translates_for_window(lat, l + 1.0, (0.0, 1.0, 0.0, 1.0), np.sqrt(2.0))
    xi = rng.uniform(-1.0, 1.0, size=(len(base), 2))
    v = np.array([lat.v1, lat.v2], dtype=float)
    pts = base + jitter * (xi @ v)
    keep = (pts[:, 0] <= l) & (pts[:, 0] + 1.0 >= -l) & (pts[:, 1] <= l) & (pts[:, 1] + 1.0 >= -l)
    translates = [tuple(map(float, p)) for p in pts[keep]]
    for _ in range(extras):
        translates.append(tuple(map(float, rng.uniform(-l - 0.5, l - 0.5, 2))))

    window = box(-l, -l, l, l)
    shape = disk.polygon()

    def poly(u):
        return Polygon([(x + u[0], y + u[1]) for x, y in shape])

    c = grid_centers(l, resolution)
    for _ in range(max_patches):
        translates = list(dict.fromkeys(translates))
        counts = coverage_counts(disk, translates, l, resolution)
        holes = np.argwhere(counts == 0)
        if holes.size:
            iy, ix = holes[rng.integers(len(holes))]
            translates.append(_patch_point(disk, (c[ix], c[iy])))
            continue
        gap = window.difference(unary_union([poly(u) for u in translates]))
        if gap.area <= 1e-12 * max(1.0, 4 * l * l):
            return CoveringInstance(disk, tuple(translates), l, resolution=resolution)
        p = gap.representative_point()
        translates.append(_patch_point(disk, (p.x, p.y)))
    raise GenerationFailed(f"window not covered after {max_patches} patches")


# ---------------------------------------------------------------------------
# chain checks


@dataclass(frozen=True)
class CheckReport:
    lemma: str
    trials: int
    violations: int
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "trials": self.trials,
            "violations": self.violations,
            "passed": self.passed,
            "witness": self.witness,
            **self.details,
        }


def _random_triples(disk: QuarterConvexDisk, rng: np.random.Generator, n: int):
    """Triples (0, u2, u3) and a point in all three copies, for ``n`` trials.

    A quarter of the offsets are snapped onto the direction of a piece of the
    curve, so the curves overlap along a segment and the tie rule is exercised.
    """
    U = np.zeros((n, 3, 2))
    P = np.zeros((n, 2))
    todo = np.arange(n)
    slopes = disk.slopes
    while todo.size:
        m = todo.size
        off = rng.uniform(-1.0, 1.0, size=(m, 2, 2))
        snap = rng.random(m) < 0.25
        sl = slopes[rng.integers(len(slopes), size=m)]
        t = rng.uniform(-1.0, 1.0, size=(m, 2))
        along = np.stack([t, t * sl[:, None]], axis=-1)
        off = np.where(snap[:, None, None], along, off)
        U_try = np.concatenate([np.zeros((m, 1, 2)), off], axis=1)
        # rejection-sample a common point from the bounding box of copy 1
        p = np.column_stack([rng.uniform(0, 1, m), rng.uniform(0, 1, m) * disk.ys.max()])
        ok = np.ones(m, dtype=bool)
        for k in range(3):
            ok &= in_copies(disk, p, U_try[:, k])
        distinct = (np.abs(off[:, 0] - off[:, 1]).max(axis=1) > 1e-9) & (np.abs(off).max(axis=2).min(axis=1) > 1e-9)
        ok &= distinct
        U[todo[ok]] = U_try[ok]
        P[todo[ok]] = p[ok]
        todo = todo[~ok]
    return U, P


_PERMS = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]


def _chain_check(
    name: str,
    disk: QuarterConvexDisk,
    trials: int,
    seed: int,
    rel: Callable,
    batch: int = 20000,
) -> CheckReport:
    """Count trials where p in rel(1,2) and rel(2,3) but not rel(1,3), over all orderings."""
    rng = np.random.default_rng(seed)
    violations = 0
    witness = None
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        U, P = _random_triples(disk, rng, m)
        bad = np.zeros(m, dtype=bool)
        first = np.full(m, -1)
        for k, (a, b, c) in enumerate(_PERMS):
            r12 = rel(disk, P, U[:, a], U[:, b])
            r23 = rel(disk, P, U[:, b], U[:, c])
            r13 = rel(disk, P, U[:, a], U[:, c])
            v = r12 & r23 & ~r13
            first = np.where(v & ~bad, k, first)
            bad |= v
        violations += int(bad.sum())
        if witness is None and bad.any():
            i = int(np.argmax(bad))
            a, b, c = _PERMS[int(first[i])]
            witness = {
                "disk": disk.to_json()["breakpoints"],
                "u1": U[i, a].tolist(),
                "u2": U[i, b].tolist(),
                "u3": U[i, c].tolist(),
                "p": P[i].tolist(),
            }
        done += m
    return CheckReport(name, trials, violations, witness)


def check_sqcap_chain(disk: QuarterConvexDisk, trials: int, seed: int = 0, sqcap=sqcap_mask) -> CheckReport:
    if trials < 1:
        raise ValueError("trials must be positive")
    return _chain_check("sqcap-chain", disk, trials, seed, sqcap)


def check_cut_chain(disk: QuarterConvexDisk, trials: int, seed: int = 0, sqcap=sqcap_mask) -> CheckReport:
    if trials < 1:
        raise ValueError("trials must be positive")

    def rel(d, P, U1, U2):
        return cut_mask(d, P, U1, U2, sqcap=sqcap)

    return _chain_check("cut-chain", disk, trials, seed, rel)


# ---------------------------------------------------------------------------
# deliberately broken variants, used to show the checks are not vacuous


def swapped_tie_rule(U1, U2):
    return tie_rule(U2, U1)


def sqcap_swapped_tie(disk, P, U1, U2):
    return sqcap_mask(disk, P, U1, U2, tie=swapped_tie_rule)


def sqcap_swapped_orientation(disk, P, U1, U2):
    """Hand over the wrong side whenever the copies sit diagonally (curves cross)."""
    good = sqcap_mask(disk, P, U1, U2)
    d = np.asarray(U2) - np.asarray(U1)
    crossing = d[..., 0] * d[..., 1] < 0
    return np.where(crossing, ~good, good)


def sqcap_loose_tolerance(disk, P, U1, U2, eps: float = 0.1):
    """Treat heights within ``eps`` as equal; "equal" is then not transitive."""
    U1 = np.asarray(U1, dtype=float)
    U2 = np.asarray(U2, dtype=float)
    x = np.asarray(P, dtype=float)[..., 0]
    y1 = curve_heights(disk, U1[..., 0], U1[..., 1], x)
    y2 = curve_heights(disk, U2[..., 0], U2[..., 1], x)
    return (y1 < y2 - eps) | ((np.abs(y1 - y2) <= eps) & tie_rule(U1, U2))


MUTANTS = {
    "swapped-orientation": sqcap_swapped_orientation,
    "loose-tolerance": sqcap_loose_tolerance,
}


# ---------------------------------------------------------------------------
# tie oracle


def tie_inclusion_oracle(disk: QuarterConvexDisk, u1, u2, x: float, resolution: int = 512) -> Optional[bool]:
    """Decide ``K1 ∩ R_x ⊂ K2 ∩ R_x`` (strictly) by sampling, R_x = {x' >= x}.

    Returns None if neither inclusion holds on the samples.
    """
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    lo = np.minimum(u1, u2)
    hi = np.maximum(u1, u2) + np.array([1.0, float(disk.ys.max())])
    gx = np.linspace(max(x, lo[0]), hi[0], resolution)
    gy = np.linspace(lo[1], hi[1], resolution)
    X, Y = np.meshgrid(gx, gy)
    P = np.column_stack([X.ravel(), Y.ravel()])
    a = in_copies(disk, P, u1[None, :], tol=1e-12)
    b = in_copies(disk, P, u2[None, :], tol=1e-12)
    a_in_b = not np.any(a & ~b)
    b_in_a = not np.any(b & ~a)
    if a_in_b and not b_in_a:
        return True
    if b_in_a and not a_in_b:
        return False
    return None


# ---------------------------------------------------------------------------
# A(r) and counting checks


def check_concavity(disk: QuarterConvexDisk, R: int = 6, cfg: Optional[Config] = None) -> CheckReport:
    """A non-decreasing and A(r) + A(r') <= 2 A((r + r') / 2) for even r + r'."""
    A = extend_A(disk, R, cfg)
    vals = A.values
    violations = 0
    witness = None
    trials = 0
    for r in range(R + 1):
        for s in range(r, R + 1):
            if (r + s) % 2:
                continue
            trials += 1
            if vals[r] + vals[s] > 2 * vals[(r + s) // 2] + 1e-6:
                violations += 1
                witness = witness or {"r": r, "r2": s, "values": list(vals)}
    for r in range(R):
        trials += 1
        if vals[r + 1] < vals[r] - 1e-9:
            violations += 1
            witness = witness or {"r": r, "values": list(vals)}
    return CheckReport("concavity", trials, violations, witness, {"values": list(vals)})


def check_counting(disk: QuarterConvexDisk, trials: int, seed: int = 0, resolution: int = 256) -> CheckReport:
    """Decompose random coverings and audit the inequality chain."""
    rng = np.random.default_rng(seed)
    A = extend_A(disk, 4)
    violations = 0
    witness = None
    for t in range(trials):
        l = float(rng.uniform(0.5, 2.0))
        extras = int(rng.integers(0, 11))
        inst = random_covering(disk, l, extras, seed=int(rng.integers(2**31)))
        try:
            cells = decompose_covering(inst)
            audit = audit_decomposition(inst, cells, A if max(c.r_i for c in cells) <= A.R else None, resolution)
            ok = audit.ok
            info = audit.to_json()
        except GeometryError as e:
            ok, info = False, {"error": str(e)}
        if not ok:
            violations += 1
            witness = witness or {"instance": inst.to_json(), "audit": info}
    return CheckReport("counting", trials, violations, witness)
