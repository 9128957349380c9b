"""Lattice covering density and raster verification of coverings and tilings.

The optimal lattice covering by K comes from the largest one-step stair S
inside K: S tiles the plane under a lattice L', and since S lies in K, K + L'
is a covering with density |K| / |S| = |K| / A(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import Config
from .disk import QuarterConvexDisk
from .errors import DegenerateLattice
from .inscribe import max_stair_area
from .raster import coverage_counts, histogram, polygon_multiplicity
from .stair import StairPolygon, build_stair, stair_lattice

EQUALITY_TOL = 1e-4
FARY_TOL = 1e-6


@dataclass(frozen=True)
class Lattice:
    v1: tuple[float, float]
    v2: tuple[float, float]

    def __post_init__(self):
        if abs(self.det) <= 1e-15:
            raise DegenerateLattice(f"basis {self.v1}, {self.v2} is singular")

    @property
    def basis(self) -> np.ndarray:
        return np.array([self.v1, self.v2], dtype=float).T

    @property
    def det(self) -> float:
        return float(self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0])

    def points_within(self, radius: float) -> np.ndarray:
        """All lattice points v with |v| <= radius."""
        inv = np.linalg.inv(self.basis)
        # |coefficient k| <= radius * |row k of B^-1|
        bounds = np.ceil(radius * np.linalg.norm(inv, axis=1)).astype(int)
        a = np.arange(-bounds[0], bounds[0] + 1)
        b = np.arange(-bounds[1], bounds[1] + 1)
        A, B = np.meshgrid(a, b, indexing="ij")
        pts = np.column_stack([A.ravel(), B.ravel()]) @ self.basis.T
        return pts[np.linalg.norm(pts, axis=1) <= radius + 1e-12]

    def to_json(self) -> dict:
        return {"v1": list(self.v1), "v2": list(self.v2), "det": self.det}


@dataclass(frozen=True)
class DensityReport:
    theta_L: float
    A1: float
    stair: StairPolygon
    lattice: Lattice
    disk_area: float
    xs: tuple[float, ...] = ()

    def to_json(self) -> dict:
        return {
            "theta_L": self.theta_L,
            "A1": self.A1,
            "disk_area": self.disk_area,
            "xs": list(self.xs),
            "stair": self.stair.to_json(),
            "lattice": self.lattice.to_json(),
        }


@dataclass(frozen=True)
class CoverageReport:
    samples: int
    covered: int
    histogram: dict
    window_l: float
    boundary_excused: int = 0
    off_boundary_bad: int = 0

    @property
    def coverage_fraction(self) -> float:
        return self.covered / self.samples

    @property
    def single_fraction(self) -> float:
        return self.histogram.get(1, 0) / self.samples

    @property
    def is_tiling(self) -> bool:
        return self.single_fraction >= 0.999 and self.off_boundary_bad == 0

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "covered": self.covered,
            "coverage_fraction": self.coverage_fraction,
            "histogram": {str(k): v for k, v in self.histogram.items()},
            "window_l": self.window_l,
            "single_fraction": self.single_fraction,
            "boundary_excused": self.boundary_excused,
            "off_boundary_bad": self.off_boundary_bad,
        }


def lattice_covering_density(disk: QuarterConvexDisk, cfg: Optional[Config] = None) -> DensityReport:
    res = max_stair_area(disk, 1, cfg)
    stair = build_stair(disk, res.xs)
    v1, v2 = stair_lattice(stair)
    lat = Lattice(v1, v2)
    return DensityReport(disk.area / res.value, res.value, stair, lat, disk.area, res.xs)


def _translates_for_window(lattice: Lattice, l: float, bbox, reach: float) -> np.ndarray:
    pts = lattice.points_within(math.sqrt(2.0) * l + reach)
    x0, x1, y0, y1 = bbox
    keep = (pts[:, 0] + x0 <= l) & (pts[:, 0] + x1 >= -l) & (pts[:, 1] + y0 <= l) & (pts[:, 1] + y1 >= -l)
    return pts[keep]


def verify_lattice_covering(
    disk: QuarterConvexDisk, lattice: Lattice, window_l: float, resolution: int = 512
) -> CoverageReport:
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    pts = _translates_for_window(lattice, window_l, (0.0, 1.0, 0.0, 1.0), math.sqrt(2.0))
    counts = coverage_counts(disk, pts, window_l, resolution)
    return CoverageReport(
        samples=counts.size,
        covered=int(np.count_nonzero(counts)),
        histogram=histogram(counts),
        window_l=window_l,
    )


def verify_lattice_tiling(
    stair: StairPolygon, lattice: Lattice, window_l: float, resolution: int = 512
) -> CoverageReport:
    """Multiplicity of the translates S + v over the window.

    A sample with multiplicity other than 1 is excused when it sits within one
    pixel of some translate's boundary.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    v = np.asarray(stair.vertices, dtype=float)
    bbox = (v[:, 0].min(), v[:, 0].max(), v[:, 1].min(), v[:, 1].max())
    reach = float(np.max(np.linalg.norm(v, axis=1)))
    pts = _translates_for_window(lattice, window_l, bbox, reach)
    polys = [v + p for p in pts]
    counts, edge = polygon_multiplicity(polys, window_l, resolution, edges=True)
    bad = counts != 1
    return CoverageReport(
        samples=counts.size,
        covered=int(np.count_nonzero(counts)),
        histogram=histogram(counts),
        window_l=window_l,
        boundary_excused=int(np.count_nonzero(bad & edge)),
        off_boundary_bad=int(np.count_nonzero(bad & ~edge)),
    )


@dataclass(frozen=True)
class FaryCheck:
    ok: bool
    equality: bool
    theta_L: float

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "equality": self.equality, "theta_L": self.theta_L}


def fary_bound_check(disk: QuarterConvexDisk, cfg: Optional[Config] = None) -> FaryCheck:
    theta = lattice_covering_density(disk, cfg).theta_L
    return FaryCheck(
        ok=1.0 - FARY_TOL <= theta <= 1.5 + FARY_TOL,
        equality=abs(theta - 1.5) <= EQUALITY_TOL,
        theta_L=theta,
    )
