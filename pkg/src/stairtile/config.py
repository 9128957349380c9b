from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    tolerance: float = 1e-9
    resolution: int = 1024
    restarts: int = 32
    oracle_grid: int = 2000
    seed: int = 0
    oracle_tol: float = 1e-6
    max_sweeps: int = 20000
    refine_step: float = 1e-4

    def __post_init__(self):
        if self.tolerance <= 0 or self.restarts < 1 or self.oracle_grid < 2 or self.max_sweeps < 1:
            raise ValueError("configuration values must be positive")
        if self.resolution < 64:
            raise ValueError("raster resolution must be at least 64")


def worker_count() -> int:
    """Worker cap from STAIRTILE_THREADS (default: cpu count)."""
    env = os.environ.get("STAIRTILE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1
