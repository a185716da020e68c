"""Uniform space/time grids for the unit-interval wave solver."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    """Uniform nodes x_j = j*dx on [0, 1], j = 0..n_cells."""

    n_cells: int

    @property
    def dx(self) -> float:
        return 1.0 / self.n_cells

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n_cells + 1) / self.n_cells


@dataclass(frozen=True)
class TimeGrid:
    """Fixed time step over one observation pass of length T = steps_per_pass*dt."""

    dt: float
    steps_per_pass: int

    @property
    def T(self) -> float:
        return self.steps_per_pass * self.dt

    def cfl(self, grid: Grid1D) -> float:
        return self.dt / grid.dx


def make_grids(n_cells: int, T: float, cfl: float) -> tuple[Grid1D, TimeGrid]:
    """Build matching space/time grids.

    dt starts from cfl*dx and is shrunk minimally so that an integer number
    of steps lands exactly on T (pass boundaries must coincide with grid
    points of the measurement record).
    """
    if n_cells < 4:
        raise ValueError(f"n_cells must be >= 4, got {n_cells}")
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")

    grid = Grid1D(n_cells)
    dt_target = cfl * grid.dx
    ratio = T / dt_target
    # Tolerate float noise when T/dt_target is already an integer.
    steps = math.ceil(ratio * (1.0 - 1e-12))
    dt = T / steps
    return grid, TimeGrid(dt=dt, steps_per_pass=steps)
