"""Explicit stepping kernels for the 1D wave equation on (0, 1).

All systems share one interior update: the velocity-Verlet form of the
three-level leapfrog scheme

    w1 <- w1 + dt*w2 + dt^2/2 * (D2 w1 + f)
    w2 <- w2 + dt/2 * (D2 w1_old + f_old + D2 w1_new + f_new)

with D2 the standard second difference.  The two forms are algebraically
identical; the (w1, w2) form is self-starting and makes the exact time
reversibility of the scheme explicit: stepping with -dt inverts the map up
to round-off.  Reversed-dynamics systems (w1_t = -w2, w2_t = -w1_xx) are
therefore advanced by the same update with a signed step.

Boundary handling: the right end is clamped to zero.  The left end is
either clamped (forced/free systems) or carries an injected Dirichlet
value; the interior is updated first, then the new boundary value is
written, and the boundary velocity is kept as the discrete time
derivative of the injected trace.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .grids import Grid1D, TimeGrid


class StepDirection(enum.Enum):
    """Orientation of the pass: FORWARD runs the plain dynamics, BACKWARD
    the sign-reversed dynamics (physical time still advances)."""

    FORWARD = 1
    BACKWARD = -1

    @property
    def sign(self) -> float:
        return float(self.value)


@dataclass
class SourceField:
    """Spatial samples of the source profile q on the grid nodes.

    q must vanish at both endpoints (homogeneous Dirichlet data).
    """

    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size < 5:
            raise ValueError("source needs >= 5 node samples on one axis")
        scale = float(np.max(np.abs(self.samples))) or 1.0
        if abs(self.samples[0]) > 1e-12 * scale or abs(self.samples[-1]) > 1e-12 * scale:
            raise ValueError("source samples must vanish at x=0 and x=1")
        # Snap float noise at the endpoints so boundary values are exact.
        self.samples[0] = 0.0
        self.samples[-1] = 0.0

    @property
    def n_cells(self) -> int:
        return self.samples.size - 1


def source_preset(spec: str, grid: Grid1D) -> SourceField:
    """Build a source profile from a preset string.

    Supported: ``poly`` (x - x^2), ``mode:k`` (sin(k*pi*x)), ``file:path``
    (one node sample per line, length n_cells + 1).
    """
    x = grid.nodes
    if spec == "poly":
        q = x - x * x
    elif spec.startswith("mode:"):
        k = int(spec.split(":", 1)[1])
        if k < 1:
            raise ValueError(f"mode index must be >= 1, got {k}")
        q = np.sin(k * np.pi * x)
        q[0] = 0.0
        q[-1] = 0.0
    elif spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        q = np.loadtxt(path, dtype=float, ndmin=1)
        if q.size != grid.n_nodes:
            raise ValueError(
                f"source file has {q.size} samples, grid needs {grid.n_nodes}"
            )
    else:
        raise ValueError(f"unknown source preset {spec!r}")
    return SourceField(q)


@dataclass
class WaveFieldState:
    """Displacement/velocity node samples at one time level."""

    w1: np.ndarray
    w2: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.w1 = np.asarray(self.w1, dtype=float)
        self.w2 = np.asarray(self.w2, dtype=float)
        if self.w1.shape != self.w2.shape or self.w1.ndim != 1:
            raise ValueError("w1 and w2 must be 1D arrays of equal length")

    @classmethod
    def zero(cls, grid: Grid1D, t: float = 0.0) -> "WaveFieldState":
        return cls(np.zeros(grid.n_nodes), np.zeros(grid.n_nodes), t)

    @classmethod
    def from_source(cls, q: SourceField, t: float = 0.0) -> "WaveFieldState":
        """At-rest state with displacement q (initial datum of the playback
        system whose forward/backward cycles return to it exactly)."""
        return cls(q.samples.copy(), np.zeros_like(q.samples), t)

    def copy(self) -> "WaveFieldState":
        return WaveFieldState(self.w1.copy(), self.w2.copy(), self.t)


def _interior_second_difference(w1: np.ndarray, inv_dx2: float) -> np.ndarray:
    return (w1[:-2] - 2.0 * w1[1:-1] + w1[2:]) * inv_dx2


def forced_wave_step(
    state: WaveFieldState,
    q: SourceField,
    omega: float,
    grids: tuple[Grid1D, TimeGrid],
) -> WaveFieldState:
    """One forward step of w_tt - w_xx = q(x) cos(omega t), clamped ends."""
    grid, tg = grids
    dt = tg.dt
    inv_dx2 = 1.0 / (grid.dx * grid.dx)
    half_dt2 = 0.5 * dt * dt
    half_dt = 0.5 * dt

    w1, w2, t = state.w1, state.w2, state.t
    qi = q.samples[1:-1]
    c0 = math.cos(omega * t)
    c1 = math.cos(omega * (t + dt))

    acc0 = _interior_second_difference(w1, inv_dx2) + qi * c0
    w1n = np.zeros_like(w1)
    w1n[1:-1] = w1[1:-1] + dt * w2[1:-1] + half_dt2 * acc0
    acc1 = _interior_second_difference(w1n, inv_dx2) + qi * c1
    w2n = np.zeros_like(w2)
    w2n[1:-1] = w2[1:-1] + half_dt * (acc0 + acc1)
    return WaveFieldState(w1n, w2n, t + dt)


def homogeneous_wave_step(
    state: WaveFieldState,
    left_boundary_value: float,
    direction: StepDirection,
    grids: tuple[Grid1D, TimeGrid],
) -> WaveFieldState:
    """One step of the source-free system in the given direction.

    ``left_boundary_value`` is the injected Dirichlet value at x=0 for the
    new time level; the right end stays clamped.  The boundary velocity is
    maintained as the discrete time derivative of the injected trace.
    """
    grid, tg = grids
    dt = tg.dt
    dts = direction.sign * dt
    inv_dx2 = 1.0 / (grid.dx * grid.dx)
    half_dt2 = 0.5 * dt * dt
    half_dts = 0.5 * dts

    w1, w2 = state.w1, state.w2
    lap = _interior_second_difference(w1, inv_dx2)
    w1n = np.empty_like(w1)
    w1n[1:-1] = w1[1:-1] + dts * w2[1:-1] + half_dt2 * lap
    w1n[0] = left_boundary_value
    w1n[-1] = 0.0
    lapn = _interior_second_difference(w1n, inv_dx2)
    w2n = np.empty_like(w2)
    w2n[1:-1] = w2[1:-1] + half_dts * (lap + lapn)
    w2n[0] = (left_boundary_value - w1[0]) / dts
    w2n[-1] = 0.0
    return WaveFieldState(w1n, w2n, state.t + dt)


def boundary_flux(state: WaveFieldState, grid: Grid1D) -> float:
    """Second-order one-sided spatial derivative of w1 at x=0.

    Exact on polynomials of degree <= 2; this is the simulated sensor.
    """
    w1 = state.w1
    if w1.size < 3:
        raise ValueError("boundary flux needs at least 3 node samples")
    return float((-3.0 * w1[0] + 4.0 * w1[1] - w1[2]) * (0.5 / grid.dx))


def flux_of_samples(w: np.ndarray, dx: float) -> float:
    """boundary_flux applied to a bare sample array."""
    return float((-3.0 * w[0] + 4.0 * w[1] - w[2]) * (0.5 / dx))
