"""Boundary measurement synthesis, noise, and periodic reflected playback.

A record holds the output samples Y_m = y(m*dt) over one observation
window [0, T], together with two auxiliary streams consumed by the
estimator's second-order boundary predictor:

    ydot   the output rate (flux of the velocity field on the forced
           route; oscillator velocity on the cascade route);
    wflux  the boundary flux of the companion wave field, equal to
           ydot' + omega^2*y (flux of the acceleration field plus
           omega^2*y on the forced route; the oscillator's drive on the
           cascade route).

The estimator consumes the record through a 2T-periodic reflected
playback: forward intervals read Y(t - 2kT), backward intervals read
Y((2k+2)T - t).  The rate stream flips sign on backward intervals; the
other two reflect evenly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np

from .grids import Grid1D, TimeGrid
from .wave import SourceField


@dataclass(frozen=True)
class NoiseSpec:
    """Relative white-noise level (fraction of the clean RMS) and seed."""

    level: float
    seed: int = 0

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("noise level must be non-negative")


@dataclass
class MeasurementRecord:
    Y: np.ndarray
    ydot: np.ndarray
    wflux: np.ndarray
    dt: float
    noise: NoiseSpec | None = None
    source: str = "forced"

    def __post_init__(self):
        self.Y = np.asarray(self.Y, dtype=float)
        self.ydot = np.asarray(self.ydot, dtype=float)
        self.wflux = np.asarray(self.wflux, dtype=float)
        if self.Y.shape != self.ydot.shape or self.Y.shape != self.wflux.shape:
            raise ValueError("Y, ydot, wflux must be 1D arrays of equal length")
        if self.Y.ndim != 1:
            raise ValueError("record streams must be 1D")
        if not np.all(np.isfinite(self.Y)):
            raise ValueError("record contains non-finite samples")

    @property
    def steps(self) -> int:
        return self.Y.size - 1

    @property
    def T(self) -> float:
        return self.steps * self.dt

    @property
    def y0(self) -> float:
        return float(self.Y[0])

    @property
    def ydot0(self) -> float:
        return float(self.ydot[0])

    def copy(self) -> "MeasurementRecord":
        return replace(
            self, Y=self.Y.copy(), ydot=self.ydot.copy(), wflux=self.wflux.copy()
        )


def synthesize_measurement(
    q: SourceField, omega: float, grids: tuple[Grid1D, TimeGrid]
) -> MeasurementRecord:
    """Run the harmonically forced system from rest over [0, T] and record
    the boundary flux of displacement (Y), of velocity (ydot), and the
    derived companion-flux stream ydot' + omega^2*Y."""
    from .backend import kernels

    grid, tg = grids
    if q.n_cells != grid.n_cells:
        raise ValueError("source samples do not match the grid")
    M = tg.steps_per_pass
    w1 = np.zeros(grid.n_nodes)
    w2 = np.zeros(grid.n_nodes)
    scratch = np.zeros(grid.n_nodes)
    Y = np.empty(M + 1)
    D = np.empty(M + 1)
    F = np.empty(M + 1)
    kernels().forced_pass(w1, w2, scratch, q.samples, omega, tg.dt, grid.dx, M, Y, D, F)
    return MeasurementRecord(Y, D, F, tg.dt, noise=None, source="forced")


def synthesize_cascade_record(
    q: SourceField,
    omega: float,
    grids: tuple[Grid1D, TimeGrid],
    estimator_convention: bool = False,
) -> MeasurementRecord:
    """Record the same output through the equivalent playback system: a
    source-free wave field started at (q, 0) driving a harmonic oscillator
    whose position is the output.

    With the default conventions (second-order sensor stencil as the
    oscillator drive) this matches the forced-route record to the scheme's
    discretisation error, which is what the output-equivalence validation
    measures.  With estimator_convention=True the oscillator is driven by
    the same staggered flux the estimator uses internally, making the
    record the exact discrete output of the estimator's truth system; fed
    to the estimator, observer-minus-truth then reproduces the autonomous
    error dynamics to round-off.
    """
    from .backend import kernels

    grid, tg = grids
    if q.n_cells != grid.n_cells:
        raise ValueError("source samples do not match the grid")
    M = tg.steps_per_pass
    w1 = q.samples.copy()
    w2 = np.zeros(grid.n_nodes)
    scratch = np.zeros(grid.n_nodes)
    Y = np.empty(M + 1)
    D = np.empty(M + 1)
    flux = np.empty(M + 1)
    V = np.empty(M + 1)
    zeros = np.zeros(M + 1)
    kernels().coupled_pass(
        w1, w2, scratch,
        0.0, 0.0, 0.0, 0.0,
        1.0, tg.dt, grid.dx,
        0.0, 0.0, omega, False, estimator_convention,
        zeros, zeros, zeros,
        Y, D, flux, V,
    )
    return MeasurementRecord(Y, D, flux, tg.dt, noise=None, source="cascade")


def add_noise(rec: MeasurementRecord, spec: NoiseSpec) -> MeasurementRecord:
    """Perturb the output samples with seeded Gaussian noise of standard
    deviation level*rms(Y).  The auxiliary streams stay clean; they only
    feed O(dt)-weighted predictor terms.  level = 0 returns an equal
    record."""
    if spec.level < 0:
        raise ValueError("noise level must be non-negative")
    if rec.noise is not None:
        raise ValueError("record already carries noise")
    if spec.level == 0:
        return rec.copy()
    rms = float(np.sqrt(np.mean(rec.Y * rec.Y)))
    rng = np.random.default_rng(spec.seed)
    noisy = rec.Y + spec.level * rms * rng.standard_normal(rec.Y.size)
    return MeasurementRecord(
        noisy, rec.ydot.copy(), rec.wflux.copy(), rec.dt, noise=spec, source=rec.source
    )


def playback(rec: MeasurementRecord, step_index_global: int) -> float:
    """Sample the 2T-periodic reflected extension at global node index."""
    i = _reflected_index(rec, step_index_global)
    return float(rec.Y[i])


def playback_rate(rec: MeasurementRecord, step_index_global: int, sigma: float) -> float:
    """Sample the reflected extension of ydot; the sign flips on backward
    intervals, so the consuming pass direction is part of the lookup."""
    i = _reflected_index(rec, step_index_global)
    return float(sigma * rec.ydot[i])


def _reflected_index(rec: MeasurementRecord, step_index_global: int) -> int:
    if step_index_global < 0:
        raise IndexError(f"negative playback index {step_index_global}")
    M = rec.steps
    p = step_index_global % (2 * M)
    return p if p <= M else 2 * M - p


def pass_samples(
    rec: MeasurementRecord, pass_index: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Node samples of (Y, ydot, wflux) along one full pass, plus its
    direction.  Even passes replay the record as stored; odd passes replay
    it reflected, with the rate stream negated (Y and wflux are even under
    the reflection)."""
    if pass_index % 2 == 0:
        return rec.Y.copy(), rec.ydot.copy(), rec.wflux.copy(), 1.0
    return rec.Y[::-1].copy(), -rec.ydot[::-1], rec.wflux[::-1].copy(), -1.0


def running_integral(accumulator: float, rec: MeasurementRecord, step_index_global: int) -> float:
    """Advance the trapezoidal integral of the reflected playback by the
    panel ending at ``step_index_global``.  Must be driven once per step in
    increasing order; see YIntegral for an order-checked wrapper."""
    if step_index_global < 1:
        raise IndexError("integral panels start at step index 1")
    y0 = playback(rec, step_index_global - 1)
    y1 = playback(rec, step_index_global)
    return accumulator + 0.5 * rec.dt * (y0 + y1)


class YIntegral:
    """Order-enforcing accumulator for the playback integral."""

    def __init__(self):
        self.value = 0.0
        self.next_index = 1

    def advance(self, rec: MeasurementRecord, step_index_global: int) -> float:
        if step_index_global != self.next_index:
            raise ValueError(
                f"out-of-order integral update: expected step {self.next_index}, "
                f"got {step_index_global}"
            )
        self.value = running_integral(self.value, rec, step_index_global)
        self.next_index += 1
        return self.value


def format_float(x: float) -> str:
    """Shortest round-trip decimal representation."""
    return repr(float(x))


def write_measurement_csv(rec: MeasurementRecord, path: str) -> None:
    """Write the record as ``t,Y`` rows plus a key=value metadata sidecar."""
    lines = ["t,Y"]
    for m in range(rec.Y.size):
        lines.append(f"{format_float(m * rec.dt)},{format_float(rec.Y[m])}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    meta = [
        f"dt={format_float(rec.dt)}",
        f"T={format_float(rec.T)}",
        f"noise_level={format_float(rec.noise.level) if rec.noise else format_float(0.0)}",
        f"seed={rec.noise.seed if rec.noise else ''}",
        f"provenance={'noisy' if rec.noise else 'clean'}",
    ]
    with open(os.path.splitext(path)[0] + ".meta", "w") as fh:
        fh.write("\n".join(meta) + "\n")
