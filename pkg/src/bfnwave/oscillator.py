"""Time integration of the cascade and observer oscillators.

The oscillator states are advanced with the trapezoidal rule.  For this
linear system the implicit step is a constant 2x2 solve done in closed
form, so the cost is that of an explicit method while the update is
symmetric (forward and reversed passes invert each other to round-off)
and second order.  Inputs enter as averages of the two endpoint samples,
i.e. the wave-field drive is the linear midpoint interpolation of
consecutive boundary fluxes; no internal stage values are needed, which
is what lets the observer-minus-truth difference reproduce the error
dynamics identically at the discrete level.

The integrator state z3 accumulates z1 by the matching trapezoidal
quadrature, in physical time regardless of the pass direction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .wave import StepDirection


@dataclass
class OscillatorState:
    """Position z1, velocity z2, running integral z3 of z1, and time."""

    z1: float
    z2: float
    z3: float = 0.0
    t: float = 0.0

    def copy(self) -> "OscillatorState":
        return OscillatorState(self.z1, self.z2, self.z3, self.t)


@dataclass(frozen=True)
class ObserverGains:
    """Injection gains.  The convergence argument needs both strictly
    positive; zero is accepted so degenerate behaviour can be probed."""

    gamma1: float
    gamma2: float

    def __post_init__(self):
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("observer gains must be non-negative")


def trapezoid_osc_core(
    z1: float,
    z2: float,
    z3: float,
    sigma: float,
    dt: float,
    om2: float,
    g2: float,
    y_sum: float,
    f_sum: float,
) -> tuple[float, float, float]:
    """Closed-form trapezoidal step of

        z1' = sigma*z2 - g2*z1 + g2*Y(t)
        z2' = -sigma*om2*z1 + sigma*f(t)
        z3' = z1

    where ``y_sum``/``f_sum`` are the sums of the two endpoint samples of
    Y and f.  Setting g2 = 0 gives the plain cascade oscillator.
    """
    a = 0.5 * dt * g2
    s = 0.5 * dt * sigma
    r1 = (1.0 - a) * z1 + s * z2 + 0.5 * dt * g2 * y_sum
    r2 = z2 - s * om2 * z1 + s * f_sum
    det = 1.0 + a + s * s * om2
    z1n = (r1 + s * r2) / det
    z2n = ((1.0 + a) * r2 - s * om2 * r1) / det
    z3n = z3 + 0.5 * dt * (z1 + z1n)
    return z1n, z2n, z3n


def cascade_osc_step(
    z: OscillatorState,
    drive: float,
    omega: float,
    direction: StepDirection,
    dt: float,
) -> OscillatorState:
    """One step of the harmonic oscillator driven by the wave boundary flux.

    ``drive`` is the half-step (midpoint-interpolated) value of the flux,
    i.e. the average of the fluxes at the two step endpoints.
    """
    z1, z2, z3 = trapezoid_osc_core(
        z.z1, z.z2, z.z3, direction.sign, dt, omega * omega, 0.0, 0.0, 2.0 * drive
    )
    return OscillatorState(z1, z2, z3, z.t + dt)


def observer_osc_step(
    zhat: OscillatorState,
    drive: float,
    Y_now: float,
    gains: ObserverGains,
    omega: float,
    direction: StepDirection,
    dt: float,
) -> OscillatorState:
    """One step of the nudged oscillator.

    The nudging term -gamma2*(z1 - Y) keeps its sign in both directions;
    ``Y_now`` and ``drive`` are the half-step values of the reflected
    playback signal and of the observer wave's boundary flux.
    """
    z1, z2, z3 = trapezoid_osc_core(
        zhat.z1,
        zhat.z2,
        zhat.z3,
        direction.sign,
        dt,
        omega * omega,
        gains.gamma2,
        2.0 * Y_now,
        2.0 * drive,
    )
    return OscillatorState(z1, z2, z3, zhat.t + dt)


def init_truth_oscillator(y0: float, ydot0: float) -> OscillatorState:
    """Initial oscillator state matching the measured output and its rate.

    For measurements produced by the at-rest forced system both are zero.
    """
    return OscillatorState(float(y0), float(ydot0), 0.0, 0.0)
