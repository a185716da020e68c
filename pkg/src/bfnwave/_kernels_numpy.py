"""Vectorised numpy implementations of the per-pass stepping loops.

This is the fallback backend; the numba backend implements the same
arithmetic with scalar loops.  The stepping expressions are written with
identical expression trees in both so trajectories agree bit for bit
(only the recorded energy values involve reductions, whose summation
order may differ in the last bits).
"""

from __future__ import annotations

import math

import numpy as np

from .oscillator import trapezoid_osc_core


def scheme_energy(
    w1: np.ndarray, w2: np.ndarray, z1: float, z2: float,
    gamma1: float, om2: float, dx: float,
) -> float:
    """Discrete energy 1/2(|w1_x|^2 + |w2|^2 + g1*om2*z1^2 + g1*z2^2).

    The seminorm uses the staggered first differences (the summation-by-
    parts partner of the interior stencil) and the velocity norm the
    trapezoid weights over the evolved nodes 1..n (the injected node 0
    carries trace bookkeeping, not evolved state).  With the staggered
    drive flux these are the forms the stepping transports exactly; see
    diagnostics.lyapunov.
    """
    d = np.diff(w1)
    sem = np.dot(d, d) / dx
    vel = dx * (np.dot(w2, w2) - w2[0] * w2[0] - 0.5 * w2[-1] * w2[-1])
    return 0.5 * (sem + vel + gamma1 * (om2 * z1 * z1 + z2 * z2))


def forced_pass(
    w1: np.ndarray,
    w2: np.ndarray,
    scratch: np.ndarray,
    q: np.ndarray,
    omega: float,
    dt: float,
    dx: float,
    M: int,
    y_out: np.ndarray,
    d_out: np.ndarray,
    f_out: np.ndarray,
) -> None:
    """Advance the forced system M steps from t=0, recording the boundary
    flux of displacement (y_out), of velocity (d_out), and the companion
    stream flux(acceleration) + omega^2*y (f_out) at every level."""
    inv_dx2 = 1.0 / (dx * dx)
    inv_2dx = 0.5 / dx
    half_dt2 = 0.5 * dt * dt
    half_dt = 0.5 * dt
    om2 = omega * omega
    qi = q[1:-1]

    def record(m, c):
        y_out[m] = (-3.0 * w1[0] + 4.0 * w1[1] - w1[2]) * inv_2dx
        d_out[m] = (-3.0 * w2[0] + 4.0 * w2[1] - w2[2]) * inv_2dx
        a1 = (w1[0] - 2.0 * w1[1] + w1[2]) * inv_dx2 + q[1] * c
        a2 = (w1[1] - 2.0 * w1[2] + w1[3]) * inv_dx2 + q[2] * c
        f_out[m] = (4.0 * a1 - a2) * inv_2dx + om2 * y_out[m]

    t = 0.0
    record(0, 1.0)
    for m in range(M):
        c0 = math.cos(omega * t)
        t = t + dt
        c1 = math.cos(omega * t)
        acc0 = (w1[:-2] - 2.0 * w1[1:-1] + w1[2:]) * inv_dx2 + qi * c0
        scratch[1:-1] = w1[1:-1] + dt * w2[1:-1] + half_dt2 * acc0
        scratch[0] = 0.0
        scratch[-1] = 0.0
        acc1 = (scratch[:-2] - 2.0 * scratch[1:-1] + scratch[2:]) * inv_dx2 + qi * c1
        w2[1:-1] = w2[1:-1] + half_dt * (acc0 + acc1)
        w2[0] = 0.0
        w2[-1] = 0.0
        w1[:] = scratch
        record(m + 1, c1)


def coupled_pass(
    w1: np.ndarray,
    w2: np.ndarray,
    scratch: np.ndarray,
    z1: float,
    z2: float,
    z3: float,
    integ: float,
    sigma: float,
    dt: float,
    dx: float,
    gamma1: float,
    gamma2: float,
    omega: float,
    estimator_form: bool,
    sbp_drive: bool,
    y_nodes: np.ndarray,
    d_nodes: np.ndarray,
    z1_out: np.ndarray,
    z2_out: np.ndarray,
    flux_out: np.ndarray,
    v_out: np.ndarray,
) -> tuple[float, float, float, float]:
    """Advance one full coupled wave/oscillator pass of M = len(y_nodes)-1
    steps in direction sigma, in place.

    estimator_form=True runs the injected system: the left boundary value
    for the next level is predicted from the current oscillator state and
    the playback samples, and the oscillator carries the nudging term.
    With all-zero playback this is exactly the autonomous error system.
    estimator_form=False runs the plain clamped system (the truth).

    sbp_drive selects the oscillator drive stencil: True feeds the
    staggered difference (w1[1]-w1[0])/dx whose boundary work is exactly
    what the discrete energy exchanges (the estimator family uses this so
    the decrease certificate holds to time-discretisation error); False
    feeds the second-order sensor stencil (used when mimicking the
    continuous cascade as accurately as possible).  The recorded flux
    column is always the sensor stencil.

    Records per-level z1, z2, boundary flux, and discrete energy; returns
    the updated (z1, z2, z3, integral-of-playback).
    """
    M = y_nodes.size - 1
    inv_dx2 = 1.0 / (dx * dx)
    inv_2dx = 0.5 / dx
    inv_dx = 1.0 / dx
    dts = sigma * dt
    half_dt2 = 0.5 * dt * dt
    half_dts = 0.5 * dts
    om2 = omega * omega
    g2 = gamma2 if estimator_form else 0.0

    f0 = (w1[1] - w1[0]) * inv_dx if sbp_drive else (
        -3.0 * w1[0] + 4.0 * w1[1] - w1[2]
    ) * inv_2dx
    z1_out[0] = z1
    z2_out[0] = z2
    flux_out[0] = (-3.0 * w1[0] + 4.0 * w1[1] - w1[2]) * inv_2dx
    v_out[0] = scheme_energy(w1, w2, z1, z2, gamma1, om2, dx)

    for m in range(M):
        y0 = y_nodes[m]
        y1 = y_nodes[m + 1]
        if estimator_form:
            z1p = z1 + dt * (sigma * z2 - gamma2 * (z1 - y0))
            z3p = z3 + dt * z1
            yp = y0 + dt * d_nodes[m]
            ip = integ + dt * y0
            g_next = gamma1 * ((z1p - yp) + gamma2 * (z3p - ip))
        else:
            g_next = 0.0
        g_cur = w1[0]

        lap = (w1[:-2] - 2.0 * w1[1:-1] + w1[2:]) * inv_dx2
        scratch[1:-1] = w1[1:-1] + dts * w2[1:-1] + half_dt2 * lap
        scratch[0] = g_next
        scratch[-1] = 0.0
        lapn = (scratch[:-2] - 2.0 * scratch[1:-1] + scratch[2:]) * inv_dx2
        w2[1:-1] = w2[1:-1] + half_dts * (lap + lapn)
        w2[0] = (g_next - g_cur) / dts
        w2[-1] = 0.0
        w1[:] = scratch

        f1 = (w1[1] - w1[0]) * inv_dx if sbp_drive else (
            -3.0 * w1[0] + 4.0 * w1[1] - w1[2]
        ) * inv_2dx
        z1, z2, z3 = trapezoid_osc_core(
            z1, z2, z3, sigma, dt, om2, g2, y0 + y1, f0 + f1
        )
        integ = integ + 0.5 * dt * (y0 + y1)
        f0 = f1

        z1_out[m + 1] = z1
        z2_out[m + 1] = z2
        flux_out[m + 1] = (-3.0 * w1[0] + 4.0 * w1[1] - w1[2]) * inv_2dx
        v_out[m + 1] = scheme_energy(w1, w2, z1, z2, gamma1, om2, dx)

    return z1, z2, z3, integ
