"""numba-compiled scalar-loop twins of the numpy pass kernels.

Expression trees match _kernels_numpy element for element, so both
backends produce bit-identical trajectories (tests pin this).  Only the
recorded energy reductions may differ in the last bits, since numpy sums
pairwise while these loops sum sequentially.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _flux(w: np.ndarray, inv_2dx: float) -> float:
    return (-3.0 * w[0] + 4.0 * w[1] - w[2]) * inv_2dx


@njit(cache=True)
def _energy(
    w1: np.ndarray, w2: np.ndarray, z1: float, z2: float,
    gamma1: float, om2: float, dx: float,
) -> float:
    sem = 0.0
    for j in range(w1.size - 1):
        d = w1[j + 1] - w1[j]
        sem += d * d
    sem = sem / dx
    vel = 0.0
    for j in range(w2.size):
        vel += w2[j] * w2[j]
    vel = dx * (vel - w2[0] * w2[0] - 0.5 * w2[-1] * w2[-1])
    return 0.5 * (sem + vel + gamma1 * (om2 * z1 * z1 + z2 * z2))


@njit(cache=True)
def _osc_core(z1, z2, z3, sigma, dt, om2, g2, y_sum, f_sum):
    a = 0.5 * dt * g2
    s = 0.5 * dt * sigma
    r1 = (1.0 - a) * z1 + s * z2 + 0.5 * dt * g2 * y_sum
    r2 = z2 - s * om2 * z1 + s * f_sum
    det = 1.0 + a + s * s * om2
    z1n = (r1 + s * r2) / det
    z2n = ((1.0 + a) * r2 - s * om2 * r1) / det
    z3n = z3 + 0.5 * dt * (z1 + z1n)
    return z1n, z2n, z3n


@njit(cache=True)
def forced_pass(w1, w2, scratch, q, omega, dt, dx, M, y_out, d_out):
    n = w1.size - 1
    inv_dx2 = 1.0 / (dx * dx)
    inv_2dx = 0.5 / dx
    half_dt2 = 0.5 * dt * dt
    half_dt = 0.5 * dt
    lap = np.empty(n - 1)

    y_out[0] = _flux(w1, inv_2dx)
    d_out[0] = _flux(w2, inv_2dx)
    t = 0.0
    for m in range(M):
        c0 = math.cos(omega * t)
        t = t + dt
        c1 = math.cos(omega * t)
        for j in range(1, n):
            lap[j - 1] = (w1[j - 1] - 2.0 * w1[j] + w1[j + 1]) * inv_dx2 + q[j] * c0
        for j in range(1, n):
            scratch[j] = w1[j] + dt * w2[j] + half_dt2 * lap[j - 1]
        scratch[0] = 0.0
        scratch[n] = 0.0
        for j in range(1, n):
            acc1 = (scratch[j - 1] - 2.0 * scratch[j] + scratch[j + 1]) * inv_dx2 + q[j] * c1
            w2[j] = w2[j] + half_dt * (lap[j - 1] + acc1)
        w2[0] = 0.0
        w2[n] = 0.0
        for j in range(n + 1):
            w1[j] = scratch[j]
        y_out[m + 1] = _flux(w1, inv_2dx)
        d_out[m + 1] = _flux(w2, inv_2dx)


@njit(cache=True)
def coupled_pass(
    w1, w2, scratch,
    z1, z2, z3, integ,
    sigma, dt, dx,
    gamma1, gamma2, omega, estimator_form, sbp_drive,
    y_nodes, d_nodes,
    z1_out, z2_out, flux_out, v_out,
):
    M = y_nodes.size - 1
    n = w1.size - 1
    inv_dx2 = 1.0 / (dx * dx)
    inv_2dx = 0.5 / dx
    inv_dx = 1.0 / dx
    dts = sigma * dt
    half_dt2 = 0.5 * dt * dt
    half_dts = 0.5 * dts
    om2 = omega * omega
    g2 = gamma2 if estimator_form else 0.0
    lap = np.empty(n - 1)

    f0 = (w1[1] - w1[0]) * inv_dx if sbp_drive else _flux(w1, inv_2dx)
    z1_out[0] = z1
    z2_out[0] = z2
    flux_out[0] = _flux(w1, inv_2dx)
    v_out[0] = _energy(w1, w2, z1, z2, gamma1, om2, dx)

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

        for j in range(1, n):
            lap[j - 1] = (w1[j - 1] - 2.0 * w1[j] + w1[j + 1]) * inv_dx2
        for j in range(1, n):
            scratch[j] = w1[j] + dts * w2[j] + half_dt2 * lap[j - 1]
        scratch[0] = g_next
        scratch[n] = 0.0
        for j in range(1, n):
            lapn = (scratch[j - 1] - 2.0 * scratch[j] + scratch[j + 1]) * inv_dx2
            w2[j] = w2[j] + half_dts * (lap[j - 1] + lapn)
        w2[0] = (g_next - g_cur) / dts
        w2[n] = 0.0
        for j in range(n + 1):
            w1[j] = scratch[j]

        f1 = (w1[1] - w1[0]) * inv_dx if sbp_drive else _flux(w1, inv_2dx)
        z1, z2, z3 = _osc_core(z1, z2, z3, sigma, dt, om2, g2, y0 + y1, f0 + f1)
        integ = integ + 0.5 * dt * (y0 + y1)
        f0 = f1

        z1_out[m + 1] = z1
        z2_out[m + 1] = z2
        flux_out[m + 1] = _flux(w1, inv_2dx)
        v_out[m + 1] = _energy(w1, w2, z1, z2, gamma1, om2, dx)

    return z1, z2, z3, integ
