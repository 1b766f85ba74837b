"""Numba inner loops for the PLL integrator and trajectory classification.

All kernels integrate the PLL state (delta, x_int) with classical RK4 under
one fixed network configuration; switching is orchestrated by callers.
State arguments and coefficients are plain floats so the kernels stay
cache-friendly and deterministic.
"""
import math

from numba import njit

TWO_PI = 2.0 * math.pi


@njit(cache=True)
def _step(delta, xint, a1, t1, qc, ki, kp, dt):
    """One RK4 step; u_cq = a1*sin(t1 - delta) + qc, omega = xint + kp*u_cq."""
    u1 = a1 * math.sin(t1 - delta) + qc
    k1d = xint + kp * u1
    k1x = ki * u1
    u2 = a1 * math.sin(t1 - (delta + 0.5 * dt * k1d)) + qc
    k2d = (xint + 0.5 * dt * k1x) + kp * u2
    k2x = ki * u2
    u3 = a1 * math.sin(t1 - (delta + 0.5 * dt * k2d)) + qc
    k3d = (xint + 0.5 * dt * k2x) + kp * u3
    k3x = ki * u3
    u4 = a1 * math.sin(t1 - (delta + dt * k3d)) + qc
    k4d = (xint + dt * k3x) + kp * u4
    k4x = ki * u4
    return (delta + dt * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0,
            xint + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0)


@njit(cache=True)
def _record(delta, xint, a1, t1, qc, ki, kp, dt, n, out_d, out_x):
    """Fill out_d/out_x with n+1 samples starting at the given state."""
    out_d[0] = delta
    out_x[0] = xint
    for i in range(n):
        delta, xint = _step(delta, xint, a1, t1, qc, ki, kp, dt)
        out_d[i + 1] = delta
        out_x[i + 1] = xint


@njit(cache=True)
def _classify(delta, xint, a1, t1, qc, ki, kp, dt, n_max,
              d_sep, tol_d, tol_w, dwell_n, bound):
    """Integrate until settled near any SEP branch (1), diverged (2), or
    budget exhausted (0); returns (code, steps)."""
    run = 0
    for i in range(n_max):
        delta, xint = _step(delta, xint, a1, t1, qc, ki, kp, dt)
        u = a1 * math.sin(t1 - delta) + qc
        w = xint + kp * u
        if abs(w) > bound:
            return 2, i + 1
        k = round((delta - d_sep) / TWO_PI)
        if abs(delta - d_sep - TWO_PI * k) < tol_d and abs(w) < tol_w:
            run += 1
            if run >= dwell_n:
                return 1, i + 1
        else:
            run = 0
    return 0, n_max


@njit(cache=True)
def _until_voltage(delta, xint, a1, t1, qc, dcst, ki, kp, dt, n_max, vthr):
    """Integrate until |U_c| >= vthr, checking every sample incl. the start.

    Returns (found, steps, delta, omega) at the qualifying sample, or
    (0, n_max, delta, omega) when the window ends below the threshold.
    """
    for i in range(n_max + 1):
        u_q = a1 * math.sin(t1 - delta) + qc
        u_d = a1 * math.cos(t1 - delta) + dcst
        if math.hypot(u_d, u_q) >= vthr:
            w = xint + kp * u_q
            return 1, i, delta, w
        if i == n_max:
            break
        delta, xint = _step(delta, xint, a1, t1, qc, ki, kp, dt)
    u_q = a1 * math.sin(t1 - delta) + qc
    return 0, n_max, delta, xint + kp * u_q
