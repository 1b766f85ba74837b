"""Switched simulation of the PLL dynamics, trajectory classification,
real CCT by scan plus bisection, and the point-stability oracle."""
import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._kernels import TWO_PI, _classify, _record, _step, _until_voltage
from .circuit import (CircuitParams, equilibria, network_equivalents,
                      swing_params)
from .errors import NumericalFailureError


@dataclass(frozen=True)
class PllState:
    """Integrated PLL state; omega is derived from it, never stored."""

    delta: float
    x_int: float

    def __post_init__(self):
        if not (math.isfinite(self.delta) and math.isfinite(self.x_int)):
            raise ValueError("state must be finite")


@dataclass(frozen=True)
class ReducedState:
    delta: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.delta) and math.isfinite(self.omega)):
            raise ValueError("state must be finite")


@dataclass(frozen=True)
class Scenario:
    """One fault experiment: timing, step, and classification thresholds."""

    params: CircuitParams = field(default_factory=CircuitParams)
    t_fault: float = 0.2
    t_clear: float = 0.4235
    t_end: float = 8.0
    dt: float = 1e-4
    omega_divergence_bound: float = 200.0
    settle_tol: tuple = (1e-3, 1e-2)
    settle_dwell: float = 0.5
    lvrt_exit_voltage: float = 0.9

    def __post_init__(self):
        if not 0 <= self.t_fault <= self.t_clear <= self.t_end:
            raise ValueError("need 0 <= t_fault <= t_clear <= t_end")
        if self.dt <= 0:
            raise ValueError("dt must be positive")


@dataclass(frozen=True)
class Verdict:
    kind: str
    branch_k: Optional[int] = None

    def __str__(self):
        if self.kind == "stable" and self.branch_k is not None:
            return f"stable({self.branch_k})"
        return self.kind


@dataclass
class TrajectoryRecord:
    """Sampled run: columns t, delta, omega, u_cq, u_c_mag."""

    samples: np.ndarray
    events: list
    verdict: Verdict


def u_cq(delta, ne, p):
    """q-axis PCC voltage at a PLL angle delta."""
    return (ne.z_eq1 * p.u_g * math.sin(ne.theta1 - delta)
            + ne.z_eq2 * p.i_c * math.sin(ne.theta2 + p.phi_i))


def u_c_mag(delta, ne, p):
    """PCC voltage magnitude at a PLL angle delta."""
    u_d = (ne.z_eq1 * p.u_g * math.cos(ne.theta1 - delta)
           + ne.z_eq2 * p.i_c * math.cos(ne.theta2 + p.phi_i))
    return math.hypot(u_d, u_cq(delta, ne, p))


def rhs(state, sp):
    """Reduced vector field (d delta/dt, d omega/dt)."""
    s = math.sin(state.delta - sp.theta1)
    c = math.cos(state.delta - sp.theta1)
    return (state.omega, sp.p_m - sp.p_e * s - sp.d_c * c * state.omega)


def _kern_args(ne, p):
    """(a1, t1, qc) for the integrator kernels."""
    a1 = ne.z_eq1 * p.u_g
    qc = ne.z_eq2 * p.i_c * math.sin(ne.theta2 + p.phi_i)
    return a1, ne.theta1, qc


def _dcst(ne, p):
    return ne.z_eq2 * p.i_c * math.cos(ne.theta2 + p.phi_i)


def _segment(state, ne, p, dt, t0, t1):
    """Integrate [t0, t1] under one network configuration.

    Uniform dt steps plus one shortened step to land exactly on t1, so
    switching instants are hit without interpolation.  Returns
    (times, deltas, x_ints) including the sample at t0.
    """
    span = t1 - t0
    n_full = int(math.floor(span / dt + 1e-9))
    rem = span - n_full * dt
    a1, th1, qc = _kern_args(ne, p)
    d = np.empty(n_full + 1)
    x = np.empty(n_full + 1)
    _record(state.delta, state.x_int, a1, th1, qc, p.k_i, p.k_p, dt,
            n_full, d, x)
    times = t0 + dt * np.arange(n_full + 1)
    if rem > 1e-12:
        dl, xl = _step(d[-1], x[-1], a1, th1, qc, p.k_i, p.k_p, rem)
        d = np.append(d, dl)
        x = np.append(x, xl)
        times = np.append(times, t1)
    return times, d, x


def _columns(times, d, x, ne, p):
    a1, th1, qc = _kern_args(ne, p)
    uq = a1 * np.sin(th1 - d) + qc
    ud = a1 * np.cos(th1 - d) + _dcst(ne, p)
    w = x + p.k_p * uq
    return np.column_stack([times, d, w, uq, np.hypot(ud, uq)])


def classify_samples(times, deltas, omegas, d_sep, tol_d, tol_w, dwell,
                     bound, t_from=0.0):
    """Apply the settle/divergence rules to recorded samples.

    Returns (Verdict, event) where event is (t, kind) or None; only
    samples with t >= t_from participate.
    """
    m = times >= t_from - 1e-12
    t, d, w = times[m], deltas[m], omegas[m]
    over = np.abs(w) > bound
    idx_over = int(np.argmax(over)) if over.any() else len(t)
    ks = np.round((d - d_sep) / TWO_PI)
    near = (np.abs(d - d_sep - TWO_PI * ks) < tol_d) & (np.abs(w) < tol_w)
    run_start = None
    for i in range(len(t)):
        if i >= idx_over:
            return Verdict("unstable"), (float(t[idx_over]), "diverged")
        if near[i]:
            if run_start is None:
                run_start = i
            if t[i] - t[run_start] >= dwell:
                return (Verdict("stable", int(ks[i])),
                        (float(t[i]), "settled"))
        else:
            run_start = None
    return Verdict("undetermined"), None


def simulate(sc, controller=None):
    """Run fault-on/fault-off switching with an LVRT-exit hook, classify.

    x_int is continuous across network switches, so omega jumps by
    k_p * (u_cq_after - u_cq_before) automatically.  The controller, when
    given, is invoked exactly once at the LVRT-exit event and may replace
    the PLL state (reset control).
    """
    p = sc.params
    pre = network_equivalents(p, faulted=False)
    sp = swing_params(pre, p)
    eq = equilibria(sp)
    state = PllState(eq.delta_sep, 0.0)

    chunks = []
    events = [(sc.t_fault, "fault_on"), (sc.t_clear, "fault_clear")]

    def push(times, d, x, ne):
        # drop the leading sample of every chunk after the first: it
        # duplicates the previous chunk's final sample
        s = 1 if chunks else 0
        if len(times) > s:
            chunks.append(_columns(times[s:], d[s:], x[s:], ne, p))
        return PllState(float(d[-1]), float(x[-1]))

    if sc.t_fault > 0:
        times, d, x = _segment(state, pre, p, sc.dt, 0.0, sc.t_fault)
        state = push(times, d, x, pre)
    if sc.t_clear > sc.t_fault:
        flt = network_equivalents(p, faulted=True)
        times, d, x = _segment(state, flt, p, sc.dt, sc.t_fault, sc.t_clear)
        state = push(times, d, x, flt)

    # post-clear: locate the LVRT exit, fire the controller, run to t_end
    a1, th1, qc = _kern_args(pre, p)
    n_win = int(round((sc.t_end - sc.t_clear) / sc.dt))
    ok, i_exit, _, _ = _until_voltage(
        state.delta, state.x_int, a1, th1, qc, _dcst(pre, p), p.k_i, p.k_p,
        sc.dt, n_win, sc.lvrt_exit_voltage)
    if ok:
        t_exit = sc.t_clear + i_exit * sc.dt
        if i_exit > 0:
            times, d, x = _segment(state, pre, p, sc.dt, sc.t_clear, t_exit)
            state = push(times, d, x, pre)
        events.append((t_exit, "lvrt_exit"))
        if controller is not None:
            ev = controller.on_lvrt_exit(
                ReducedState(state.delta,
                             state.x_int + p.k_p * u_cq(state.delta, pre, p)),
                pre, p, t_exit)
            if ev is not None:
                events.append((t_exit, "reset"))
                state = PllState(ev.post_state.delta,
                                 ev.post_state.omega
                                 - p.k_p * u_cq(ev.post_state.delta, pre, p))
        if sc.t_end > t_exit:
            times, d, x = _segment(state, pre, p, sc.dt, t_exit, sc.t_end)
            state = push(times, d, x, pre)
    elif sc.t_end > sc.t_clear:
        times, d, x = _segment(state, pre, p, sc.dt, sc.t_clear, sc.t_end)
        state = push(times, d, x, pre)

    samples = np.vstack(chunks) if chunks else np.empty((0, 5))
    if not np.isfinite(samples).all():
        bad = int(np.argmax(~np.isfinite(samples).all(axis=1)))
        raise NumericalFailureError("non-finite state",
                                    last_sample=samples[max(bad - 1, 0)])
    verdict, event = classify_samples(
        samples[:, 0], samples[:, 1], samples[:, 2], eq.delta_sep,
        sc.settle_tol[0], sc.settle_tol[1], sc.settle_dwell,
        sc.omega_divergence_bound, t_from=sc.t_clear)
    if event is not None:
        events.append(event)
    return TrajectoryRecord(samples, sorted(events), verdict)


def _fault_trajectory(p, rf_ohm, dt, tau_max):
    """Record the during-fault trajectory from the SEP once."""
    pre = network_equivalents(p, faulted=False)
    sp = swing_params(pre, p)
    eq = equilibria(sp)
    pf = dataclasses.replace(p, r_f_ohm=rf_ohm)
    flt = network_equivalents(pf, faulted=True)
    a1f, t1f, qcf = _kern_args(flt, p)
    n = int(round(tau_max / dt))
    d = np.empty(n + 1)
    x = np.empty(n + 1)
    _record(eq.delta_sep, 0.0, a1f, t1f, qcf, p.k_i, p.k_p, dt, n, d, x)
    return d, x, eq, pre


def _scan_bisect(n_max, scan_step, stable_at):
    """Largest index in [0, n_max] with stable_at True.

    Coarse scan at scan_step spacing (always probing n_max last), then
    bisection between the last stable and first unstable probe.  Index 0
    is assumed stable.  Returns n_max + 1 when every probe is stable.
    """
    probes = list(range(scan_step, n_max + 1, scan_step))
    if not probes or probes[-1] != n_max:
        probes.append(n_max)
    lo, first_bad = 0, None
    for k in probes:
        if stable_at(k):
            lo = k
        else:
            first_bad = k
            break
    if first_bad is None:
        return n_max + 1
    hi = first_bad
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if stable_at(mid):
            lo = mid
        else:
            hi = mid
    return lo


def real_cct(p, rf_ohm=None, dt=1e-4, tau_max=0.5, post_window=6.0,
             settle_tol=(1e-3, 1e-2), dwell=0.5, bound=200.0):
    """Ground-truth CCT: largest clearing duration whose post-fault run
    settles.  Sentinels: inf when no scanned duration destabilizes, 0.0
    when even the first step does."""
    rf = p.r_f_ohm if rf_ohm is None else rf_ohm
    d, x, eq, pre = _fault_trajectory(p, rf, dt, tau_max)
    a1p, t1p, qcp = _kern_args(pre, p)
    n_post = int(round(post_window / dt))
    dwell_n = int(round(dwell / dt))

    def stable_at(k):
        code, _ = _classify(d[k], x[k], a1p, t1p, qcp, p.k_i, p.k_p, dt,
                            n_post, eq.delta_sep, settle_tol[0],
                            settle_tol[1], dwell_n, bound)
        return code == 1

    n_max = int(round(tau_max / dt))
    scan = max(1, int(round(1e-3 / dt)))
    best = _scan_bisect(n_max, scan, stable_at)
    if best > n_max:
        return math.inf
    return best * dt


def judged_cct(p, rf_ohm, judge, dt=1e-4, tau_max=0.6, exit_window=3.0):
    """CCT under a Lyapunov judge evaluated at the LVRT-exit state.

    judge maps an absolute ReducedState to True (stable) / False; a
    clearing duration with no LVRT exit inside exit_window counts as
    judged unstable.  Protocol (1 ms scan, bisect to dt) matches
    real_cct so the two are comparable.
    """
    d, x, eq, pre = _fault_trajectory(p, rf_ohm, dt, tau_max)
    a1p, t1p, qcp = _kern_args(pre, p)
    dcst = _dcst(pre, p)
    n_exit = int(round(exit_window / dt))

    def stable_at(k):
        ok, _, d_ex, w_ex = _until_voltage(d[k], x[k], a1p, t1p, qcp, dcst,
                                           p.k_i, p.k_p, dt, n_exit, 0.9)
        if not ok:
            return False
        return bool(judge(ReducedState(d_ex, w_ex)))

    n_max = int(round(tau_max / dt))
    scan = max(1, int(round(1e-3 / dt)))
    best = _scan_bisect(n_max, scan, stable_at)
    if best > n_max:
        return math.inf
    return best * dt


def lvrt_exit_state(p, rf_ohm, tau, dt=1e-4, exit_window=3.0, vthr=0.9):
    """Reduced state at the first post-clear sample with |U_c| >= vthr,
    or None when the window ends below the threshold."""
    d, x, eq, pre = _fault_trajectory(p, rf_ohm, dt, tau)
    a1p, t1p, qcp = _kern_args(pre, p)
    ok, _, d_ex, w_ex = _until_voltage(d[-1], x[-1], a1p, t1p, qcp,
                                       _dcst(pre, p), p.k_i, p.k_p, dt,
                                       int(round(exit_window / dt)), vthr)
    if not ok:
        return None
    return ReducedState(d_ex, w_ex)


def point_stability_oracle(x0, ne, p, dt=1e-4, t_end=6.0,
                           settle_tol=(1e-3, 1e-2), dwell=0.5, bound=200.0):
    """Ground-truth membership: start exactly at the reduced state x0
    under the given (post-fault) network and classify."""
    sp = swing_params(ne, p)
    eq = equilibria(sp)
    a1, t1, qc = _kern_args(ne, p)
    xint = x0.omega - p.k_p * u_cq(x0.delta, ne, p)
    code, _ = _classify(x0.delta, xint, a1, t1, qc, p.k_i, p.k_p, dt,
                        int(round(t_end / dt)), eq.delta_sep, settle_tol[0],
                        settle_tol[1], int(round(dwell / dt)), bound)
    if code == 1:
        return Verdict("stable")
    if code == 2:
        return Verdict("unstable")
    return Verdict("undetermined")
