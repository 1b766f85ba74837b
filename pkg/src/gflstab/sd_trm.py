"""Exact stability-domain boundaries by backward trajectory tracing,
band-based domain-shape classification, and parameter sweeps.

The boundary of each SEP's stability domain is the stable manifold of the
neighboring saddle points.  Reversing the vector field turns those stable
manifolds into unstable ones, which trace out from the saddles directly.
"""
import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuit import equilibria, network_equivalents, swing_params
from .dynsim import ReducedState, point_stability_oracle
from .errors import (ClassificationInconclusiveError, NoEquilibriumError,
                     NotASaddleError)

TWO_PI = 2.0 * math.pi


@dataclass
class BoundaryCurve:
    """One traced branch; points rows are (delta, omega)."""

    uep_branch: int
    side: str
    points: np.ndarray
    terminated_by: str


@dataclass(frozen=True)
class SdForm:
    """Stability-domain shape verdict plus the safe frequency band."""

    form: str
    omega_cr: Optional[float] = None
    band: Optional[tuple] = None

    def __post_init__(self):
        if self.form not in ("overlapping_band", "partial_overlap",
                             "disjoint"):
            raise ValueError(f"unknown form {self.form!r}")
        if (self.omega_cr is None) != (self.form == "disjoint"):
            raise ValueError("omega_cr present iff form is not disjoint")


def _reversed_rhs(d, w, sp):
    s = math.sin(d - sp.theta1)
    c = math.cos(d - sp.theta1)
    return -w, -(sp.p_m - sp.p_e * s - sp.d_c * c * w)


def default_window(sp):
    """Phase-plane box centered on the SEP: delta +- 3 pi, omega +- 40."""
    eq = equilibria(sp)
    return (eq.delta_sep - 3 * math.pi, eq.delta_sep + 3 * math.pi,
            -40.0, 40.0)


def _trace_branch(sp, d_uep, k, sign, window, ds_max, eps_seed, max_steps):
    """Integrate the reversed field from one side of a saddle."""
    c = math.cos(d_uep - sp.theta1)
    jac = np.array([[0.0, -1.0],
                    [sp.p_e * c, sp.d_c * c]])
    lam, vec = np.linalg.eig(jac)
    if np.iscomplexobj(lam) and np.abs(lam.imag).max() > 1e-9:
        raise NotASaddleError(f"complex eigenvalues at branch {k}")
    lam = lam.real
    vec = vec.real
    if lam.max() <= 0 or lam.min() >= 0:
        raise NotASaddleError(
            f"eigenvalues {lam} at branch {k} are not a saddle pair")
    v = vec[:, int(np.argmax(lam))]
    v = v / np.linalg.norm(v)
    d = d_uep + sign * eps_seed * v[0]
    w = sign * eps_seed * v[1]
    d_lo, d_hi, w_lo, w_hi = window
    pts = [(d, w)]
    terminated = "time_budget"
    for _ in range(max_steps):
        f1, f2 = _reversed_rhs(d, w, sp)
        speed = math.hypot(f1, f2)
        # 0.98 safety factor keeps post-step spacing under ds_max even
        # when the speed grows along the step
        dt = min(0.98 * ds_max / max(speed, 1e-9), 2e-3)
        k1d, k1w = f1, f2
        k2d, k2w = _reversed_rhs(d + 0.5 * dt * k1d, w + 0.5 * dt * k1w, sp)
        k3d, k3w = _reversed_rhs(d + 0.5 * dt * k2d, w + 0.5 * dt * k2w, sp)
        k4d, k4w = _reversed_rhs(d + dt * k3d, w + dt * k3w, sp)
        d += dt * (k1d + 2 * k2d + 2 * k3d + k4d) / 6.0
        w += dt * (k1w + 2 * k2w + 2 * k3w + k4w) / 6.0
        pts.append((d, w))
        if not (d_lo <= d <= d_hi and w_lo <= w <= w_hi):
            terminated = "window_exit"
            break
    return BoundaryCurve(k, "right" if sign > 0 else "left",
                         np.array(pts), terminated)


def trm_boundary(sp, k_range=(-1, 0, 1), window=None, ds_max=0.02,
                 eps_seed=1e-5, max_steps=60000):
    """Trace both stable-manifold branches of each saddle in k_range.

    Under the reversed field every saddle keeps its location while its
    stable and unstable manifolds swap, so forward integration from a
    small eigenvector offset yields the stability boundary exactly.
    """
    eq = equilibria(sp)
    if window is None:
        window = default_window(sp)
    curves = []
    for k in k_range:
        d_uep = eq.delta_uep + TWO_PI * k
        for sign in (+1, -1):
            curves.append(_trace_branch(sp, d_uep, k, sign, window,
                                        ds_max, eps_seed, max_steps))
    return curves


def classify_sd_form(curves, ne, p, omega_step=0.25, n_delta=64,
                     window=None, oracle_t_end=12.0):
    """Assign the domain shape from the safe-frequency band.

    A frequency level belongs to the band when the oracle reports stable
    at that omega for every delta on an n_delta grid across one 2 pi
    period.  An empty band means the per-SEP domains are disjoint; a band
    reaching omega >= 0 means they overlap into a full corridor; anything
    else is a partial overlap.
    """
    sp = swing_params(ne, p)
    eq = equilibria(sp)
    if window is None:
        window = default_window(sp)
    w_all = np.concatenate([c.points[:, 1] for c in curves])
    w_lo = max(float(w_all.min()), window[2])
    w_hi = min(float(w_all.max()), window[3])
    levels = np.arange(math.floor(w_lo / omega_step),
                       math.ceil(w_hi / omega_step) + 1) * omega_step
    deltas = eq.delta_sep + (np.arange(n_delta) + 0.5) / n_delta * TWO_PI
    band = []
    for w in levels:
        ok = True
        undetermined = []
        for d in deltas:
            verdict = point_stability_oracle(ReducedState(float(d), float(w)),
                                             ne, p, t_end=oracle_t_end)
            if verdict.kind == "undetermined":
                undetermined.append((float(d), float(w)))
            elif verdict.kind != "stable":
                ok = False
                break
        if undetermined:
            raise ClassificationInconclusiveError(
                f"{len(undetermined)} oracle probes undetermined at "
                f"omega={w:g}", probes=undetermined)
        if ok:
            band.append(float(w))
    if not band:
        return SdForm("disjoint", None, None)
    omega_cr = max(band)
    form = "overlapping_band" if omega_cr >= 0.0 else "partial_overlap"
    return SdForm(form, omega_cr, (min(band), omega_cr))


def sweep_parameter(p, param, values, k_range=(-1, 0, 1), **trace_kw):
    """trm_boundary for each parameter value; failures don't stop the sweep.

    param is one of k_i, k_p, i_cd.  Returns (results, failures): results
    maps value -> curve list, failures maps value -> error message.
    """
    field_map = {"k_i": "k_i", "k_p": "k_p", "i_cd": "i_c"}
    if param not in field_map:
        raise ValueError(f"param must be one of {sorted(field_map)}")
    results, failures = {}, {}
    for val in values:
        pv = dataclasses.replace(p, **{field_map[param]: float(val)})
        try:
            ne = network_equivalents(pv)
            sp = swing_params(ne, pv)
            results[val] = trm_boundary(sp, k_range=k_range, **trace_kw)
        except NoEquilibriumError as exc:
            failures[val] = str(exc)
    return results, failures
