"""Level-set certificates evolved backward in flow time.

A polynomial level set seeded inside the stability domain is advected by
the reversed flow: the coefficient vector follows a linear ODE read off
from the degree-truncated Lie derivative, growing the certified region
until the decay condition on its boundary reaches tangency or the time
budget runs out.
"""
import math
from dataclasses import dataclass

import numpy as np

from .dynsim import Verdict, judged_cct
from .errors import EvolutionDivergedError, TangencyBudgetError
from .polyalg import Poly2, taylor_field


@dataclass
class AtrmCertificate:
    """Evolved certificate: {v <= k0} around the SEP, reached at t_s."""

    v: Poly2
    k0: float
    t_s: float
    degree_schedule: tuple
    expansions_done: int
    sep: float
    sp: object
    status: str

    def __post_init__(self):
        if abs(self.v.eval(0.0, 0.0)) > 1e-12:
            raise ValueError("certificate must vanish at the SEP")
        if not self.t_s > 0:
            raise ValueError("t_s must be positive")
        if not self.k0 > 0:
            raise ValueError("k0 must be positive")


@dataclass
class EvolveResult:
    """One stage of coefficient evolution, sampled every dt_p."""

    times: np.ndarray
    history: list
    basis: list
    t_s: float
    status: str


def monomial_basis(m):
    """(i, j) exponent pairs of total degree 2..m, evolution order."""
    return [(i, d - i) for d in range(2, m + 1) for i in range(d, -1, -1)]


def poly_from_vector(vec, basis, m):
    c = np.zeros((m + 1, m + 1))
    for val, (i, j) in zip(vec, basis):
        c[i, j] = val
    return Poly2(c)


def vector_from_poly(poly, basis):
    n = poly.coeffs.shape[0]
    return np.array([poly.coeffs[i, j] if i < n and j < n else 0.0
                     for i, j in basis])


def flow_matrix(sp, sep, m):
    """A with dp/dt = A p: column k holds the degree-<=m truncation of
    the Lie derivative of basis monomial k along the Taylor field.

    The positive sign advects sublevel sets with the backward flow, so
    the certified region grows as p evolves.
    """
    basis = monomial_basis(m)
    index = {mon: r for r, mon in enumerate(basis)}
    f1, f2 = taylor_field(sp, sep, m)
    n = len(basis)
    a = np.zeros((n, n))
    for col, (i, j) in enumerate(basis):
        terms = {}
        if i > 0:
            mono = Poly2.from_terms({(i - 1, j): float(i)})
            terms[0] = mono.mul(f1)
        if j > 0:
            mono = Poly2.from_terms({(i, j - 1): float(j)})
            terms[1] = mono.mul(f2)
        for tp in terms.values():
            cc = tp.coeffs
            for r, mon in enumerate(basis):
                ii, jj = mon
                if ii < cc.shape[0] and jj < cc.shape[1]:
                    a[r, col] += cc[ii, jj]
    return a, basis


def atrm_seed(k0=0.8, weights=(1.0, 0.01)):
    """Initial ellipse w_d dtil^2 + w_o wtil^2 with level k0."""
    wd, wo = weights
    if not (wd > 0 and wo > 0):
        raise ValueError("weights must be positive")
    if not k0 > 0:
        raise ValueError("k0 must be positive")
    return Poly2.from_terms({(2, 0): wd, (0, 2): wo})


def radial_profile(v, level, thetas, r_probe=0.05, r_factor=1.3,
                   r_max=50.0, bisections=60):
    """First-crossing radius of {v = level} along each ray, vectorized.

    Rays that never cross below r_max return r_max (caller treats that
    as escape).
    """
    thetas = np.asarray(thetas, dtype=float)
    cs, sn = np.cos(thetas), np.sin(thetas)
    lo = np.zeros_like(thetas)
    hi = np.full_like(thetas, -1.0)
    r = np.full_like(thetas, r_probe)
    open_rays = np.ones(thetas.shape, dtype=bool)
    while open_rays.any() and r[open_rays].min() <= r_max:
        vals = v.eval(r * cs, r * sn)
        crossed = open_rays & (vals > level)
        hi[crossed] = r[crossed]
        open_rays &= ~crossed
        lo[open_rays] = r[open_rays]
        r = np.where(open_rays, r * r_factor, r)
    escaped = hi < 0
    hi[escaped] = r_max
    lo[escaped] = r_max
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        vals = v.eval(mid * cs, mid * sn)
        above = vals > level
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    out = 0.5 * (lo + hi)
    out[escaped] = r_max
    return out


def vdot_exact(v, sp, sep, dtil, wtil):
    """Decay rate of v under the exact trigonometric field."""
    vd = v.partial(0).eval(dtil, wtil)
    vw = v.partial(1).eval(dtil, wtil)
    d_abs = np.asarray(dtil) + sep
    f2 = (sp.p_m - sp.p_e * np.sin(d_abs - sp.theta1)
          - sp.d_c * np.cos(d_abs - sp.theta1) * wtil)
    return vd * np.asarray(wtil) + vw * f2


def _boundary_state(v, sp, sep, k0, thetas, r_max):
    rho = radial_profile(v, k0, thetas, r_max=r_max)
    if (rho >= r_max).any():
        raise EvolutionDivergedError(
            "level set escaped the sampling radius")
    d, w = rho * np.cos(thetas), rho * np.sin(thetas)
    return rho, vdot_exact(v, sp, sep, d, w)


def atrm_evolve(p0, sp, sep, m, dt_p=1e-4, t_budget=1.2e-3, k0=0.8,
                n_samples=256, r_max=50.0, strict_tangency=False):
    """Integrate the coefficient flow, watching boundary decay.

    The tangency clock arms once every boundary sample decays strictly
    and t_s is the last armed time before a sample stops decaying.  When
    the budget elapses first, status is 'budget' and the final
    coefficients are the last computed ones; strict_tangency escalates
    that outcome to an error carrying the last safe coefficients.
    """
    a, basis = flow_matrix(sp, sep, m)
    p = vector_from_poly(p0.fit_degree(m), basis)
    thetas = (np.arange(n_samples) + 0.5) / n_samples * 2.0 * math.pi
    n_steps = int(round(t_budget / dt_p))
    history = [p.copy()]
    times = [0.0]
    _, vd = _boundary_state(poly_from_vector(p, basis, m), sp, sep, k0,
                            thetas, r_max)
    armed = bool((vd < 0).all())
    t_s, status = t_budget, "budget"
    for step in range(1, n_steps + 1):
        k1 = a @ p
        k2 = a @ (p + 0.5 * dt_p * k1)
        k3 = a @ (p + 0.5 * dt_p * k2)
        k4 = a @ (p + dt_p * k3)
        p = p + dt_p * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        history.append(p.copy())
        times.append(step * dt_p)
        _, vd = _boundary_state(poly_from_vector(p, basis, m), sp, sep,
                                k0, thetas, r_max)
        all_neg = bool((vd < 0).all())
        if not armed and all_neg:
            armed = True
        elif armed and not all_neg:
            t_s, status = times[-2], "tangent"
            break
    if status == "budget" and strict_tangency:
        raise TangencyBudgetError(
            f"no tangency within {t_budget} s", last_safe=p.copy())
    return EvolveResult(np.array(times), history, basis, t_s, status)


def find_ts(p0, sp, sep, m, **kw):
    """Tangency time of one evolution stage."""
    return atrm_evolve(p0, sp, sep, m, **kw).t_s


def atrm_expand(v, next_degree):
    """Re-seed at a higher degree: new monomial coefficients start at 0."""
    return v.fit_degree(next_degree)


def build_atrm(sp, sep, schedule=(2, 6), k0=0.8, weights=(1.0, 0.01),
               dt_p=1e-4, t_budget=1.2e-3, eps0=None, n_samples=256,
               r_max=50.0):
    """Run the full evolve/rollback/expand pipeline.

    Each non-final stage ends at its t_s, steps back by eps0 for a
    strictly safe set, and zero-pads to the next degree; the final
    stage's coefficients (at its t_s when tangent, at the budget end
    otherwise) become the certificate.
    """
    if eps0 is None:
        eps0 = 10.0 * dt_p
    v = atrm_seed(k0, weights)
    status = "budget"
    t_s = t_budget
    for idx, m in enumerate(schedule):
        res = atrm_evolve(v, sp, sep, m, dt_p=dt_p, t_budget=t_budget,
                          k0=k0, n_samples=n_samples, r_max=r_max)
        t_s, status = res.t_s, res.status
        last = idx == len(schedule) - 1
        if last:
            i_pick = int(round(t_s / dt_p)) if status == "tangent" \
                else len(res.history) - 1
            v = poly_from_vector(res.history[i_pick], res.basis, m)
        else:
            i_back = max(int(round((t_s - eps0) / dt_p)), 0)
            v = atrm_expand(
                poly_from_vector(res.history[i_back], res.basis, m),
                schedule[idx + 1])
    return AtrmCertificate(v, k0, t_s, tuple(schedule),
                           len(schedule) - 1, sep, sp, status)


def region_area(v, level, n_samples=256, r_max=50.0):
    """Shoelace area of the first-crossing boundary polygon."""
    thetas = (np.arange(n_samples) + 0.5) / n_samples * 2.0 * math.pi
    rho = radial_profile(v, level, thetas, r_max=r_max)
    x, y = rho * np.cos(thetas), rho * np.sin(thetas)
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def judge(x, cert):
    """Stable iff x is inside the first-crossing sublevel region."""
    dtil = x.delta - cert.sep
    wtil = x.omega
    r = math.hypot(dtil, wtil)
    if r == 0.0:
        return Verdict("stable")
    theta = math.atan2(wtil, dtil)
    r_cap = 50.0
    rho = radial_profile(cert.v, cert.k0, np.array([theta]),
                         r_max=r_cap)[0]
    # an escaped ray (no crossing below the cap) certifies nothing
    if rho >= r_cap or r > rho:
        return Verdict("unstable")
    return Verdict("stable")


def estimate_cct(cert, p, rf_ohm=None, dt=1e-4, tau_max=0.6,
                 exit_window=3.0):
    """CCT by the certificate judge at the LVRT-exit instant."""
    rf = p.r_f_ohm if rf_ohm is None else rf_ohm
    return judged_cct(p, rf, lambda x: judge(x, cert).kind == "stable",
                      dt=dt, tau_max=tau_max, exit_window=exit_window)
