"""Energy-function stability certificates with the path-dependent damping
integral closed by a ray or single-step trapezoid approximation."""
import math
from dataclasses import dataclass

from .circuit import equilibria
from .dynsim import Verdict, judged_cct


@dataclass(frozen=True)
class AblmCertificate:
    """Closest-UEP energy certificate; variant picks the damping closure."""

    sp: object
    sep: float
    uep: float
    v_cr: float
    variant: str

    def __post_init__(self):
        if self.variant not in ("ray", "trapezoid"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if not self.v_cr > 0:
            raise ValueError("v_cr must be positive")


def build_ablm(sp, variant="ray"):
    """Certificate from the closest-UEP critical energy.

    Both damping closures vanish at omega = 0, so the UEP energy is
    variant-independent.
    """
    eq = equilibria(sp)
    v_cr = (-sp.p_m * (eq.delta_uep - eq.delta_sep)
            - sp.p_e * (math.cos(eq.delta_uep - sp.theta1)
                        - math.cos(eq.delta_sep - sp.theta1)))
    return AblmCertificate(sp, eq.delta_sep, eq.delta_uep, v_cr, variant)


def damping_ray(x, cert):
    """Ray closure of the damping path integral from the SEP to x.

    Integrating d_c cos(delta - theta1) omega along the straight phase
    plane ray gives a closed form; near the SEP the 0/0 factor is
    replaced by its first-order series.
    """
    sp = cert.sp
    h = x.delta - cert.sep
    a_se = cert.sep - sp.theta1
    if abs(h) < 1e-8:
        return 0.5 * sp.d_c * x.omega * h * math.cos(a_se)
    a = x.delta - sp.theta1
    return sp.d_c * x.omega * (math.sin(a)
                               + (math.cos(a) - math.cos(a_se)) / h)


def damping_trapezoid(x, cert):
    """Two-point trapezoid closure over the SEP-to-x chord.

    The integrand d_c cos(delta - theta1) omega is 0 at the SEP end
    (omega = 0 there), leaving half the far-end value times the chord.
    """
    sp = cert.sp
    return 0.5 * sp.d_c * math.cos(x.delta - sp.theta1) * x.omega \
        * (x.delta - cert.sep)


_DAMPING = {"ray": damping_ray, "trapezoid": damping_trapezoid}


def v_ablm(x, cert):
    """Total energy: kinetic + potential + approximated damping work."""
    sp = cert.sp
    e = _DAMPING[cert.variant](x, cert)
    return (0.5 * x.omega ** 2
            - sp.p_m * (x.delta - cert.sep)
            - sp.p_e * (math.cos(x.delta - sp.theta1)
                        - math.cos(cert.sep - sp.theta1))
            + e)


def judge(x, cert):
    """Stable iff the energy sits strictly below the critical value."""
    if v_ablm(x, cert) < cert.v_cr:
        return Verdict("stable")
    return Verdict("unstable")


def estimate_cct(cert, p, rf_ohm=None, dt=1e-4, tau_max=0.6,
                 exit_window=3.0):
    """CCT by the energy judge at the LVRT-exit instant."""
    rf = p.r_f_ohm if rf_ohm is None else rf_ohm
    return judged_cct(p, rf, lambda x: judge(x, cert).kind == "stable",
                      dt=dt, tau_max=tau_max, exit_window=exit_window)
