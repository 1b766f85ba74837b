"""Network reduction, swing coefficients, equilibria, and SCR.

The single-machine system is a current-source converter behind Z_c, a grid
behind Z_g, and a shunt load branch Z_l at the PCC; a fault adds R_f in
parallel with Z_l.  Everything downstream works with the two polar
equivalents (z_eq1, theta1) and (z_eq2, theta2) produced here.
"""
import cmath
import math
from dataclasses import dataclass

from .errors import NoEquilibriumError, SingularNetworkError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CircuitParams:
    """Raw physical parameters; defaults are the single-machine test system."""

    s_base: float = 100e6
    u_base: float = 230e3
    omega0: float = 100.0 * math.pi
    r_g: float = 0.0
    x_g: float = 0.12
    r_c: float = 0.0
    x_c: float = 0.36
    r_l: float = 0.5
    x_l: float = 5.0
    r_f_ohm: float = 1.0
    u_g: float = 1.1
    k_i: float = 100.0
    k_p: float = 10.0
    i_c: float = 1.0
    phi_i: float = 0.0

    def __post_init__(self):
        if min(self.r_g, self.x_g, self.r_c, self.x_c, self.r_l,
               self.x_l) < 0:
            raise ValueError("impedance components must be >= 0")
        if math.hypot(self.r_l, self.x_l) <= 0:
            raise ValueError("|Z_l| must be positive")
        if self.u_g <= 0:
            raise ValueError("u_g must be positive")
        if self.i_c < 0:
            raise ValueError("i_c must be >= 0")
        if self.k_i <= 0 or self.k_p <= 0:
            raise ValueError("PLL gains must be positive")
        if self.s_base <= 0 or self.u_base <= 0:
            raise ValueError("base quantities must be positive")

    @property
    def z_base_ohm(self):
        return self.u_base ** 2 / self.s_base


@dataclass(frozen=True)
class NetworkEquivalents:
    """Polar form of the reduced two-source network."""

    z_eq1: float
    theta1: float
    z_eq2: float
    theta2: float
    faulted: bool

    def __post_init__(self):
        if self.z_eq1 < 0 or self.z_eq2 < 0:
            raise ValueError("equivalent magnitudes must be >= 0")
        for ang in (self.theta1, self.theta2):
            if not -math.pi < ang <= math.pi:
                raise ValueError("angles must lie in (-pi, pi]")


@dataclass(frozen=True)
class SwingParams:
    """Coefficients of the reduced second-order phase dynamics."""

    p_m: float
    p_e: float
    d_c: float
    theta1: float

    def __post_init__(self):
        if self.p_e <= 0 or self.d_c <= 0:
            raise ValueError("p_e and d_c must be positive")


@dataclass(frozen=True)
class EquilibriumPair:
    """SEP/UEP pair of the 2k*pi branch family."""

    delta_sep: float
    delta_uep: float
    branch_k: int


def network_equivalents(p, faulted=False):
    """Reduce the circuit to (z_eq1, theta1, z_eq2, theta2).

    z_eq1 scales the grid-voltage path to the PCC, z_eq2 the converter
    current path.  A fault parallels the load branch with R_f (converted
    to per-unit on the system base).
    """
    zl = complex(p.r_l, p.x_l)
    zg = complex(p.r_g, p.x_g)
    zc = complex(p.r_c, p.x_c)
    if faulted:
        if p.r_f_ohm <= 0:
            raise ValueError("r_f_ohm must be positive for a fault")
        rf = p.r_f_ohm / p.z_base_ohm
        zl = zl * rf / (zl + rf)
    den = zg + zl
    if abs(den) < 1e-12:
        raise SingularNetworkError("grid and load branches cancel")
    ze1 = zl / den
    ze2 = zl * zg / den + zc
    return NetworkEquivalents(abs(ze1), cmath.phase(ze1), abs(ze2),
                              cmath.phase(ze2), faulted)


def swing_params(ne, p):
    """Coefficients (p_m, p_e, d_c) of the reduced swing-like equation."""
    p_m = p.k_i * ne.z_eq2 * p.i_c * math.sin(ne.theta2 + p.phi_i)
    p_e = p.k_i * ne.z_eq1 * p.u_g
    d_c = p.k_p * ne.z_eq1 * p.u_g
    return SwingParams(p_m, p_e, d_c, ne.theta1)


def equilibria(sp, k=0):
    """SEP and UEP of branch k; raises when no equilibrium exists."""
    ratio = sp.p_m / sp.p_e
    if abs(ratio) > 1:
        raise NoEquilibriumError(f"|p_m/p_e| = {abs(ratio):.6g} > 1")
    asin = math.asin(ratio)
    dse = sp.theta1 + asin + TWO_PI * k
    due = sp.theta1 + math.pi - asin + TWO_PI * k
    return EquilibriumPair(dse, due, k)


def scr(ne):
    """Short-circuit ratio of the unfaulted network, 1/z_eq2."""
    if ne.faulted:
        raise ValueError("SCR is defined on the unfaulted network")
    if ne.z_eq2 == 0:
        return math.inf
    return 1.0 / ne.z_eq2
