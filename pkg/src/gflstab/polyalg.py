"""Dense bivariate polynomial algebra over SEP-centered coordinates.

Polynomials live in (dtil, wtil) = (delta - delta_sep, omega).  Storage is
a dense triangular coefficient array; everything here is pure and returns
new objects.
"""
import math

import numpy as np

from .errors import DegreeOverflowError, ResonanceError


class Poly2:
    """Bivariate polynomial sum_{i+j<=max_degree} c[i,j] dtil^i wtil^j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("coeffs must be a square 2-D array")
        if not np.isfinite(c).all():
            raise ValueError("coefficients must be finite")
        n = c.shape[0]
        # triangular: zero out i+j > max_degree
        i, j = np.indices(c.shape)
        c = np.where(i + j <= n - 1, c, 0.0)
        c.flags.writeable = False
        self.coeffs = c

    @property
    def max_degree(self):
        return self.coeffs.shape[0] - 1

    @classmethod
    def zero(cls, max_degree):
        return cls(np.zeros((max_degree + 1, max_degree + 1)))

    @classmethod
    def from_terms(cls, terms, max_degree=None):
        """Build from {(i, j): coefficient}."""
        if max_degree is None:
            max_degree = max((i + j for i, j in terms), default=0)
        c = np.zeros((max_degree + 1, max_degree + 1))
        for (i, j), v in terms.items():
            if i + j > max_degree:
                raise DegreeOverflowError(
                    f"term ({i},{j}) exceeds degree {max_degree}")
            c[i, j] = v
        return cls(c)

    def fit_degree(self, max_degree, truncate=False):
        """Return an equal polynomial stored at the given degree.

        Shrinking past a nonzero coefficient needs truncate=True.
        """
        n = self.coeffs.shape[0]
        m = max_degree + 1
        if m >= n:
            c = np.zeros((m, m))
            c[:n, :n] = self.coeffs
            return Poly2(c)
        if not truncate:
            i, j = np.indices(self.coeffs.shape)
            lost = self.coeffs[(i + j > max_degree)]
            if np.any(lost != 0.0):
                raise DegreeOverflowError(
                    f"degree {self.degree()} does not fit in {max_degree}")
        return Poly2(self.coeffs[:m, :m].copy())

    def degree(self):
        """Largest total degree with a nonzero coefficient (0 for zero)."""
        nz = np.argwhere(self.coeffs != 0.0)
        if len(nz) == 0:
            return 0
        return int((nz[:, 0] + nz[:, 1]).max())

    def add(self, other):
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        c = np.zeros((n, n))
        c[:self.coeffs.shape[0], :self.coeffs.shape[1]] += self.coeffs
        c[:other.coeffs.shape[0], :other.coeffs.shape[1]] += other.coeffs
        return Poly2(c)

    def scale(self, s):
        return Poly2(self.coeffs * float(s))

    def mul(self, other, truncate_to=None):
        """Product; result degree is the sum unless truncate_to caps it."""
        full = self.max_degree + other.max_degree
        out_deg = full if truncate_to is None else int(truncate_to)
        c = np.zeros((out_deg + 1, out_deg + 1))
        a, b = self.coeffs, other.coeffs
        nza = np.argwhere(a != 0.0)
        for i, j in nza:
            block = a[i, j] * b
            ni = min(b.shape[0], c.shape[0] - i)
            nj = min(b.shape[1], c.shape[1] - j)
            if ni > 0 and nj > 0:
                c[i:i + ni, j:j + nj] += block[:ni, :nj]
        return Poly2(c)

    def partial(self, var):
        """Derivative with respect to var 0 (dtil) or 1 (wtil)."""
        n = self.coeffs.shape[0]
        m = max(n - 1, 1)
        c = np.zeros((m, m))
        if var == 0:
            src = self.coeffs[1:, :]
            mult = np.arange(1, n)[:, None]
        elif var == 1:
            src = self.coeffs[:, 1:]
            mult = np.arange(1, n)[None, :]
        else:
            raise ValueError("var must be 0 (dtil) or 1 (wtil)")
        scaled = src * mult
        c[:scaled.shape[0], :scaled.shape[1]] = scaled[:m, :m]
        return Poly2(c)

    def eval(self, dtil, wtil):
        """Horner evaluation, scalar or ndarray arguments."""
        dtil = np.asarray(dtil, dtype=float)
        wtil = np.asarray(wtil, dtype=float)
        acc = np.zeros(np.broadcast(dtil, wtil).shape)
        for i in range(self.coeffs.shape[0] - 1, -1, -1):
            row = self.coeffs[i]
            inner = np.zeros_like(acc)
            for j in range(len(row) - 1, -1, -1):
                inner = inner * wtil + row[j]
            acc = acc * dtil + inner
        if acc.ndim == 0:
            return float(acc)
        return acc

    def homogeneous_slice(self, m):
        if m > self.max_degree:
            raise DegreeOverflowError(
                f"slice degree {m} exceeds max_degree {self.max_degree}")
        vals = np.array([self.coeffs[m - j, j] for j in range(m + 1)])
        return HomogeneousSlice(m, vals)

    def dump_csv(self):
        """Coefficient dump for debugging: header then one i,j,c per term."""
        lines = ["i,j,c"]
        for i in range(self.coeffs.shape[0]):
            for j in range(self.coeffs.shape[1] - i):
                if self.coeffs[i, j] != 0.0:
                    lines.append(f"{i},{j},{self.coeffs[i, j]:.9g}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"Poly2(max_degree={self.max_degree}, terms={np.count_nonzero(self.coeffs)})"


class HomogeneousSlice:
    """All degree-m terms of a Poly2; values[j] multiplies dtil^(m-j) wtil^j."""

    __slots__ = ("degree", "values")

    def __init__(self, degree, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (degree + 1,):
            raise ValueError("need degree+1 values")
        values.flags.writeable = False
        self.degree = degree
        self.values = values

    def to_poly(self, max_degree=None):
        md = self.degree if max_degree is None else max_degree
        if md < self.degree:
            raise DegreeOverflowError("slice does not fit requested degree")
        c = np.zeros((md + 1, md + 1))
        for j in range(self.degree + 1):
            c[self.degree - j, j] = self.values[j]
        return Poly2(c)

    def __repr__(self):
        return f"HomogeneousSlice(degree={self.degree})"


def taylor_field(sp, sep, m_t):
    """Taylor expansion of the reduced field about the SEP.

    Returns (f_1, f_2) as Poly2 at degree m_t: f_1 = wtil and f_2 the
    expansion of p_m - p_e sin(dtil+a) - d_c cos(dtil+a) wtil with
    a = sep - theta1.  The constant term vanishes when sep solves the
    equilibrium equation.
    """
    if m_t < 1:
        raise ValueError("m_t must be >= 1")
    a = sep - sp.theta1
    f1 = Poly2.from_terms({(0, 1): 1.0}, max_degree=m_t)
    c = np.zeros((m_t + 1, m_t + 1))
    # derivative cycles: sin -> cos -> -sin -> -cos; cos -> -sin -> ...
    sin_cycle = (math.sin(a), math.cos(a), -math.sin(a), -math.cos(a))
    cos_cycle = (math.cos(a), -math.sin(a), -math.cos(a), math.sin(a))
    for i in range(m_t + 1):
        c[i, 0] = -sp.p_e * sin_cycle[i % 4] / math.factorial(i)
    c[0, 0] += sp.p_m
    for i in range(m_t):
        c[i, 1] = -sp.d_c * cos_cycle[i % 4] / math.factorial(i)
    return f1, Poly2(c)


def lie_operator_matrix(b, m):
    """Matrix of V_m -> <grad V_m, B x> on degree-m coefficient vectors.

    Coefficient order matches HomogeneousSlice: index j holds the
    dtil^(m-j) wtil^j coefficient.
    """
    b = np.asarray(b, dtype=float)
    L = np.zeros((m + 1, m + 1))
    for j in range(m + 1):
        L[j, j] += (m - j) * b[0, 0] + j * b[1, 1]
        if j + 1 <= m:
            L[j + 1, j] += (m - j) * b[0, 1]
        if j - 1 >= 0:
            L[j - 1, j] += j * b[1, 0]
    return L


def lie_solve_homogeneous(b, m, rhs):
    """Solve <grad V_m, B x> = rhs for the degree-m homogeneous V_m.

    Raises ResonanceError when some eigenvalue combination
    m_1 lam_1 + m_2 lam_2 (m_1 + m_2 = m) vanishes, which is exactly when
    the (m+1) x (m+1) operator is singular.
    """
    if rhs.degree != m:
        raise ValueError("rhs degree must equal m")
    b = np.asarray(b, dtype=float)
    lam = np.linalg.eigvals(b)
    for m1 in range(m + 1):
        comb = m1 * lam[0] + (m - m1) * lam[1]
        if abs(comb) < 1e-10:
            raise ResonanceError(
                f"resonant combination {m1}*lam1 + {m - m1}*lam2 ~ 0 "
                f"at degree {m}")
    L = lie_operator_matrix(b, m)
    v = np.linalg.solve(L, rhs.values)
    return HomogeneousSlice(m, v)
