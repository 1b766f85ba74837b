"""Dense bivariate polynomial arithmetic and homogeneous Lie solves."""
import math

import numpy as np
import pytest

from gflstab import CircuitParams, Poly2, equilibria, network_equivalents, \
    swing_params, taylor_field
from gflstab.errors import DegreeOverflowError, ResonanceError
from gflstab.polyalg import (HomogeneousSlice, lie_operator_matrix,
                             lie_solve_homogeneous)


def _rand_poly(rng, md):
    c = np.zeros((md + 1, md + 1))
    for i in range(md + 1):
        for j in range(md + 1 - i):
            c[i, j] = rng.normal()
    return Poly2(c)


def test_from_terms_and_eval():
    v = Poly2.from_terms({(2, 0): 1.0, (0, 2): 0.5, (1, 1): -2.0})
    assert v.degree() == 2
    assert v.eval(1.0, 2.0) == pytest.approx(1.0 + 2.0 - 4.0)
    assert v.eval(0.0, 0.0) == 0.0


def test_eval_vectorized_matches_scalar():
    rng = np.random.default_rng(7)
    v = _rand_poly(rng, 5)
    d = rng.normal(size=(4, 3))
    w = rng.normal(size=(4, 3))
    grid = v.eval(d, w)
    assert grid.shape == (4, 3)
    for i in range(4):
        for j in range(3):
            ref = sum(v.coeffs[a, b] * d[i, j] ** a * w[i, j] ** b
                      for a in range(6) for b in range(6 - a))
            assert grid[i, j] == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_triangular_storage_is_enforced():
    c = np.ones((3, 3))
    v = Poly2(c)
    assert v.coeffs[2, 2] == 0.0
    assert v.coeffs[2, 1] == 0.0
    with pytest.raises(ValueError):
        v.coeffs[0, 0] = 5.0


def test_ring_axioms_on_random_polynomials():
    """Distributivity and commutativity hold to rounding error."""
    rng = np.random.default_rng(11)
    a, b, c = (_rand_poly(rng, 3) for _ in range(3))
    pts = rng.normal(size=(20, 2))
    lhs = a.mul(b.add(c))
    rhs = a.mul(b).add(a.mul(c))
    for d, w in pts:
        assert lhs.eval(d, w) == pytest.approx(rhs.eval(d, w), rel=1e-10,
                                               abs=1e-10)
        assert a.mul(b).eval(d, w) == pytest.approx(b.mul(a).eval(d, w),
                                                    rel=1e-10, abs=1e-10)


def test_mul_truncation_and_overflow():
    a = Poly2.from_terms({(2, 0): 1.0})
    b = Poly2.from_terms({(0, 3): 1.0})
    assert a.mul(b).degree() == 5
    capped = a.mul(b, truncate_to=4)
    assert capped.degree() == 0
    assert capped.max_degree == 4
    with pytest.raises(DegreeOverflowError):
        a.fit_degree(1)
    assert a.fit_degree(1, truncate=True).degree() == 0


def test_zero_padding_preserves_values():
    rng = np.random.default_rng(3)
    v = _rand_poly(rng, 2)
    w = v.fit_degree(6)
    assert w.max_degree == 6
    pts = rng.normal(size=(10, 2))
    for d, om in pts:
        assert w.eval(d, om) == v.eval(d, om)


def test_partial_matches_finite_difference():
    rng = np.random.default_rng(5)
    v = _rand_poly(rng, 4)
    h = 1e-6
    for d, w in rng.normal(size=(5, 2)):
        fd0 = (v.eval(d + h, w) - v.eval(d - h, w)) / (2 * h)
        fd1 = (v.eval(d, w + h) - v.eval(d, w - h)) / (2 * h)
        assert v.partial(0).eval(d, w) == pytest.approx(fd0, rel=1e-6,
                                                        abs=1e-6)
        assert v.partial(1).eval(d, w) == pytest.approx(fd1, rel=1e-6,
                                                        abs=1e-6)


def test_homogeneous_slices_reassemble():
    rng = np.random.default_rng(13)
    v = _rand_poly(rng, 4)
    total = Poly2.zero(4)
    for m in range(5):
        total = total.add(v.homogeneous_slice(m).to_poly(max_degree=4))
    assert np.allclose(total.coeffs, v.coeffs)


def test_taylor_linear_part_is_the_jacobian():
    """Degree-one field coefficients equal the frozen SEP Jacobian."""
    p = CircuitParams()
    sp = swing_params(network_equivalents(p), p)
    eq = equilibria(sp)
    f1, f2 = taylor_field(sp, eq.delta_sep, 6)
    assert f1.coeffs[0, 1] == 1.0
    assert f1.degree() == 1
    assert f2.coeffs[0, 0] == pytest.approx(0.0, abs=1e-9)
    assert f2.coeffs[1, 0] == pytest.approx(-96.26744926941858, rel=1e-10)
    assert f2.coeffs[0, 1] == pytest.approx(-9.626744926941857, rel=1e-10)


def test_taylor_truncation_error_scales_with_radius():
    """Max field error on a shrinking ball contracts at order m_t + 1."""
    p = CircuitParams()
    sp = swing_params(network_equivalents(p), p)
    eq = equilibria(sp)
    _, f2 = taylor_field(sp, eq.delta_sep, 6)
    a = eq.delta_sep - sp.theta1

    def exact(dtil, wtil):
        return (sp.p_m - sp.p_e * math.sin(dtil + a)
                - sp.d_c * math.cos(dtil + a) * wtil)

    def max_err(r):
        errs = []
        for th in np.linspace(0.0, 2 * math.pi, 16, endpoint=False):
            d, w = r * math.cos(th), r * math.sin(th)
            errs.append(abs(f2.eval(d, w) - exact(d, w)))
        return max(errs)

    e1, e2 = max_err(0.1), max_err(0.05)
    ratio = e1 / e2
    assert 64 < ratio < 256


def test_lie_operator_on_diagonal_matrix():
    """Diagonal B makes monomials eigenvectors with known eigenvalues."""
    L = lie_operator_matrix(np.diag([2.0, 3.0]), 2)
    assert np.allclose(L, np.diag([4.0, 5.0, 6.0]))


def test_lie_solve_inverts_the_operator():
    """The returned slice satisfies the operator equation."""
    rng = np.random.default_rng(17)
    b = np.array([[-1.0, 1.0], [-96.0, -9.6]])
    rhs = HomogeneousSlice(3, rng.normal(size=4))
    sol = lie_solve_homogeneous(b, 3, rhs)
    assert np.allclose(lie_operator_matrix(b, 3) @ sol.values, rhs.values,
                       atol=1e-9)


def test_lie_solve_identity_along_linear_field():
    """grad V . (B x) reproduces the requested right-hand side."""
    p = CircuitParams()
    sp = swing_params(network_equivalents(p), p)
    eq = equilibria(sp)
    f1, f2 = taylor_field(sp, eq.delta_sep, 1)
    b = np.array([[f1.coeffs[1, 0], f1.coeffs[0, 1]],
                  [f2.coeffs[1, 0], f2.coeffs[0, 1]]])
    rng = np.random.default_rng(19)
    rhs = HomogeneousSlice(4, rng.normal(size=5))
    v = lie_solve_homogeneous(b, 4, rhs).to_poly()
    lin1 = Poly2.from_terms({(1, 0): b[0, 0], (0, 1): b[0, 1]})
    lin2 = Poly2.from_terms({(1, 0): b[1, 0], (0, 1): b[1, 1]})
    lie = v.partial(0).mul(lin1).add(v.partial(1).mul(lin2))
    for d, w in rng.normal(size=(100, 2)):
        assert lie.eval(d, w) == pytest.approx(
            rhs.to_poly().eval(d, w), rel=1e-9, abs=1e-9)


def test_resonant_combination_is_rejected():
    """Opposite eigenvalues create a vanishing combination at even degree."""
    b = np.array([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(ResonanceError):
        lie_solve_homogeneous(b, 2, HomogeneousSlice(2, np.ones(3)))


def test_coefficient_dump_format():
    v = Poly2.from_terms({(2, 0): 1.0, (0, 1): -0.5})
    text = v.dump_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "i,j,c"
    assert all(len(line.split(",")) == 3 for line in lines[1:])
