"""Densities, kernels and quadrature against independent oracles."""

import math

import numpy as np
import pytest

from qchihara.families import asc_values, hermite_values, q_factorial_value
from qchihara.measures import (
    QuadPolicy,
    TruncationPolicy,
    conditional_moment_checks,
    density_asc,
    density_grid,
    density_mu,
    density_qhermite,
    hermite_bound_constant,
    integrate,
    kernel_agreement_checks,
    kernel_series_order,
    normalization_check,
    poisson_mehler,
    poisson_mehler_series,
    support_halfwidth,
    verify_chapman,
)


def test_semicircle_golden_values():
    """At q = 0 the weight is the semicircle sqrt(4 - x^2) / (2 pi)."""
    assert density_qhermite(0.0, 0.0) == pytest.approx(1 / math.pi, abs=1e-12)
    xs = np.linspace(-1.95, 1.95, 31)
    assert np.max(np.abs(density_qhermite(xs, 0.0) - np.sqrt(4 - xs**2) / (2 * math.pi))) < 1e-12


def test_support_edge_and_outside():
    q = 0.5
    halfwidth = support_halfwidth(q)
    # the density vanishes continuously at the edge (the rounded float
    # halfwidth may sit a hair inside the open support)
    assert 0.0 <= density_qhermite(halfwidth, q) < 1e-7
    assert density_qhermite(-halfwidth - 0.1, q) == 0.0
    assert density_qhermite(halfwidth + 1e-12, q) == 0.0
    near_edge = density_qhermite(halfwidth - 1e-8, q)
    assert 0 < near_edge < 1e-3


def test_incidental_unit_factor():
    # x^2 = 2/(1-q) makes the k = 0 product factor exactly 1; truncation
    # must not stop there (regression guard)
    q = 0.5
    xv = 2.0
    scalar = density_qhermite(xv, q)
    array = density_qhermite(np.array([xv, 0.0]), q)[0]
    assert scalar == pytest.approx(array, abs=1e-15)


def test_domain_validation():
    with pytest.raises(ValueError):
        density_qhermite(0.0, 1.5)
    with pytest.raises(ValueError):
        density_mu(0.0, 1.2, 0.0, 0.5)
    with pytest.raises(ValueError):
        density_mu(0.0, 0.5, 5.0, 0.5)  # y^2 (1-q) >= 4
    with pytest.raises(ValueError):
        density_asc(0.0, 0.4, 1.2, 0.5)
    with pytest.raises(ValueError):
        density_asc(0.0, 3.0, 0.25, 0.5)  # a^2(1-q) >= 4b
    with pytest.raises(ValueError):
        TruncationPolicy(epsilon=-1)
    with pytest.raises(ValueError):
        QuadPolicy(tol=0)


def test_mu_reduces_to_qhermite_at_rho_zero():
    xs = np.linspace(-2.5, 2.5, 41)
    assert np.max(np.abs(density_mu(xs, 0.0, 0.3, 0.5) - density_qhermite(xs, 0.5))) < 1e-12


def test_normalization_examples():
    assert normalization_check("qhermite", 0.5, tol=1e-8).passed
    assert normalization_check("mu", 0.5, rho=0.6, y=0.3).passed
    assert normalization_check("asc", 0.5, a=0.4, b=0.49).passed
    with pytest.raises(ValueError):
        normalization_check("nope", 0.5)


def test_conditional_moments_at_reference_point():
    checks = conditional_moment_checks(0.5, 0.6, 0.3, n_max=8, tol=1e-6)
    assert len(checks) == 8
    assert all(check.passed for check in checks)
    assert max(check.residual for check in checks) < 1e-9


def test_mu_symmetry_kernel():
    q, rho = 0.5, 0.6
    for xv in (-1.0, 0.2, 1.4):
        for yv in (-0.8, 0.0, 1.1):
            lhs = density_mu(xv, rho, yv, q) * density_qhermite(yv, q)
            rhs = density_mu(yv, rho, xv, q) * density_qhermite(xv, q)
            assert lhs == pytest.approx(rhs, abs=1e-9)


def test_poisson_mehler_trivial():
    assert poisson_mehler(0.3, -0.9, 0.0, 0.5) == 1.0
    assert poisson_mehler_series(0.3, -0.9, 0.0, 0.5, 0) == 1.0


def test_poisson_mehler_origin_agreement():
    order = kernel_series_order(0.5, 0.4, 1e-12)
    series = poisson_mehler_series(0.0, 0.0, 0.4, 0.5, order)
    product = poisson_mehler(0.0, 0.0, 0.4, 0.5)
    assert series == pytest.approx(product, abs=1e-9)


def test_poisson_mehler_grid():
    checks = kernel_agreement_checks(tol=1e-8)
    assert all(check.passed for check in checks)


def test_kernel_factorization():
    q, rho, yv = 0.3, 0.6, 0.8
    xs = np.linspace(-2.2, 2.2, 17)
    lhs = density_mu(xs, rho, yv, q)
    rhs = density_qhermite(xs, q) * poisson_mehler(xs, yv, rho, q)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_asc_equals_mu_reparameterized():
    q, av, bv = 0.5, 0.4, 0.49
    xs = np.linspace(-2.6, 2.6, 33)
    lhs = density_asc(xs, av, bv, q)
    rhs = density_mu(xs, math.sqrt(bv), av / math.sqrt(bv), q)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_asc_b_to_zero_probe():
    xs = np.array([-1.0, 0.0, 0.5])
    close = density_asc(xs, 0.0, 1e-3, 0.5)
    assert np.max(np.abs(close - density_qhermite(xs, 0.5))) < 1e-3


def test_asc_orthogonality_by_quadrature():
    q, av, bv = 0.5, 0.4, 0.49
    policy = QuadPolicy(tol=1e-9)
    for n in range(1, 7):
        for m in range(n):
            value = integrate(
                lambda xs: asc_values(n, xs, q, av, bv)[n]
                * asc_values(m, xs, q, av, bv)[m]
                * density_asc(xs, av, bv, q),
                q,
                policy,
            )
            assert abs(value) < 1e-6, (m, n, value)


def test_asc_norms_by_quadrature():
    """Squared norms against the telescoped prediction
    [n]_q! prod_i (1 - b q^(i-1))."""
    q, av, bv = 0.5, 0.4, 0.49
    policy = QuadPolicy(tol=1e-9)
    for n in range(6):
        value = integrate(
            lambda xs: asc_values(n, xs, q, av, bv)[n] ** 2 * density_asc(xs, av, bv, q),
            q,
            policy,
        )
        expected = q_factorial_value(n, q)
        for i in range(1, n + 1):
            expected *= 1 - bv * q ** (i - 1)
        assert value == pytest.approx(expected, abs=1e-6), n


def test_integrate_oracles():
    assert integrate(lambda xs: density_qhermite(xs, 0.0), 0.0) == pytest.approx(
        1.0, abs=1e-10
    )
    assert abs(integrate(lambda xs: xs * density_qhermite(xs, 0.5), 0.5)) < 1e-10
    assert (
        abs(
            integrate(
                lambda xs: hermite_values(2, xs, 0.5)[2] * density_qhermite(xs, 0.5), 0.5
            )
        )
        < 1e-8
    )


def test_integrate_nonconvergence_reported():
    policy = QuadPolicy(tol=1e-16, max_refinements=3, min_refinements=1)
    rng = np.random.default_rng(3)

    def noisy(xs):
        return rng.standard_normal(np.shape(xs))

    with pytest.raises(ArithmeticError):
        integrate(noisy, 0.5, policy)


def test_chapman_identity():
    check = verify_chapman(0.5, 0.6, 0.2, -0.4, 0.5, tol=1e-6)
    assert check.passed and check.residual < 1e-9
    assert verify_chapman(0.5, 0.6, 0.2, 0.2, 0.5, tol=1e-6).passed


def test_chapman_rho2_zero_reduction():
    q, rho1, xv, zv = 0.5, 0.5, 0.2, -0.4
    lhs = density_mu(zv, 0.0, xv, q)
    f_h = density_qhermite(zv, q)
    assert lhs == pytest.approx(f_h, abs=1e-12)
    rhs = integrate(
        lambda ys: density_mu(zv, rho1, ys, q) * density_mu(ys, 0.0, xv, q), q
    )
    assert rhs == pytest.approx(f_h, abs=1e-7)


@pytest.mark.parametrize("q", [-0.4, 0.0, 0.3, 0.7])
def test_nonnegativity_grid(q):
    halfwidth = support_halfwidth(q)
    xs = np.linspace(-halfwidth, halfwidth, 1000)
    assert np.min(density_qhermite(xs, q)) >= -1e-12
    assert np.min(density_mu(xs, 0.6, 0.8, q)) >= -1e-12
    assert np.min(density_asc(xs, 0.4, 0.49, q)) >= -1e-12


def test_truncation_cap_warns():
    policy = TruncationPolicy(epsilon=1e-15, max_factors=3)
    with pytest.warns(RuntimeWarning):
        density_qhermite(0.3, 0.7, policy)


def test_hermite_bound_constant_is_bound():
    q = 0.5
    const = hermite_bound_constant(q)
    halfwidth = support_halfwidth(q)
    xs = np.linspace(-halfwidth, halfwidth, 200)
    values = hermite_values(30, xs, q)
    for n, hn in enumerate(values):
        assert np.max(np.abs(hn)) <= const * (n + 1) * (1 - q) ** (-n / 2) + 1e-9


def test_density_grid_shapes():
    xs, ys = density_grid("mu", 0.5, points=50, rho=0.2, y=0.0)
    assert len(xs) == len(ys) == 50
    assert ys[0] < 1e-7 and ys[-1] < 1e-7  # density vanishes at the edges
    with pytest.raises(ValueError):
        density_grid("nope", 0.5)
