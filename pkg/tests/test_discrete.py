"""q > 1: exact existence classification and the finite measures."""

import math
from fractions import Fraction

import numpy as np
import pytest

from qchihara.discrete import (
    christoffel_weights,
    discrete_measure,
    divisibility_remainder,
    existence_check,
    jacobi_roots,
    norm_diagnostics,
    solve_weights,
    verify_discrete_solution,
    verify_divisibility,
)
from qchihara.families import asc_values, hermite_values


def test_existence_member():
    verdict = existence_check(Fraction(1, 4), 2)
    assert verdict.kind == "member" and verdict.m == 2
    assert existence_check(Fraction(1, 9), 3).m == 2
    assert existence_check(1, 2).m == 0  # boundary rho^2 = 1


def test_existence_zero_and_rejection():
    assert existence_check(0, 2).kind == "zero"
    verdict = existence_check(Fraction(1, 3), 2)
    assert verdict.kind == "no_solution"
    assert verdict.first_negative == 3  # 1 - (1/3) 2^2 < 0
    assert existence_check(2, 2).first_negative == 1  # rho^2 > 1 fails at once


def test_existence_is_exact_only():
    with pytest.raises(TypeError):
        existence_check(0.25, 2)
    with pytest.raises(TypeError):
        existence_check(Fraction(1, 4), 2.0)
    with pytest.raises(ValueError):
        existence_check(Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(ValueError):
        existence_check(-1, 2)


def test_jacobi_roots_degree_one():
    roots = jacobi_roots(0, 1.0, 0.7, 2.0)
    assert np.allclose(roots, [0.7])
    roots = jacobi_roots(0, -1.0, 0.7, 2.0)
    assert np.allclose(roots, [-0.7])


def test_jacobi_roots_hand_case():
    # m=1, q=2, y=0: p_2 = x^2 - (1 - 1/2), roots +- 1/sqrt(2)
    roots = jacobi_roots(1, 1 / math.sqrt(2), 0.0, 2.0)
    assert np.allclose(np.sort(roots), [-1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_jacobi_roots_distinct():
    roots = jacobi_roots(3, 2.0**-1.5, 0.5, 2.0)
    assert np.all(np.diff(roots) > 1e-8)


def test_jacobi_roots_validates_rho():
    with pytest.raises(ValueError):
        jacobi_roots(2, 0.9, 0.0, 2.0)
    with pytest.raises(ValueError):
        jacobi_roots(2, 0.5, 0.0, 0.5)


def test_solve_weights_hand_cases():
    measure = solve_weights(jacobi_roots(0, 1.0, 0.7, 2.0), 1.0, 0.7, 2.0)
    assert np.allclose(measure.weights, [1.0])
    assert measure.boundary_case
    rho = 1 / math.sqrt(2)
    measure = solve_weights(jacobi_roots(1, rho, 0.0, 2.0), rho, 0.0, 2.0)
    assert np.allclose(measure.weights, [0.5, 0.5])


def test_solve_weights_moment_verification():
    m, q, yv = 2, 2.0, 0.3
    rho = q ** (-m / 2)
    measure = solve_weights(jacobi_roots(m, rho, yv, q), rho, yv, q)
    h_y = hermite_values(2 * m + 2, yv, q)
    for n in range(1, 2 * m + 3):
        total = sum(
            lam * hermite_values(n, xj, q)[n]
            for lam, xj in zip(measure.weights, measure.support)
        )
        assert abs(total - rho**n * h_y[n]) < 1e-8, n


@pytest.mark.parametrize("q", [Fraction(3, 2), 2, 3])
@pytest.mark.parametrize("m", range(6))
def test_discrete_measure_properties(q, m):
    for yv in (0.0, 0.5, -0.5):
        measure = discrete_measure(m, q, yv)
        assert len(measure.support) == m + 1
        assert np.all(np.diff(measure.support) > 0)
        assert min(measure.weights) >= -1e-10
        assert abs(sum(measure.weights) - 1.0) <= 1e-10
        checks = verify_discrete_solution(measure, 2 * m + 4, tol=1e-7)
        assert all(check.passed for check in checks), (q, m, yv)


def test_christoffel_cross_check():
    for (m, q, yv) in [(2, 2.0, 0.3), (4, 1.5, -0.5), (5, 3.0, 0.5)]:
        rho = q ** (-m / 2)
        measure = discrete_measure(m, Fraction(q), yv)
        reference = christoffel_weights(m, rho, yv, q)
        assert np.max(np.abs(reference - np.array(measure.weights))) < 1e-8


def test_rho_sign_symmetry():
    minus = discrete_measure(2, 2, 0.5, rho_sign=-1)
    flipped = discrete_measure(2, 2, -0.5, rho_sign=1)
    assert np.allclose(minus.support, flipped.support)
    assert np.allclose(minus.weights, flipped.weights)
    plus = discrete_measure(2, 2, 0.5, rho_sign=1)
    assert np.allclose(np.sort(-np.array(minus.support)), plus.support)


def test_norm_diagnostics_match_direct_sums():
    measure = discrete_measure(3, 2, 0.3)
    diagnostics = norm_diagnostics(measure)
    assert diagnostics.norms[0] == 1.0
    assert diagnostics.first_negative_index is None
    for n in range(measure.m + 2):
        direct = sum(
            lam * asc_values(n, xj, measure.q, measure.rho * measure.y, measure.rho**2)[n] ** 2
            for lam, xj in zip(measure.weights, measure.support)
        )
        scale = max(1.0, abs(diagnostics.norms[n]))
        assert abs(direct - diagnostics.norms[n]) < 1e-8 * scale, n
    # the norm vanishes exactly at n = m + 1
    assert abs(diagnostics.norms[measure.m + 1]) < 1e-12


def test_norm_diagnostics_negative_index():
    measure = solve_weights(jacobi_roots(1, 0.5 ** 0.5, 0.0, 2.0), 0.5 ** 0.5, 0.0, 2.0)
    object.__setattr__(measure, "rho_sq_exact", Fraction(1, 3))
    diagnostics = norm_diagnostics(measure, n_max=4)
    assert diagnostics.first_negative_index == 3


def test_weight_nonnegativity_sweep():
    for q in (1.5, 2, 3):
        for m in range(6):
            for yv in (0.0, 0.5, -0.5, 1.0, -1.0):
                measure = discrete_measure(m, Fraction(q), yv)
                assert min(measure.weights) >= -1e-10, (q, m, yv)


def test_divisibility_exact():
    checks = verify_divisibility(m_max=4, q_values=(2, 3, Fraction(3, 2)))
    assert all(check.passed for check in checks)
    assert divisibility_remainder(3, 2).is_zero


def test_divisibility_requires_q_above_one():
    with pytest.raises(ValueError):
        divisibility_remainder(2, Fraction(1, 2))
    with pytest.raises(TypeError):
        divisibility_remainder(2, 2.0)


def test_measure_json_fields():
    measure = discrete_measure(1, 2, 0.5)
    payload = measure.as_dict()
    assert payload["n_points"] == 2
    assert payload["m"] == 1
    assert not payload["boundary_case"]
    assert len(payload["support"]) == len(payload["weights"]) == 2
