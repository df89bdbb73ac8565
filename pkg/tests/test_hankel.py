"""Hankel matrices, fraction-free determinants, ratio identities."""

import random

import pytest

from qchihara import qcore
from qchihara.hankel import (
    PolyMatrix,
    build_M,
    build_S,
    det_exact,
    moments_of_mu,
    predicted_m_ratio,
    predicted_s_ratio,
    telescoped_s_determinant,
    verify_moment_hankel,
    verify_hermite_hankel,
)
from qchihara.qcore import q, rho, x, y


def test_moments_examples():
    moments = moments_of_mu(3)
    assert moments[0] == 1
    assert moments[1] == rho * y
    assert moments[2] == rho**2 * (y**2 - 1) + 1


def test_moments_reconstruction_oracle():
    """m_3 is not asserted by hand; instead the defining expansion
    x^3 = sum a(3,2k) H_{3-2k} must reconstruct, and the moment must be
    the functional image of x^3."""
    from qchihara.families import monomial_to_hermite
    from qchihara.identities import MomentFunctional

    assert monomial_to_hermite(3).reconstruct() == x**3
    functional = MomentFunctional()
    assert moments_of_mu(3)[3] == functional.apply(x**3)


def test_build_matrices():
    s1 = build_S(1)
    assert s1.dimension == 1 and s1.entries == ((qcore.ONE,),)
    m2 = build_M(2)
    assert m2.entries == ((qcore.ONE, x), (x, x**2 - 1))
    assert m2.is_hankel()
    assert build_S(4).is_hankel()
    with pytest.raises(ValueError):
        build_S(0)
    with pytest.raises(ValueError):
        PolyMatrix(2, ((qcore.ONE,),))


def test_det_hand_cases():
    assert det_exact(build_M(1)) == 1
    assert det_exact(build_M(2)) == -1
    assert det_exact(build_S(2)) == 1 - rho**2


def test_det_triangular_oracle():
    entries = (
        (1 + q, x, y),
        (qcore.ZERO, x**2, rho),
        (qcore.ZERO, qcore.ZERO, 2 - q),
    )
    assert det_exact(PolyMatrix(3, entries)) == (1 + q) * x**2 * (2 - q)


def _cofactor_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = qcore.ZERO
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = rows[0][j] * _cofactor_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def test_det_matches_cofactor_on_random_matrices():
    rng = random.Random(4242)
    symbols = [qcore.ONE, q, x, rho, y, 1 + q, x - 1]
    for _ in range(4):
        rows = [
            [rng.choice(symbols) * rng.randint(-2, 2) for _ in range(4)]
            for _ in range(4)
        ]
        matrix = PolyMatrix(4, tuple(tuple(row) for row in rows))
        assert det_exact(matrix) == _cofactor_det(rows)


def test_det_with_zero_pivot_row_swap():
    entries = (
        (qcore.ZERO, qcore.ONE),
        (qcore.ONE, qcore.ZERO),
    )
    assert det_exact(PolyMatrix(2, entries)) == -1
    singular = PolyMatrix(2, ((qcore.ZERO, qcore.ZERO), (x, q)))
    assert det_exact(singular) == qcore.ZERO


def test_predicted_ratios():
    assert predicted_s_ratio(1) == 1 - rho**2
    assert predicted_s_ratio(2) == (1 + q) * (1 - rho**2) * (1 - rho**2 * q)
    assert predicted_m_ratio(1) == -1
    assert str(predicted_m_ratio(2)) == "q^2 + q"


def test_moment_hankel_ratios():
    checks, reports = verify_moment_hankel(4, with_reports=True)
    assert all(check.passed for check in checks)
    assert reports[0].det_n == 1 and reports[0].det_next == 1 - rho**2
    for report in reports:
        assert report.matches and report.constant_in == ("y",)


def test_hermite_hankel_ratios():
    checks, reports = verify_hermite_hankel(5, with_reports=True)
    assert all(check.passed for check in checks)
    assert reports[0].det_next == -1  # det M_2
    assert reports[1].det_next == -(q + q**2)  # det M_3 = -q(1+q)
    for report in reports:
        assert report.constant_in == ("x",)


def test_s_determinant_telescoping_and_rho_one():
    for n in range(1, 6):
        assert det_exact(build_S(n)) == telescoped_s_determinant(n)
    for n in range(2, 5):
        assert det_exact(build_S(n)).substitute("rho", 1).is_zero


def test_x_freeness_range():
    for n in range(1, 7):
        assert det_exact(build_M(n)).degree("x") <= 0
