"""Connection formula, B/H duality, moment-functional orthogonality."""

import math
import random
from fractions import Fraction

import pytest

from qchihara import qcore
from qchihara.families import asc_poly, b_poly, hermite_poly, hermite_values
from qchihara.identities import (
    MomentFunctional,
    apply_functional,
    connection_rhs,
    predicted_norm,
    verify_duality,
    verify_connection,
    verify_orthogonality,
)
from qchihara.qcore import a, c, q, rho, x, y


def test_connection_hand_case_n1():
    # RHS at n=1 is H_1(x) - c H_1(a/c) = x - a = p_1
    assert connection_rhs(1) == x - a
    assert asc_poly(1, a, c**2) == x - a


def test_connection_exact_range():
    checks = verify_connection(10)
    assert len(checks) == 10
    assert all(check.passed for check in checks)


def test_connection_k0_term_vanishes():
    for n in range(1, 7):
        assert connection_rhs(n, from_k=0) == connection_rhs(n, from_k=1)


def test_connection_specialization_a0_c1():
    # a = 0, c = 1 pins p_n(x | q, 0, 1)
    for n in range(1, 8):
        lhs = asc_poly(n, 0, 1)
        rhs = connection_rhs(n).substitute("a", 0).substitute("c", 1)
        assert lhs == rhs


def test_connection_b0_specialization():
    """The c = 0 boundary: the homogenized identity extends continuously
    and pins p_n(x|q,a,0)."""
    for n in range(1, 7):
        assert asc_poly(n, a, 0) == connection_rhs(n).substitute("c", 0)


def test_duality_trivial_and_hand_case():
    checks = verify_duality(n_max=0)
    assert checks[0].passed  # n = 0: both sides are 1
    # n=1, q=0.64, x=1: LHS -1, RHS i * q^(-1/2) * (i sqrt(q)) = -1
    lhs = b_poly(1).evaluate(q=0.64, x=1.0)
    assert lhs == -1.0
    rhs = (1j) * 0.64 ** (-0.5) * hermite_values(1, 1j * math.sqrt(0.64) * 1.0, 1 / 0.64)[1]
    assert abs(lhs - rhs) < 1e-14


def test_duality_sweep():
    checks = verify_duality(n_max=8, tol=1e-9)
    assert len(checks) == 9
    assert all(check.passed for check in checks)
    assert max(check.residual for check in checks) < 1e-9


def test_duality_rejects_q_zero():
    with pytest.raises(ValueError):
        verify_duality(n_max=2, q_values=(0.0,))


def test_functional_action_examples():
    functional = MomentFunctional()
    assert functional.apply(hermite_poly(3)) == rho**3 * (y**3 - (2 + q) * y)
    assert functional.apply(qcore.ONE) == 1
    assert functional.apply(x**2) == rho**2 * (y**2 - 1) + 1
    assert apply_functional(functional, x) == rho * y


def test_functional_numeric_parameters():
    functional = MomentFunctional(rho=Fraction(1, 2), y=Fraction(1, 3))
    value = functional.apply(x**2)
    expected = Fraction(1, 4) * (Fraction(1, 9) - 1) + 1
    assert value.substitute("q", Fraction(1, 7)) == expected  # q-free here
    assert value.constant_value() == expected


def test_functional_linearity_random():
    rng = random.Random(99)
    functional = MomentFunctional()
    for _ in range(5):
        p1 = sum((rng.randint(-3, 3) * x**k for k in range(5)), qcore.ZERO)
        p2 = sum((rng.randint(-3, 3) * x**k for k in range(5)), qcore.ZERO)
        alpha, beta = rng.randint(-3, 3), rng.randint(-3, 3)
        assert functional.apply(alpha * p1 + beta * p2) == alpha * functional.apply(
            p1
        ) + beta * functional.apply(p2)


def test_orthogonality_hand_cases():
    functional = MomentFunctional()
    p1 = asc_poly(1, rho * y, rho**2)
    assert functional.apply(p1) == qcore.ZERO
    p2 = asc_poly(2, rho * y, rho**2)
    assert functional.apply(p2) == qcore.ZERO


def test_orthogonality_and_norms():
    checks = verify_orthogonality(8, 6)
    assert all(check.passed for check in checks)
    orth = [check for check in checks if "orthogonality" in check.check_id]
    assert len(orth) == 8 * 9 // 2


def test_predicted_norm_hand_case():
    functional = MomentFunctional()
    p1 = asc_poly(1, rho * y, rho**2)
    assert functional.apply(p1 * p1) == 1 - rho**2
    assert predicted_norm(1) == 1 - rho**2


def test_rho_zero_specialization():
    functional = MomentFunctional(rho=0)
    for n in range(1, 6):
        assert asc_poly(n, 0, 0) == hermite_poly(n)
        assert functional.apply(hermite_poly(n)) == qcore.ZERO
    assert functional.apply(qcore.ONE) == 1
