"""Connection, duality and moment-functional identities.

Three groups of results are verified here:

* the connection formula expressing p_n(x|q,a,c^2) through differences
  H_k(x) - c^k H_k(a/c), checked as an exact polynomial identity after
  homogenizing every a/c argument;

* the B_n <-> H_n duality at parameter 1/q, which involves sqrt(q) and i
  and is therefore checked numerically in complex arithmetic;

* the moment functional L with L(H_n) = rho^n H_n(y), against which the
  Al-Salam-Chihara family with a = rho*y, b = rho^2 is orthogonal, with
  norms L(p_n^2) = [n]_q! prod_i (1 - rho^2 q^(i-1)).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import sqrt

from . import qcore
from .families import (
    asc_poly,
    b_homogenized,
    b_poly,
    hermite_coefficients,
    hermite_homogenized,
    hermite_poly,
    hermite_values,
)
from .qcore import MultiPoly, as_finite_complex, q_binomial, q_factorial
from .reporting import Check

__all__ = [
    "MomentFunctional",
    "apply_functional",
    "verify_connection",
    "verify_duality",
    "verify_orthogonality",
    "predicted_norm",
    "connection_rhs",
]

_DEFAULT_Q_GRID = (0.49, -0.49, 0.81, -0.81)
_DEFAULT_X_GRID = (0.0, 0.7, 1.3)


@dataclass(frozen=True)
class MomentFunctional:
    """The linear functional on polynomials in x with L(H_n) = rho^n H_n(y).

    ``rho`` and ``y`` may be ring elements or exact scalars; they default
    to the ring symbols, giving fully symbolic values.
    """

    rho: MultiPoly = qcore.rho
    y: MultiPoly = qcore.y

    def __post_init__(self):
        if not isinstance(self.rho, MultiPoly):
            object.__setattr__(self, "rho", MultiPoly(self.rho))
        if not isinstance(self.y, MultiPoly):
            object.__setattr__(self, "y", MultiPoly(self.y))

    def apply(self, p):
        """L(p): expand p in the Hermite basis and map H_k to rho^k H_k(y)."""
        total = qcore.ZERO
        rho_pow = qcore.ONE
        for k, coeff in enumerate(hermite_coefficients(p)):
            if k:
                rho_pow = rho_pow * self.rho
            if not coeff.is_zero:
                total = total + coeff * rho_pow * hermite_poly(k).substitute("x", self.y)
        return total


def apply_functional(functional, p):
    """Convenience form of :meth:`MomentFunctional.apply`."""
    return functional.apply(p)


def connection_rhs(n, from_k=1):
    """sum_{k=from_k}^{n} [n k]_q c^(n-k) B_{n-k}(a/c) (H_k(x) - c^k H_k(a/c)),
    with all a/c arguments homogenized."""
    total = qcore.ZERO
    for k in range(from_k, n + 1):
        total = total + q_binomial(n, k) * b_homogenized(n - k) * (
            hermite_poly(k) - hermite_homogenized(k)
        )
    return total


def verify_connection(n_max):
    """Exact verification of the connection formula for 1 <= n <= n_max,
    symbolic in x, a, c, q with b = c^2."""
    b_param = qcore.c**2
    checks = []
    for n in range(1, n_max + 1):
        start = time.perf_counter()
        residual = asc_poly(n, qcore.a, b_param) - connection_rhs(n)
        elapsed = (time.perf_counter() - start) * 1e3
        if residual.is_zero:
            checks.append(
                Check(
                    "identities",
                    f"connection-n{n}",
                    "p_n(x|q,a,c^2) = sum_k [n k]_q c^(n-k) B_(n-k)(a/c) (H_k(x) - c^k H_k(a/c))",
                    True,
                    residual=0.0,
                    elapsed_ms=elapsed,
                )
            )
        else:
            checks.append(
                Check(
                    "identities",
                    f"connection-n{n}",
                    "connection formula",
                    False,
                    residual=None,
                    detail=f"first failing n={n}; residual: {residual}",
                    elapsed_ms=elapsed,
                )
            )
            break
    return checks


def verify_duality(n_max=8, q_values=_DEFAULT_Q_GRID, x_values=_DEFAULT_X_GRID, tol=1e-9):
    """Numeric verification of the duality between B_n at q and H_n at 1/q.

    For q > 0:  B_n(x|q) = i^n q^(n(n-2)/2) H_n(i sqrt(q) x | 1/q)
    For q < 0:  B_n(x|q) = (-1)^(n(n-1)/2) |q|^(n(n-2)/2) H_n(-sqrt(|q|) x | 1/q)
    """
    checks = []
    for n in range(n_max + 1):
        start = time.perf_counter()
        worst = 0.0
        worst_at = None
        for qv in q_values:
            if qv == 0:
                raise ValueError("duality requires q != 0")
            for xv in x_values:
                lhs = as_finite_complex(b_poly(n).evaluate(q=qv, x=xv))
                half_power = abs(qv) ** (n * (n - 2) / 2)
                if qv > 0:
                    arg = 1j * sqrt(qv) * xv
                    rhs = (1j**n) * half_power * hermite_values(n, arg, 1 / qv)[n]
                else:
                    arg = -sqrt(-qv) * xv
                    sign = -1 if (n * (n - 1) // 2) % 2 else 1
                    rhs = sign * half_power * hermite_values(n, arg, 1 / qv)[n]
                resid = abs(lhs - as_finite_complex(rhs))
                if resid > worst:
                    worst, worst_at = resid, (n, qv, xv)
        elapsed = (time.perf_counter() - start) * 1e3
        checks.append(
            Check(
                "identities",
                f"b-hermite-duality-n{n}",
                "B_n(x|q) matches the rescaled q-Hermite value at parameter 1/q",
                worst < tol,
                residual=worst,
                detail="" if worst < tol else f"worst at (n, q, x) = {worst_at}",
                elapsed_ms=elapsed,
            )
        )
    return checks


def predicted_norm(n):
    """[n]_q! prod_{i=1..n} (1 - rho^2 q^(i-1)), the predicted L(p_n^2)."""
    prod = q_factorial(n)
    for i in range(1, n + 1):
        prod = prod * (qcore.ONE - qcore.rho**2 * qcore.q ** (i - 1))
    return prod


def verify_orthogonality(n_max=8, norm_max=6):
    """Exact orthogonality of p_n(x | q, rho*y, rho^2) under the moment
    functional: L(p_k p_n) = 0 for k < n, plus the norm formula."""
    functional = MomentFunctional()
    a_param = qcore.rho * qcore.y
    b_param = qcore.rho**2
    polys = [asc_poly(n, a_param, b_param) for n in range(max(n_max, norm_max) + 1)]
    checks = []
    for n in range(1, n_max + 1):
        for k in range(n):
            start = time.perf_counter()
            residual = functional.apply(polys[k] * polys[n])
            elapsed = (time.perf_counter() - start) * 1e3
            checks.append(
                _exact(
                    f"orthogonality-k{k}-n{n}",
                    "L(p_k p_n) = 0 for the family with a = rho*y, b = rho^2",
                    residual,
                    elapsed,
                )
            )
    for n in range(1, norm_max + 1):
        start = time.perf_counter()
        residual = functional.apply(polys[n] * polys[n]) - predicted_norm(n)
        elapsed = (time.perf_counter() - start) * 1e3
        checks.append(
            _exact(
                f"norm-n{n}",
                "L(p_n^2) = [n]_q! prod_i (1 - rho^2 q^(i-1))",
                residual,
                elapsed,
            )
        )
    return checks


def _exact(check_id, identity, residual, elapsed):
    if residual.is_zero:
        return Check("identities", check_id, identity, True, residual=0.0, elapsed_ms=elapsed)
    return Check(
        "identities",
        check_id,
        identity,
        False,
        residual=None,
        detail=f"nonzero residual polynomial: {residual}",
        elapsed_ms=elapsed,
    )
