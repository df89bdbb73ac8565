"""Generating functions of the three families.

The formal series sum(t^n p_n / [n]_q!) never materializes rational
coefficients: each family is handled as the sequence of pairs
(p_n, [n]_q!) and every series identity is checked at the t^n
coefficient after clearing the q-factorials, i.e. in convolution form:

    sum_k [n k]_q B_{n-k}(x) H_k(x)              == 0          (n >= 1)
    sum_k [n k]_q c^(n-k) B_{n-k}(a/c) H_k(x)    == p_n(x|q,a,c^2)

where c^m B_m(a/c) is the homogenized (denominator-free) companion
polynomial.  The infinite-product closed forms

    f(t,x|q,a,b)  = prod_k (1-(1-q)atq^k+(1-q)bt^2q^(2k))
                           / (1-(1-q)xtq^k+(1-q)t^2q^(2k))
    phi(t,x|q)    = prod_k (1-(1-q)xtq^k+(1-q)t^2q^(2k))^(-1)
    psi(t,x|q)    = prod_k (1-(1-q)xtq^k+(1-q)t^2q^(2k))

are validated numerically against the truncated sums.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import qcore
from .families import (
    asc_poly,
    asc_values,
    b_homogenized,
    b_poly,
    b_values,
    hermite_poly,
    hermite_values,
)
from .qcore import MultiPoly, q_binomial, q_factorial
from .reporting import Check

__all__ = [
    "TruncatedSeries",
    "family_series",
    "verify_convolution_zero",
    "verify_expansion",
    "verify_generating_identities",
    "ProductCheck",
    "numeric_product_check",
    "default_factor_count",
]


class TruncatedSeries:
    """Formal power series in t truncated at a fixed order, with
    polynomial coefficients.  Arithmetic truncates at the smaller order
    of the two operands."""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients, order=None):
        coeffs = [co if isinstance(co, MultiPoly) else MultiPoly(co) for co in coefficients]
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            coeffs = coeffs[: order + 1]
            coeffs.extend([qcore.ZERO] * (order + 1 - len(coeffs)))
        elif not coeffs:
            raise ValueError("need at least one coefficient or an explicit order")
        self._coeffs = tuple(coeffs)

    @classmethod
    def one(cls, order):
        return cls([qcore.ONE], order=order)

    @property
    def order(self):
        return len(self._coeffs) - 1

    def coefficient(self, n):
        return self._coeffs[n]

    def coefficients(self):
        return self._coeffs

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], order=self.order)
        n = min(self.order, other.order)
        return TruncatedSeries(
            [self._coeffs[i] + other._coeffs[i] for i in range(n + 1)]
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-co for co in self._coeffs])

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], order=self.order)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries([other], order=self.order)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = qcore.ZERO
            for i in range(k + 1):
                acc = acc + self._coeffs[i] * other._coeffs[k - i]
            out.append(acc)
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def __repr__(self):
        inner = ", ".join(str(co) for co in self._coeffs)
        return f"TruncatedSeries([{inner}])"


def family_series(kind, order, a=None, b=None):
    """The generating-function data of one family up to t^order, as the
    tuple of pairs (p_n, [n]_q!) so that coefficient n is p_n / [n]_q!."""
    if kind == "hermite":
        polys = [hermite_poly(n) for n in range(order + 1)]
    elif kind == "b":
        polys = [b_poly(n) for n in range(order + 1)]
    elif kind == "asc":
        polys = [asc_poly(n, a, b) for n in range(order + 1)]
    else:
        raise ValueError("kind must be 'hermite', 'b' or 'asc'")
    return tuple((p, q_factorial(n)) for n, p in enumerate(polys))


def verify_convolution_zero(n_max):
    """Exact check that the B and Hermite generating functions multiply
    to 1: sum_k [n k]_q B_{n-k}(x) H_k(x) == 0 for 1 <= n <= n_max."""
    checks = []
    for n in range(1, n_max + 1):
        start = time.perf_counter()
        acc = qcore.ZERO
        for k in range(n + 1):
            acc = acc + q_binomial(n, k) * b_poly(n - k) * hermite_poly(k)
        checks.append(
            _exact_check(
                "identities",
                f"convolution-zero-n{n}",
                "sum_k [n k]_q B_(n-k)(x) H_k(x) = 0",
                acc,
                start,
            )
        )
    return checks


def verify_expansion(n_max):
    """Exact check of the connection-series product form:
    p_n(x|q,a,c^2) == sum_k [n k]_q c^(n-k) B_{n-k}(a/c) H_k(x)."""
    b_param = qcore.c**2
    checks = []
    for n in range(n_max + 1):
        start = time.perf_counter()
        rhs = qcore.ZERO
        for k in range(n + 1):
            rhs = rhs + q_binomial(n, k) * b_homogenized(n - k) * hermite_poly(k)
        residual = asc_poly(n, qcore.a, b_param) - rhs
        checks.append(
            _exact_check(
                "identities",
                f"expansion-n{n}",
                "p_n(x|q,a,c^2) = sum_k [n k]_q c^(n-k) B_(n-k)(a/c) H_k(x)",
                residual,
                start,
            )
        )
    return checks


def verify_generating_identities(n_max):
    """Coefficient-level verification of both generating-function
    identities (the factored connection series and psi*phi = 1)."""
    return verify_expansion(n_max) + verify_convolution_zero(n_max)


def _exact_check(suite, check_id, identity, residual, start):
    elapsed = (time.perf_counter() - start) * 1e3
    if residual.is_zero:
        return Check(suite, check_id, identity, True, residual=0.0, elapsed_ms=elapsed)
    return Check(
        suite,
        check_id,
        identity,
        False,
        residual=None,
        detail=f"nonzero residual polynomial: {residual}",
        elapsed_ms=elapsed,
    )


# -- numeric product/sum comparison ---------------------------------------

@dataclass(frozen=True)
class ProductCheck:
    which: str
    t: float
    x: float
    q: float
    a: float
    b: float
    n_terms: int
    k_factors: int
    product_value: float
    series_value: float
    abs_diff: float
    tol: float
    passed: bool


def default_factor_count(q, t, x, cap=200):
    """Smallest K with (1-q)(|x||t| + t^2)|q|^K < 1e-16 (geometric tail
    bound on the log-factors), capped."""
    bound = (1 - q) * (abs(x) * abs(t) + t * t)
    k = 1
    tail = abs(q)
    while k < cap and bound * tail >= 1e-16:
        tail *= abs(q)
        k += 1
    return k


def numeric_product_check(
    which,
    t,
    x,
    q,
    a=0.0,
    b=0.0,
    n_terms=40,
    k_factors=None,
    tol=1e-10,
    enforce_guard=True,
):
    """Compare an infinite-product generating function against its
    truncated power-series sum at a float point.

    ``which`` selects f ('asc'), phi ('hermite') or psi ('b').  The
    default convergence guard |t|(|x| + |t|)(1-q) < 0.5 is a design
    choice controllable via ``enforce_guard``.
    """
    if not -1 < q < 1:
        raise ValueError("product forms require |q| < 1")
    if enforce_guard and abs(t) * (abs(x) + abs(t)) * (1 - q) >= 0.5:
        raise ValueError(
            "convergence guard violated: |t|(|x|+|t|)(1-q) must be < 0.5"
        )
    if k_factors is None:
        k_factors = default_factor_count(q, t, x)

    product = 1.0
    for k in range(k_factors):
        den = 1 - (1 - q) * x * t * q**k + (1 - q) * t * t * q ** (2 * k)
        if which == "hermite":
            product /= den
        elif which == "b":
            product *= den
        elif which == "asc":
            num = 1 - (1 - q) * a * t * q**k + (1 - q) * b * t * t * q ** (2 * k)
            product *= num / den
        else:
            raise ValueError("which must be 'hermite', 'b' or 'asc'")

    if which == "hermite":
        values = hermite_values(n_terms, x, q)
    elif which == "b":
        values = b_values(n_terms, x, q)
    else:
        values = asc_values(n_terms, x, q, a, b)
    series = 0.0
    t_pow = 1.0
    fact = 1.0
    q_int_k = 0.0
    q_pow = 1.0
    for n, value in enumerate(values):
        if n:
            q_int_k += q_pow
            q_pow *= q
            fact *= q_int_k
            t_pow *= t
        series += t_pow * value / fact

    diff = abs(product - series)
    return ProductCheck(
        which, t, x, q, a, b, n_terms, k_factors, product, series, diff, tol, diff < tol
    )
