"""Hankel matrices over the exact ring and their determinant ratios.

Two families of Hankel determinants are verified:

* S_n, built from the moments m_k(y) of the measure with Hermite
  moments rho^n H_n(y):  det S_{n+1} = [n]_q! prod_i (1 - rho^2 q^(i-1))
  * det S_n, and det S_n does not depend on y;

* M_n, with entries H_{i+j}(x|q):  det M_{n+1} = (-1)^n q^(n(n-1)/2)
  [n]_q! * det M_n, and det M_n does not depend on x.

Determinants are computed by fraction-free (Bareiss) elimination; every
interior division is exact by construction, so an inexact division is a
hard failure, not a tolerance question.  Ratio identities are verified
multiplicatively (det_next - predicted * det == 0), never by ring
division.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import qcore
from .families import monomial_to_hermite, hermite_poly
from .qcore import MultiPoly, q_factorial
from .reporting import Check

__all__ = [
    "PolyMatrix",
    "HankelReport",
    "moments_of_mu",
    "build_S",
    "build_M",
    "det_exact",
    "predicted_s_ratio",
    "predicted_m_ratio",
    "telescoped_s_determinant",
    "verify_moment_hankel",
    "verify_hermite_hankel",
]


@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix of ring elements; rows as a tuple of tuples."""

    dimension: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.dimension or any(
            len(row) != self.dimension for row in self.entries
        ):
            raise ValueError("entries must be a dimension x dimension grid")

    @classmethod
    def hankel(cls, values):
        """Hankel matrix from values v_0..v_{2n-2}: entry(i, j) = v_{i+j}."""
        if len(values) % 2 == 0:
            raise ValueError("need an odd number of antidiagonal values")
        n = (len(values) + 1) // 2
        rows = tuple(tuple(values[i + j] for j in range(n)) for i in range(n))
        return cls(n, rows)

    def is_hankel(self):
        return all(
            self.entries[i][j] == self.entries[i + 1][j - 1]
            for i in range(self.dimension - 1)
            for j in range(1, self.dimension)
        )


@dataclass(frozen=True)
class HankelReport:
    """One step of a determinant-ratio verification."""

    n: int
    det_n: MultiPoly
    det_next: MultiPoly
    predicted_ratio: MultiPoly
    matches: bool
    constant_in: tuple  # variables the determinant was checked to be free of


def moments_of_mu(n_max):
    """Moments m_k(y) = sum_i rho^(k-2i) a(k,2i) H_{k-2i}(y|q) of the
    conditional measure, for k = 0..n_max, as polynomials in rho, y, q."""
    moments = []
    for k in range(n_max + 1):
        expansion = monomial_to_hermite(k)
        total = qcore.ZERO
        for i, coeff in enumerate(expansion.coefficients):
            degree = k - 2 * i
            total = total + coeff * qcore.rho**degree * hermite_poly(degree).substitute(
                "x", qcore.y
            )
        moments.append(total)
    return moments


def build_S(n):
    """The n x n Hankel matrix of conditional-measure moments."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return PolyMatrix.hankel(tuple(moments_of_mu(2 * n - 2)))


def build_M(n):
    """The n x n Hankel matrix with entries H_{i+j}(x|q)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return PolyMatrix.hankel(tuple(hermite_poly(k) for k in range(2 * n - 1)))


def det_exact(matrix):
    """Exact determinant by Bareiss fraction-free elimination.

    Pivots are the leading principal entries, with row swaps (and sign
    tracking) on zero pivots; the division by the previous pivot must be
    exact, and a failure there raises ExactDivisionError (it would mean
    the elimination arithmetic is broken, not a property of the input).
    """
    n = matrix.dimension
    grid = [list(row) for row in matrix.entries]
    sign = 1
    previous = qcore.ONE
    for k in range(n - 1):
        if grid[k][k].is_zero:
            for i in range(k + 1, n):
                if not grid[i][k].is_zero:
                    grid[k], grid[i] = grid[i], grid[k]
                    sign = -sign
                    break
            else:
                return qcore.ZERO
        pivot = grid[k][k]
        divide = not previous.is_constant or previous.constant_value() != 1
        for i in range(k + 1, n):
            row_i = grid[i]
            row_k = grid[k]
            head = row_i[k]
            for j in range(k + 1, n):
                value = pivot * row_i[j] - head * row_k[j]
                row_i[j] = value.exact_div(previous) if divide else value
            row_i[k] = qcore.ZERO
        previous = pivot
    result = grid[n - 1][n - 1]
    return -result if sign < 0 else result


def predicted_s_ratio(n):
    """[n]_q! prod_{i=1..n} (1 - rho^2 q^(i-1))."""
    out = q_factorial(n)
    for i in range(1, n + 1):
        out = out * (qcore.ONE - qcore.rho**2 * qcore.q ** (i - 1))
    return out


def predicted_m_ratio(n):
    """(-1)^n q^(n(n-1)/2) [n]_q!."""
    out = qcore.q ** (n * (n - 1) // 2) * q_factorial(n)
    return -out if n % 2 else out


def telescoped_s_determinant(n):
    """det S_n from telescoping the ratio formula down to det S_1 = 1."""
    out = qcore.ONE
    for k in range(1, n):
        out = out * predicted_s_ratio(k)
    return out


def _ratio_checks(suite_id, dets, predicted, free_var, identity, n_max):
    checks = []
    reports = []
    for n in range(1, n_max + 1):
        start = time.perf_counter()
        prediction = predicted(n)
        residual = dets[n + 1] - prediction * dets[n]
        matches = residual.is_zero
        free_degree = dets[n].degree(free_var)
        free_ok = free_degree <= 0
        reports.append(
            HankelReport(
                n=n,
                det_n=dets[n],
                det_next=dets[n + 1],
                predicted_ratio=prediction,
                matches=matches,
                constant_in=(free_var,) if free_ok else (),
            )
        )
        elapsed = (time.perf_counter() - start) * 1e3
        detail = f"det_{n}={dets[n]}; det_{n + 1}={dets[n + 1]}; predicted ratio={prediction}"
        checks.append(
            Check(
                "hankel",
                f"{suite_id}-ratio-n{n}",
                identity,
                matches,
                residual=0.0 if matches else None,
                detail=detail if matches else f"{detail}; residual={residual}",
                elapsed_ms=elapsed,
            )
        )
        checks.append(
            Check(
                "hankel",
                f"{suite_id}-free-of-{free_var}-n{n}",
                f"det is free of the variable {free_var}",
                free_ok,
                residual=0.0 if free_ok else None,
                detail="" if free_ok else f"degree in {free_var} is {free_degree}",
                elapsed_ms=0.0,
            )
        )
    return checks, reports


def verify_moment_hankel(n_max=6, with_reports=False):
    """Moment-Hankel ratios det S_{n+1} / det S_n for n = 1..n_max,
    with the y-freeness of every det S_n."""
    dets = {1: det_exact(build_S(1))}
    for n in range(2, n_max + 2):
        dets[n] = det_exact(build_S(n))
    checks, reports = _ratio_checks(
        "moment-hankel",
        dets,
        predicted_s_ratio,
        "y",
        "det S_(n+1) = [n]_q! prod_i (1 - rho^2 q^(i-1)) det S_n",
        n_max,
    )
    return (checks, reports) if with_reports else checks


def verify_hermite_hankel(n_max=7, with_reports=False):
    """Hermite-Hankel ratios det M_{n+1} / det M_n for n = 1..n_max,
    with the x-freeness of every det M_n."""
    dets = {1: det_exact(build_M(1))}
    for n in range(2, n_max + 2):
        dets[n] = det_exact(build_M(n))
    checks, reports = _ratio_checks(
        "hermite-hankel",
        dets,
        predicted_m_ratio,
        "x",
        "det M_(n+1) = (-1)^n q^(n(n-1)/2) [n]_q! det M_n",
        n_max,
    )
    return (checks, reports) if with_reports else checks
