"""The q > 1 regime: existence classification and the finite discrete
measure whose Hermite moments are rho^n H_n(y|q).

For q > 1 a probability solution exists only when rho^2 lies in
{1, 1/q, 1/q^2, ...} (or rho = 0); existence is decided in exact
rational arithmetic by scanning the recurrence coefficients
1 - rho^2 q^(n-1).  When rho^2 = q^(-m) the solution is supported on
the m+1 roots of p_{m+1}, where p_n is the Al-Salam-Chihara family with
a = rho*y, b = rho^2:

    p_{n+1} = (x - rho*y*q^n) p_n - [n]_q (1 - rho^2 q^(n-1)) p_{n-1}.

Support points come from the symmetrized Jacobi matrix, weights from
the moment system sum(lambda_j p_k(x_j)) = delta_{k0}.  Verifying the
moment identity up to n = 2m+4 at q = 3, m = 5 involves catastrophic
cancellation far beyond float64 (individual terms reach ~1e20 while
the sum is O(1)), so the measure is additionally carried at high
precision (mpmath) and residuals are evaluated there; the public
support/weights fields stay float64.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import qcore
from .families import asc_values, hermite_values, q_int_value
from .reporting import Check

__all__ = [
    "ExistenceVerdict",
    "existence_check",
    "DiscreteMeasure",
    "NormDiagnostics",
    "jacobi_roots",
    "solve_weights",
    "christoffel_weights",
    "discrete_measure",
    "verify_discrete_solution",
    "norm_diagnostics",
    "divisibility_remainder",
    "verify_divisibility",
]

_WEIGHT_TOL = 1e-10
_DEFAULT_DPS = 60


@dataclass(frozen=True)
class ExistenceVerdict:
    """Existence classification for given (rho^2, q > 1).

    kind is 'member' (rho^2 = q^(-m): finite measure on m+1 points),
    'zero' (rho = 0), or 'no_solution' with the first index n at which
    the recurrence coefficient 1 - rho^2 q^(n-1) turns negative.
    """

    kind: str
    m: int | None = None
    first_negative: int | None = None


def _exact(value, name):
    if isinstance(value, float):
        raise TypeError(
            f"{name} must be exact (int or Fraction); floats would silently "
            "misclassify membership"
        )
    return Fraction(value)


def existence_check(rho_sq, q, n_max=10_000):
    """Classify (rho^2, q) in exact rational arithmetic.

    ``n_max`` bounds the scan; since the coefficients 1 - rho^2 q^(n-1)
    hit zero or turn negative at n ~ 1 + log_q(1/rho^2), it is a safety
    cap, not a tuning knob.
    """
    rho_sq = _exact(rho_sq, "rho_sq")
    q = _exact(q, "q")
    if q <= 1:
        raise ValueError("this classification applies to q > 1")
    if rho_sq < 0:
        raise ValueError("rho_sq must be >= 0")
    if rho_sq == 0:
        return ExistenceVerdict("zero")
    q_pow = Fraction(1)
    for n in range(1, n_max + 1):
        coeff = 1 - rho_sq * q_pow
        if coeff == 0:
            return ExistenceVerdict("member", m=n - 1)
        if coeff < 0:
            return ExistenceVerdict("no_solution", first_negative=n)
        q_pow *= q
    raise ArithmeticError(f"classification did not resolve within n_max={n_max}")


@dataclass(frozen=True)
class NormDiagnostics:
    """Squared norms of p_n under the measure, from the recurrence
    norms[n] = [n]_q (1 - rho^2 q^(n-1)) norms[n-1]; they vanish at
    n = m+1."""

    norms: tuple
    first_negative_index: int | None


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite measure sum(lambda_j delta_{x_j}) solving the Hermite
    moment problem for q > 1, rho^2 = q^(-m).

    ``boundary_case`` flags m = 0 (rho^2 = 1), where the measure is the
    single point mass at rho*y.
    """

    support: tuple
    weights: tuple
    q: float
    rho: float
    y: float
    m: int
    rho_sq_exact: Fraction
    boundary_case: bool
    mp_support: tuple = field(default=(), repr=False, compare=False)
    mp_weights: tuple = field(default=(), repr=False, compare=False)
    dps: int = field(default=0, repr=False, compare=False)

    def as_dict(self):
        return {
            "support": list(self.support),
            "weights": list(self.weights),
            "q": self.q,
            "rho": self.rho,
            "y": self.y,
            "m": self.m,
            "n_points": len(self.support),
            "boundary_case": self.boundary_case,
        }


def _recurrence_coeffs(m, rho_sq, q):
    """Diagonal rho*y*q^n terms are built by callers; here the squared
    off-diagonals beta_n = [n]_q (1 - rho^2 q^(n-1)) for n = 1..m."""
    return [q_int_value(n, q) * (1 - rho_sq * q ** (n - 1)) for n in range(1, m + 1)]


def _validate_rho(m, rho, q):
    if abs(rho * rho * q**m - 1.0) > 1e-9:
        raise ValueError(f"rho^2 must equal q^(-m); got rho^2={rho * rho}, q^-m={q ** -m}")


def jacobi_roots(m, rho, y, q):
    """The m+1 roots of p_{m+1}, ascending, as eigenvalues of the
    symmetrized tridiagonal recurrence matrix."""
    if q <= 1:
        raise ValueError("q > 1 required")
    _validate_rho(m, rho, q)
    betas = _recurrence_coeffs(m, rho * rho, q)
    if any(beta <= 0 for beta in betas):
        raise ValueError(
            "symmetrization failed: a recurrence coefficient is not positive "
            "(rho^2 is not q^(-m) with m in range)"
        )
    diag = np.array([rho * y * q**n for n in range(m + 1)])
    off = np.sqrt(np.array(betas)) if m else np.zeros(0)
    matrix = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    return np.sort(np.linalg.eigvalsh(matrix))


def christoffel_weights(m, rho, y, q):
    """Quadrature weights as squared first components of the normalized
    eigenvectors of the Jacobi matrix (cross-check for solve_weights)."""
    _validate_rho(m, rho, q)
    betas = _recurrence_coeffs(m, rho * rho, q)
    diag = np.array([rho * y * q**n for n in range(m + 1)])
    off = np.sqrt(np.array(betas)) if m else np.zeros(0)
    matrix = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    eigenvalues, vectors = np.linalg.eigh(matrix)
    order = np.argsort(eigenvalues)
    return (vectors[0, order] ** 2)


def solve_weights(support, rho, y, q):
    """Weights from the (m+1)x(m+1) moment system: row k demands
    sum_j lambda_j p_k(x_j) = delta_{k0} (float64 path)."""
    support = np.asarray(support, dtype=float)
    n_points = len(support)
    m = n_points - 1
    rows = asc_values(m, support, q, rho * y, rho * rho)
    matrix = np.vstack([np.asarray(r, dtype=float) * np.ones_like(support) for r in rows])
    rhs = np.zeros(n_points)
    rhs[0] = 1.0
    weights = np.linalg.solve(matrix, rhs)
    _validate_weights(weights)
    rho_sq = Fraction(rho * rho).limit_denominator(10**12)
    return DiscreteMeasure(
        support=tuple(float(v) for v in support),
        weights=tuple(float(w) for w in weights),
        q=float(q),
        rho=float(rho),
        y=float(y),
        m=m,
        rho_sq_exact=rho_sq,
        boundary_case=(m == 0),
    )


def _validate_weights(weights):
    weights = np.asarray(weights, dtype=float)
    if np.min(weights) < -_WEIGHT_TOL:
        raise ArithmeticError(f"negative weight beyond tolerance: {np.min(weights)}")
    if abs(float(np.sum(weights)) - 1.0) > _WEIGHT_TOL:
        raise ArithmeticError(f"weights sum to {np.sum(weights)}, not 1")


def _mp_asc_with_derivative(n, xval, q, a, b):
    """(p_n(x), p_n'(x)) via the recurrence and its derivative."""
    p_prev, p_cur = mpmath.mpf(0), mpmath.mpf(1)
    d_prev, d_cur = mpmath.mpf(0), mpmath.mpf(0)
    for k in range(n):
        alpha = a * q**k
        beta = (1 - b * q ** (k - 1)) * q_int_value(k, q) if k >= 1 else mpmath.mpf(0)
        p_nxt = (xval - alpha) * p_cur - beta * p_prev
        d_nxt = p_cur + (xval - alpha) * d_cur - beta * d_prev
        p_prev, p_cur = p_cur, p_nxt
        d_prev, d_cur = d_cur, d_nxt
    return p_cur, d_cur


def discrete_measure(m, q, y, rho_sign=1, dps=_DEFAULT_DPS):
    """Construct the m+1 point solution for rho = rho_sign * q^(-m/2).

    Float64 eigenvalues seed Newton iterations at ``dps`` digits on the
    recurrence-evaluated p_{m+1}; the weight system is solved at the
    same precision.  Public fields are float64 projections.
    """
    if rho_sign not in (1, -1):
        raise ValueError("rho_sign must be +1 or -1")
    q_exact = _exact(q, "q")
    if q_exact <= 1:
        raise ValueError("q > 1 required")
    rho_sq = Fraction(1) / q_exact**m
    rho_float = rho_sign * math.sqrt(float(rho_sq))
    seeds = jacobi_roots(m, rho_float, y, float(q_exact))

    with mpmath.workdps(dps):
        q_mp = mpmath.mpf(q_exact.numerator) / q_exact.denominator
        rho_mp = rho_sign * mpmath.sqrt(mpmath.mpf(rho_sq.numerator) / rho_sq.denominator)
        y_mp = mpmath.mpf(y)
        a_mp = rho_mp * y_mp
        b_mp = rho_mp * rho_mp
        roots = []
        for seed in seeds:
            root = mpmath.mpf(float(seed))
            for _ in range(80):
                value, slope = _mp_asc_with_derivative(m + 1, root, q_mp, a_mp, b_mp)
                step = value / slope
                root = root - step
                if abs(step) < mpmath.mpf(10) ** (-(dps - 5)):
                    break
            roots.append(root)
        roots.sort()
        if any(roots[i + 1] - roots[i] <= 0 for i in range(m)):
            raise ArithmeticError("support points failed to separate")
        rows = []
        for k in range(m + 1):
            rows.append([_mp_asc_with_derivative(k, r, q_mp, a_mp, b_mp)[0] for r in roots])
        matrix = mpmath.matrix(rows)
        rhs = mpmath.matrix([1] + [0] * m)
        weights = mpmath.lu_solve(matrix, rhs)
        mp_support = tuple(roots)
        mp_weights = tuple(weights[i] for i in range(m + 1))

    weights_float = np.array([float(w) for w in mp_weights])
    _validate_weights(weights_float)
    return DiscreteMeasure(
        support=tuple(float(r) for r in mp_support),
        weights=tuple(weights_float),
        q=float(q_exact),
        rho=rho_float,
        y=float(y),
        m=m,
        rho_sq_exact=rho_sq,
        boundary_case=(m == 0),
        mp_support=mp_support,
        mp_weights=mp_weights,
        dps=dps,
    )


def verify_discrete_solution(measure, n_check, tol=1e-7):
    """Residuals of sum_j lambda_j H_n(x_j) = rho^n H_n(y) for
    n = 1..n_check, evaluated at the measure's precision."""
    start = time.perf_counter()
    label = f"m={measure.m},q={measure.q},y={measure.y}"
    if measure.mp_support:
        with mpmath.workdps(max(measure.dps, 30)):
            q_mp = mpmath.mpf(measure.q)
            sign = 1 if measure.rho >= 0 else -1
            rho_mp = sign * mpmath.sqrt(
                mpmath.mpf(measure.rho_sq_exact.numerator)
                / measure.rho_sq_exact.denominator
            )
            y_mp = mpmath.mpf(measure.y)
            h_at_y = hermite_values(n_check, y_mp, q_mp)
            h_at_x = [hermite_values(n_check, xj, q_mp) for xj in measure.mp_support]
            worst, worst_n = 0.0, None
            for n in range(1, n_check + 1):
                total = mpmath.mpf(0)
                for lam, hx in zip(measure.mp_weights, h_at_x):
                    total += lam * hx[n]
                residual = abs(total - rho_mp**n * h_at_y[n])
                if float(residual) > worst:
                    worst, worst_n = float(residual), n
    else:
        h_at_y = hermite_values(n_check, measure.y, measure.q)
        worst, worst_n = 0.0, None
        for n in range(1, n_check + 1):
            total = 0.0
            for lam, xj in zip(measure.weights, measure.support):
                total += lam * hermite_values(n, xj, measure.q)[n]
            residual = abs(total - measure.rho**n * h_at_y[n])
            if residual > worst:
                worst, worst_n = residual, n
    elapsed = (time.perf_counter() - start) * 1e3
    passed = worst < tol
    return [
        Check(
            "discrete",
            f"moment-identity[{label}]",
            f"sum_j lambda_j H_n(x_j) = rho^n H_n(y) for n <= {n_check}",
            passed,
            residual=worst,
            detail="" if passed else f"worst residual at n={worst_n}",
            elapsed_ms=elapsed,
        )
    ]


def norm_diagnostics(measure, n_max=None):
    """Norm recursion values and the first negative coefficient index.

    norms[n] = [n]_q (1 - rho^2 q^(n-1)) norms[n-1]; for rho^2 = q^(-m)
    the sequence vanishes at n = m+1 and stays zero.
    """
    if n_max is None:
        n_max = measure.m + 1
    q = measure.q
    rho_sq = float(measure.rho_sq_exact)
    norms = [1.0]
    first_negative = None
    for n in range(1, n_max + 1):
        coeff = 1.0 - rho_sq * q ** (n - 1)
        if coeff < 0 and first_negative is None:
            first_negative = n
        norms.append(q_int_value(n, q) * coeff * norms[-1])
    return NormDiagnostics(tuple(norms), first_negative)


def divisibility_remainder(m, q_exact):
    """Exact remainder of p_{m+2} modulo p_{m+1} with rho^2 = q^(-m).

    q is instantiated as an exact rational (negative q powers are not
    ring elements) while the product rho*y stays the symbol a; the
    remainder is identically zero.
    """
    q_exact = _exact(q_exact, "q")
    if q_exact <= 1:
        raise ValueError("q > 1 required")
    b_val = Fraction(1) / q_exact**m
    a_sym = qcore.a
    polys = [qcore.ONE, qcore.x - a_sym]
    for k in range(1, m + 2):
        alpha = a_sym * (q_exact**k)
        beta = (1 - b_val * q_exact ** (k - 1)) * q_int_value(k, q_exact)
        polys.append((qcore.x - alpha) * polys[k] - beta * polys[k - 1])
    _, remainder = polys[m + 2].divmod_in("x", polys[m + 1])
    return remainder


def verify_divisibility(m_max=4, q_values=(2, 3, Fraction(3, 2))):
    """p_{m+2} is exactly divisible by p_{m+1} when rho^2 = q^(-m)."""
    checks = []
    for q_value in q_values:
        for m in range(m_max + 1):
            start = time.perf_counter()
            remainder = divisibility_remainder(m, q_value)
            elapsed = (time.perf_counter() - start) * 1e3
            ok = remainder.is_zero
            checks.append(
                Check(
                    "discrete",
                    f"divisibility[m={m},q={q_value}]",
                    "p_(m+2) is divisible by p_(m+1) at rho^2 = q^(-m)",
                    ok,
                    residual=0.0 if ok else None,
                    detail="" if ok else f"remainder: {remainder}",
                    elapsed_ms=elapsed,
                )
            )
    return checks
