"""Densities and kernels for the |q| < 1 regime, with quadrature.

All three weight functions live on the interval x^2 < 4/(1-q):

* the q-Hermite density f_H;
* the conditional density mu(.|rho, y) whose Hermite moments are
  rho^n H_n(y|q), equal to f_H(x) g_H(x, y, rho) where g_H is the
  Poisson-Mehler kernel;
* the Al-Salam-Chihara density for parameters 0 < b < 1, a^2(1-q) < 4b,
  equal to mu(.|sqrt(b), a/sqrt(b)).

Infinite products are evaluated by summing logarithms of factors,
truncated once a factor deviates from 1 by less than
epsilon * (1 - |q|) (geometric tail bound).  Integrals use the cosine
substitution x = 2 cos(theta)/sqrt(1-q), which removes the inverse
square-root edge behaviour, followed by Romberg refinement.

Density functions broadcast over numpy arrays in both the x and y
slots; scalars in give scalars out.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .families import hermite_values
from .reporting import Check

__all__ = [
    "TruncationPolicy",
    "QuadPolicy",
    "support_halfwidth",
    "density_qhermite",
    "density_mu",
    "density_asc",
    "poisson_mehler",
    "poisson_mehler_series",
    "kernel_series_order",
    "hermite_bound_constant",
    "integrate",
    "verify_chapman",
    "normalization_check",
    "conditional_moment_checks",
    "kernel_agreement_checks",
    "density_consistency_checks",
    "density_grid",
]

_DEFAULT_EPS = 1e-15
_DEFAULT_MAX_FACTORS = 500


@dataclass(frozen=True)
class TruncationPolicy:
    """Infinite-product truncation: stop at the first factor within
    epsilon*(1-|q|) of 1, or at max_factors with a warning."""

    epsilon: float = _DEFAULT_EPS
    max_factors: int = _DEFAULT_MAX_FACTORS

    def __post_init__(self):
        if self.epsilon <= 0 or self.max_factors < 1:
            raise ValueError("epsilon must be > 0 and max_factors >= 1")


@dataclass(frozen=True)
class QuadPolicy:
    """Romberg refinement control for :func:`integrate`."""

    tol: float = 1e-10
    max_refinements: int = 16
    min_refinements: int = 4

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if not 1 <= self.min_refinements <= self.max_refinements:
            raise ValueError("need 1 <= min_refinements <= max_refinements")


_DEFAULT_TRUNCATION = TruncationPolicy()
_DEFAULT_QUAD = QuadPolicy()


def support_halfwidth(q):
    """Half-width 2/sqrt(1-q) of the common support interval."""
    _require(-1 < q < 1, f"|q| < 1 required, got q={q}")
    return 2.0 / math.sqrt(1.0 - q)


def _require(condition, message):
    if not condition:
        raise ValueError(message)


def _log_product(factor, policy, q):
    """Sum of log(factor(k)) truncated per the policy; factor(k) may
    return scalars or arrays (the deviation test uses the worst point).

    Truncation needs two consecutive factors within threshold of 1: a
    single factor can cross 1 incidentally (e.g. the k = 0 factor of the
    q-Hermite weight at x^2 = 2/(1-q)) long before the tail has decayed.
    """
    threshold = policy.epsilon * (1.0 - abs(q))
    total = 0.0
    previous_small = False
    for k in range(policy.max_factors):
        f = factor(k)
        if np.any(f <= 0.0):
            raise ArithmeticError(
                "nonpositive product factor; parameters outside the valid domain"
            )
        total = total + np.log(f)
        small = bool(np.max(np.abs(f - 1.0)) < threshold)
        if small and previous_small:
            return total
        previous_small = small
    warnings.warn("infinite product truncated at max_factors", RuntimeWarning)
    return total


def _edge_prefactor(xs, q):
    """sqrt(1-q) / (2 pi sqrt(4 - (1-q) x^2)) on points inside the support."""
    return math.sqrt(1.0 - q) / (2.0 * math.pi * np.sqrt(4.0 - (1.0 - q) * xs * xs))


def density_qhermite(x, q, policy=None):
    """The q-Hermite weight f_H at x (0 outside the open support)."""
    _require(-1 < q < 1, f"|q| < 1 required, got q={q}")
    policy = policy or _DEFAULT_TRUNCATION
    xarr, scalar = _as_array(x)
    out = np.zeros_like(xarr)
    inside = xarr * xarr < 4.0 / (1.0 - q)
    if np.any(inside):
        xs = xarr[inside]

        def factor(k):
            qk = q**k
            return ((1.0 + qk) ** 2 - (1.0 - q) * xs * xs * qk) * (1.0 - q ** (k + 1))

        out[inside] = _edge_prefactor(xs, q) * np.exp(_log_product(factor, policy, q))
    return float(out[()]) if scalar else out


def _validate_mu_params(rho, y, q):
    _require(-1 < q < 1, f"|q| < 1 required, got q={q}")
    _require(abs(rho) < 1, f"|rho| < 1 required, got rho={rho}")
    _require(
        np.all(np.asarray(y) ** 2 * (1.0 - q) < 4.0),
        f"y^2 (1-q) < 4 required, got y={y}",
    )


def density_mu(x, rho, y, q, policy=None):
    """Density of the measure with Hermite moments rho^n H_n(y|q)."""
    _validate_mu_params(rho, y, q)
    policy = policy or _DEFAULT_TRUNCATION
    xarr, yarr, scalar = _as_pair(x, y)
    out = np.zeros(np.broadcast(xarr, yarr).shape)
    inside = np.broadcast_to(xarr * xarr < 4.0 / (1.0 - q), out.shape)
    if np.any(inside):
        xs = np.broadcast_to(xarr, out.shape)[inside]
        ys = np.broadcast_to(yarr, out.shape)[inside]

        def factor(k):
            qk = q**k
            q2k = q ** (2 * k)
            num = (
                (1.0 - rho * rho * qk)
                * (1.0 - q ** (k + 1))
                * ((1.0 + qk) ** 2 - (1.0 - q) * xs * xs * qk)
            )
            den = (
                (1.0 - rho * rho * q2k) ** 2
                - (1.0 - q) * rho * qk * (1.0 + rho * rho * q2k) * xs * ys
                + (1.0 - q) * rho * rho * (xs * xs + ys * ys) * q2k
            )
            return num / den

        out[inside] = _edge_prefactor(xs, q) * np.exp(_log_product(factor, policy, q))
    return float(out[()]) if scalar else out


def density_asc(x, a, b, q, policy=None):
    """The Al-Salam-Chihara weight for parameters (a, b), 0 < b < 1."""
    _require(-1 < q < 1, f"|q| < 1 required, got q={q}")
    _require(0 < b < 1, f"0 < b < 1 required, got b={b}")
    _require(a * a * (1.0 - q) < 4.0 * b, f"a^2 (1-q) < 4b required, got a={a}, b={b}")
    policy = policy or _DEFAULT_TRUNCATION
    xarr, scalar = _as_array(x)
    out = np.zeros_like(xarr)
    inside = xarr * xarr < 4.0 / (1.0 - q)
    if np.any(inside):
        xs = xarr[inside]

        def factor(k):
            qk = q**k
            q2k = q ** (2 * k)
            num = (
                (1.0 - b * qk)
                * (1.0 - q ** (k + 1))
                * ((1.0 + qk) ** 2 - (1.0 - q) * xs * xs * qk)
            )
            den = (
                (1.0 - b * q2k) ** 2
                - (1.0 - q) * a * qk * (1.0 + b * q2k) * xs
                + (1.0 - q) * (b * xs * xs + a * a) * q2k
            )
            return num / den

        out[inside] = _edge_prefactor(xs, q) * np.exp(_log_product(factor, policy, q))
    return float(out[()]) if scalar else out


def poisson_mehler(x, y, rho, q, policy=None):
    """Product form of the Poisson-Mehler kernel g_H(x, y, rho)."""
    _require(-1 < q < 1, f"|q| < 1 required, got q={q}")
    _require(abs(rho) < 1, f"|rho| < 1 required, got rho={rho}")
    sup = 4.0 / (1.0 - q)
    _require(np.all(np.asarray(x) ** 2 <= sup), "x^2 <= 4/(1-q) required")
    _require(np.all(np.asarray(y) ** 2 <= sup), "y^2 <= 4/(1-q) required")
    policy = policy or _DEFAULT_TRUNCATION
    xarr, yarr, scalar = _as_pair(x, y)
    xs, ys = np.broadcast_arrays(xarr, yarr)

    def factor(k):
        qk = q**k
        q2k = q ** (2 * k)
        den = (
            (1.0 - rho * rho * q2k) ** 2
            - (1.0 - q) * rho * qk * (1.0 + rho * rho * q2k) * xs * ys
            + (1.0 - q) * rho * rho * (xs * xs + ys * ys) * q2k
        )
        return (1.0 - rho * rho * qk) / den

    value = np.exp(_log_product(factor, policy, q)) * np.ones_like(xs, dtype=float)
    return float(value[()]) if scalar else value


def poisson_mehler_series(x, y, rho, q, n_terms):
    """Series form sum_n rho^n H_n(x) H_n(y) / [n]_q! truncated at n_terms."""
    _require(-1 < q < 1, f"|q| < 1 required, got q={q}")
    xarr, yarr, scalar = _as_pair(x, y)
    xs, ys = np.broadcast_arrays(xarr, yarr)
    hx = hermite_values(n_terms, xs, q)
    hy = hermite_values(n_terms, ys, q)
    total = np.zeros_like(xs, dtype=float)
    rho_pow = 1.0
    fact = 1.0
    q_int_k = 0.0
    q_pow = 1.0
    for n in range(n_terms + 1):
        if n:
            q_int_k += q_pow
            q_pow *= q
            fact *= q_int_k
            rho_pow *= rho
        total = total + rho_pow * hx[n] * hy[n] / fact
    return float(total[()]) if scalar else total


@lru_cache(maxsize=None)
def hermite_bound_constant(q, n_probe=40, grid_points=1000):
    """Empirical constant C with |H_n(x)| <= C (n+1) (1-q)^(-n/2) on the
    support, probed over a grid (the uniform bound has no published
    constant)."""
    _require(-1 < q < 1, f"|q| < 1 required, got q={q}")
    halfwidth = support_halfwidth(q)
    xs = np.linspace(-halfwidth, halfwidth, grid_points)
    values = hermite_values(n_probe, xs, q)
    scale = math.sqrt(1.0 - q)
    best = 0.0
    for n, hn in enumerate(values):
        best = max(best, float(np.max(np.abs(hn))) * scale**n / (n + 1))
    return best


def kernel_series_order(q, rho, tol, cap=400):
    """Truncation order for the kernel series from the term bound
    C^2 (n+1)^2 |rho|^n (1-q)^(-n) / [n]_q!."""
    if rho == 0:
        return 0
    const = hermite_bound_constant(q) ** 2
    ratio = abs(rho) / (1.0 - q)
    term = const
    fact = 1.0
    q_int_k = 0.0
    q_pow = 1.0
    for n in range(1, cap + 1):
        q_int_k += q_pow
        q_pow *= q
        fact *= q_int_k
        term = const * (n + 1) ** 2 * ratio**n / fact
        if term < tol:
            return n
    warnings.warn("kernel series order capped", RuntimeWarning)
    return cap


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _as_pair(x, y):
    xarr = np.asarray(x, dtype=float)
    yarr = np.asarray(y, dtype=float)
    return xarr, yarr, xarr.ndim == 0 and yarr.ndim == 0


# -- quadrature ------------------------------------------------------------

def integrate(fn, q, policy=None):
    """Integral of fn over the support interval x^2 < 4/(1-q).

    Substitutes x = 2 cos(theta)/sqrt(1-q) (making density integrands
    smooth) and applies trapezoid sums with Richardson extrapolation
    until two successive refinements agree within the policy tolerance.
    ``fn`` must accept numpy arrays.
    """
    policy = policy or _DEFAULT_QUAD
    halfwidth = 2.0 / math.sqrt(1.0 - q)

    def g(theta):
        return fn(halfwidth * np.cos(theta)) * (halfwidth * np.sin(theta))

    length = math.pi
    ends = g(np.array([0.0, length]))
    rows = [[0.5 * length * float(ends[0] + ends[1])]]
    for level in range(1, policy.max_refinements + 1):
        n_new = 2 ** (level - 1)
        h = length / 2**level
        theta_new = (2.0 * np.arange(n_new) + 1.0) * h
        trap = 0.5 * rows[-1][0] + h * float(np.sum(g(theta_new)))
        row = [trap]
        for j in range(1, level + 1):
            power = 4.0**j
            row.append((power * row[j - 1] - rows[-1][j - 1]) / (power - 1.0))
        rows.append(row)
        if level >= policy.min_refinements and abs(row[-1] - rows[-2][-1]) < policy.tol:
            return row[-1]
        rows = rows[-1:]
    raise ArithmeticError(
        f"quadrature did not converge within {policy.max_refinements} refinements"
    )


# -- verification helpers ---------------------------------------------------

def _check(suite, check_id, identity, residual, tol, start, detail=""):
    elapsed = (time.perf_counter() - start) * 1e3
    passed = residual < tol
    return Check(
        suite,
        check_id,
        identity,
        passed,
        residual=residual,
        detail=detail if not passed else "",
        elapsed_ms=elapsed,
    )


def normalization_check(kind, q, tol=1e-7, quad=None, **params):
    """Check that one density integrates to 1."""
    start = time.perf_counter()
    quad = quad or QuadPolicy(tol=min(1e-9, tol / 10.0))
    if kind == "qhermite":
        fn = lambda xs: density_qhermite(xs, q)
        label = f"q={q}"
    elif kind == "mu":
        fn = lambda xs: density_mu(xs, params["rho"], params["y"], q)
        label = f"q={q}, rho={params['rho']}, y={params['y']}"
    elif kind == "asc":
        fn = lambda xs: density_asc(xs, params["a"], params["b"], q)
        label = f"q={q}, a={params['a']}, b={params['b']}"
    else:
        raise ValueError("kind must be 'qhermite', 'mu' or 'asc'")
    total = integrate(fn, q, quad)
    return _check(
        "measures",
        f"normalization-{kind}[{label}]",
        f"integral of the {kind} density over its support equals 1",
        abs(total - 1.0),
        tol,
        start,
        detail=f"integral={total!r}",
    )


def conditional_moment_checks(q, rho, y, n_max=8, tol=1e-6, quad=None):
    """Check integral of H_n against mu(.|rho,y) equals rho^n H_n(y)."""
    quad = quad or QuadPolicy(tol=min(1e-9, tol / 10.0))
    hn_y = hermite_values(n_max, y, q)
    checks = []
    for n in range(1, n_max + 1):
        start = time.perf_counter()
        value = integrate(
            lambda xs: hermite_values(n, xs, q)[n] * density_mu(xs, rho, y, q), q, quad
        )
        expected = rho**n * hn_y[n]
        checks.append(
            _check(
                "measures",
                f"conditional-moment-n{n}[q={q},rho={rho},y={y}]",
                "integral of H_n d(mu) = rho^n H_n(y)",
                abs(value - expected),
                tol,
                start,
                detail=f"integral={value!r}, expected={expected!r}",
            )
        )
    return checks


def kernel_agreement_checks(
    q_values=(-0.4, 0.3, 0.7),
    rho_values=(0.2, 0.6),
    xy_values=(0.0, 1.0, -1.0),
    tol=1e-8,
    policy=None,
):
    """Series form vs product form of the Poisson-Mehler kernel."""
    checks = []
    for q in q_values:
        for rho in rho_values:
            start = time.perf_counter()
            order = kernel_series_order(q, rho, tol * 1e-3)
            worst = 0.0
            worst_at = None
            for xv in xy_values:
                for yv in xy_values:
                    prod = poisson_mehler(xv, yv, rho, q, policy)
                    ser = poisson_mehler_series(xv, yv, rho, q, order)
                    diff = abs(prod - ser)
                    if diff > worst:
                        worst, worst_at = diff, (xv, yv)
            checks.append(
                _check(
                    "measures",
                    f"kernel-agreement[q={q},rho={rho}]",
                    "Poisson-Mehler kernel: series and product forms agree",
                    worst,
                    tol,
                    start,
                    detail=f"worst at (x, y) = {worst_at}, series order {order}",
                )
            )
    return checks


def density_consistency_checks(q=0.5, rho=0.6, y=0.3, a=0.4, b=0.49, tol=1e-10):
    """Pointwise structure checks: mu = f_H * g_H, the Al-Salam-Chihara
    density equals mu at (sqrt(b), a/sqrt(b)), and kernel symmetry."""
    halfwidth = support_halfwidth(q)
    xs = np.linspace(-0.95 * halfwidth, 0.95 * halfwidth, 41)
    checks = []

    start = time.perf_counter()
    lhs = density_mu(xs, rho, y, q)
    rhs = density_qhermite(xs, q) * poisson_mehler(xs, y, rho, q)
    checks.append(
        _check(
            "measures",
            f"kernel-factorization[q={q},rho={rho},y={y}]",
            "mu density = f_H(x) g_H(x, y, rho) pointwise",
            float(np.max(np.abs(lhs - rhs))),
            tol,
            start,
        )
    )

    start = time.perf_counter()
    rho_b = math.sqrt(b)
    lhs = density_asc(xs, a, b, q)
    rhs = density_mu(xs, rho_b, a / rho_b, q)
    checks.append(
        _check(
            "measures",
            f"asc-mu-consistency[q={q},a={a},b={b}]",
            "Al-Salam-Chihara density = mu density at rho = sqrt(b), y = a/sqrt(b)",
            float(np.max(np.abs(lhs - rhs))),
            1e-12,
            start,
        )
    )

    start = time.perf_counter()
    pts = [p for p in (-1.1, -0.4, 0.0, 0.7, 1.3) if p * p * (1 - q) < 4]
    worst = 0.0
    for xv in pts:
        for yv in pts:
            lhs = density_mu(xv, rho, yv, q) * density_qhermite(yv, q)
            rhs = density_mu(yv, rho, xv, q) * density_qhermite(xv, q)
            worst = max(worst, abs(lhs - rhs))
    checks.append(
        _check(
            "measures",
            f"mu-symmetry[q={q},rho={rho}]",
            "mu(x|rho,y) f_H(y) = mu(y|rho,x) f_H(x) (kernel symmetry)",
            worst,
            1e-9,
            start,
        )
    )
    return checks


def verify_chapman(rho1, rho2, x, z, q, tol=1e-6, quad=None):
    """Semigroup property: mu(z | rho1*rho2, x) equals the y-integral of
    mu(z | rho1, y) mu(y | rho2, x)."""
    _require(abs(rho1 * rho2) < 1, "need |rho1*rho2| < 1")
    sup = 4.0 / (1.0 - q)
    _require(x * x < sup and z * z < sup, "x and z must lie inside the support")
    start = time.perf_counter()
    quad = quad or QuadPolicy(tol=min(1e-9, tol / 10.0))
    lhs = density_mu(z, rho1 * rho2, x, q)
    rhs = integrate(
        lambda ys: density_mu(z, rho1, ys, q) * density_mu(ys, rho2, x, q), q, quad
    )
    return _check(
        "measures",
        f"chapman[q={q},rho1={rho1},rho2={rho2},x={x},z={z}]",
        "mu(.|rho1*rho2, x) = integral of mu(.|rho1, y) mu(dy|rho2, x)",
        abs(lhs - rhs),
        tol,
        start,
        detail=f"lhs={lhs!r}, rhs={rhs!r}",
    )


def density_grid(kind, q, points=200, **params):
    """(x, density) samples across the closed support, for emission."""
    halfwidth = support_halfwidth(q)
    xs = np.linspace(-halfwidth, halfwidth, points)
    if kind == "qhermite":
        ys = density_qhermite(xs, q)
    elif kind == "mu":
        ys = density_mu(xs, params["rho"], params["y"], q)
    elif kind == "asc":
        ys = density_asc(xs, params["a"], params["b"], q)
    else:
        raise ValueError("kind must be 'qhermite', 'mu' or 'asc'")
    return xs, ys
