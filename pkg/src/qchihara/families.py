"""The three polynomial families and basis conversions.

Generates the continuous q-Hermite polynomials H_n, the companion family
B_n, and the Al-Salam-Chihara polynomials p_n(x | q, a, b) from their
three-term recurrences over the exact ring:

    H_{n+1} = x H_n - [n]_q H_{n-1}
    B_{n+1} = -q^n x B_n + q^(n-1) [n]_q B_{n-1}
    p_{n+1} = (x - a q^n) p_n - (1 - b q^(n-1)) [n]_q p_{n-1}

with p_{-1} = 0, p_0 = 1 throughout.  Also provides conversion between
the monomial and Hermite bases, the homogenized forms c^n B_n(a/c) and
c^n H_n(a/c), and plain numeric three-term evaluators that work for
float, complex, mpmath and numpy array arguments alike.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from . import qcore
from .qcore import MultiPoly, q_int

__all__ = [
    "PolyFamily",
    "HermiteExpansion",
    "hermite_poly",
    "b_poly",
    "asc_poly",
    "monomial_to_hermite",
    "hermite_coefficients",
    "from_hermite_coefficients",
    "b_homogenized",
    "hermite_homogenized",
    "q_int_value",
    "q_factorial_value",
    "hermite_values",
    "b_values",
    "asc_values",
]

_X = qcore.x
_Q = qcore.q
_KINDS = ("hermite", "b", "asc")


class PolyFamily:
    """Lazily extended, memoized sequence of one family's polynomials.

    The cache grows monotonically under a lock and entries are never
    recomputed, so concurrent readers always see identical objects.
    """

    def __init__(self, kind, a=None, b=None):
        if kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        self.kind = kind
        self.a = _coerce_param(a) if kind == "asc" else None
        self.b = _coerce_param(b) if kind == "asc" else None
        self._cache = [qcore.ONE]
        self._lock = threading.Lock()

    def poly(self, n):
        if n < 0:
            raise ValueError("degree must be >= 0")
        cache = self._cache
        if n < len(cache):
            return cache[n]
        with self._lock:
            while len(self._cache) <= n:
                self._cache.append(self._step(len(self._cache) - 1))
        return self._cache[n]

    __getitem__ = poly

    def _step(self, k):
        """Build p_{k+1} from p_k and p_{k-1} (the [n]_q factor kills the
        trailing term at k = 0, so q^(k-1) is never formed there)."""
        pk = self._cache[k]
        pk1 = self._cache[k - 1] if k >= 1 else qcore.ZERO
        if self.kind == "hermite":
            out = _X * pk
            if k >= 1:
                out = out - q_int(k) * pk1
        elif self.kind == "b":
            out = -(_Q**k) * _X * pk
            if k >= 1:
                out = out + _Q ** (k - 1) * q_int(k) * pk1
        else:
            out = (_X - self.a * _Q**k) * pk
            if k >= 1:
                out = out - (q_int(k) - self.b * _Q ** (k - 1) * q_int(k)) * pk1
        return out


def _coerce_param(value):
    if value is None:
        raise ValueError("Al-Salam-Chihara family needs both parameters")
    if isinstance(value, MultiPoly):
        return value
    return MultiPoly(value)


_HERMITE = PolyFamily("hermite")
_B = PolyFamily("b")
_ASC_FAMILIES = {}
_ASC_LOCK = threading.Lock()


def hermite_poly(n):
    """The degree-n continuous q-Hermite polynomial (monic, in x and q)."""
    return _HERMITE.poly(n)


def b_poly(n):
    """The degree-n companion polynomial B_n (leading x-coefficient
    (-1)^n q^(n(n-1)/2))."""
    return _B.poly(n)


def asc_poly(n, a=None, b=None):
    """The degree-n Al-Salam-Chihara polynomial p_n(x | q, a, b).

    ``a`` and ``b`` may be ring elements or exact scalars; they default
    to the ring symbols a and b.  asc_poly(n, 0, 0) == hermite_poly(n).
    """
    a = qcore.a if a is None else a
    b = qcore.b if b is None else b
    a = _coerce_param(a)
    b = _coerce_param(b)
    key = (a, b)
    with _ASC_LOCK:
        family = _ASC_FAMILIES.get(key)
        if family is None:
            family = _ASC_FAMILIES[key] = PolyFamily("asc", a, b)
    return family.poly(n)


# -- Hermite basis ------------------------------------------------------

@dataclass(frozen=True)
class HermiteExpansion:
    """Coefficients a(n, 2i) of x^n = sum_i a(n, 2i) H_{n-2i}(x | q)."""

    degree: int
    coefficients: tuple  # index i -> a(n, 2i), a polynomial in q

    def coefficient(self, two_i):
        if two_i % 2 or two_i < 0 or two_i > self.degree:
            raise ValueError(f"index must be an even number in [0, {self.degree}]")
        return self.coefficients[two_i // 2]

    def reconstruct(self):
        total = qcore.ZERO
        for i, coeff in enumerate(self.coefficients):
            total = total + coeff * hermite_poly(self.degree - 2 * i)
        return total


# Row m of the triangle holds the H-basis coefficients of x^m; rows are
# extended append-only so all callers share identical objects.
_MONOMIAL_ROWS = [[qcore.ONE]]
_ROWS_LOCK = threading.Lock()


def _monomial_row(n):
    rows = _MONOMIAL_ROWS
    if n < len(rows):
        return rows[n]
    with _ROWS_LOCK:
        while len(_MONOMIAL_ROWS) <= n:
            prev = _MONOMIAL_ROWS[-1]
            m = len(prev) - 1
            # x * H_k = H_{k+1} + [k]_q H_{k-1}
            nxt = []
            for k in range(m + 2):
                coeff = prev[k - 1] if k >= 1 else qcore.ZERO
                if k + 1 <= m:
                    coeff = coeff + q_int(k + 1) * prev[k + 1]
                nxt.append(coeff)
            _MONOMIAL_ROWS.append(nxt)
    return _MONOMIAL_ROWS[n]


def monomial_to_hermite(n):
    """Expand x^n in the Hermite basis; only indices n, n-2, ... occur."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    row = _monomial_row(n)
    return HermiteExpansion(n, tuple(row[n - 2 * i] for i in range(n // 2 + 1)))


def hermite_coefficients(p):
    """Expand a polynomial in x into Hermite-basis coefficients.

    Works by repeated leading-term subtraction (H_k is monic in x), so the
    coefficients may be polynomials in the remaining ring variables.
    Returns [c_0, ..., c_d] with sum(c_k H_k) == p.
    """
    d = p.degree("x")
    if d < 0:
        return []
    out = [qcore.ZERO] * (d + 1)
    rem = p
    for k in range(d, -1, -1):
        ck = rem.coefficient_in("x", k)
        if not ck.is_zero:
            out[k] = ck
            rem = rem - ck * hermite_poly(k)
    if not rem.is_zero:
        raise ArithmeticError("Hermite-basis expansion left a remainder")
    return out


def from_hermite_coefficients(coefficients):
    """Inverse of :func:`hermite_coefficients`."""
    total = qcore.ZERO
    for k, coeff in enumerate(coefficients):
        total = total + coeff * hermite_poly(k)
    return total


# -- homogenized forms ---------------------------------------------------

def _homogenize(p, total_degree):
    """Replace x^e by a^e c^(total_degree - e): the polynomial c^n p(a/c)."""
    out = qcore.ZERO
    for e in range(total_degree, -1, -1):
        coeff = p.coefficient_in("x", e)
        if not coeff.is_zero:
            out = out + coeff * qcore.a**e * qcore.c ** (total_degree - e)
    return out


_HOMOG_CACHE = {}
_HOMOG_LOCK = threading.Lock()


def b_homogenized(m):
    """c^m B_m(a/c) as a polynomial in a, c, q."""
    return _homogenized("b", m)


def hermite_homogenized(k):
    """c^k H_k(a/c) as a polynomial in a, c, q."""
    return _homogenized("hermite", k)


def _homogenized(kind, n):
    key = (kind, n)
    value = _HOMOG_CACHE.get(key)
    if value is None:
        base = b_poly(n) if kind == "b" else hermite_poly(n)
        value = _homogenize(base, n)
        with _HOMOG_LOCK:
            value = _HOMOG_CACHE.setdefault(key, value)
    return value


# -- numeric three-term evaluation ---------------------------------------

def q_int_value(n, qval):
    """[n]_q as a plain number in the arithmetic of ``qval``."""
    total = 0 * qval
    power = 1 + 0 * qval
    for _ in range(n):
        total = total + power
        power = power * qval
    return total


def q_factorial_value(n, qval):
    """[n]_q! as a plain number in the arithmetic of ``qval``."""
    total = 1 + 0 * qval
    q_int_k = 0 * qval
    power = 1 + 0 * qval
    for _ in range(n):
        q_int_k = q_int_k + power
        power = power * qval
        total = total * q_int_k
    return total


def _three_term_values(n, xval, alpha, beta):
    """Values p_0..p_n of p_{k+1} = (x - alpha(k)) p_k - beta(k) p_{k-1}."""
    one = 1 + 0 * xval
    values = [one]
    if n >= 1:
        values.append((xval - alpha(0)) * one)
    for k in range(1, n):
        values.append((xval - alpha(k)) * values[k] - beta(k) * values[k - 1])
    return values


def hermite_values(n, xval, qval):
    """H_0(x|q) .. H_n(x|q) numerically; x may be scalar or array."""
    return _three_term_values(
        n, xval, lambda k: 0 * xval, lambda k: q_int_value(k, qval)
    )


def b_values(n, xval, qval):
    """B_0(x|q) .. B_n(x|q) numerically."""
    one = 1 + 0 * xval
    values = [one]
    if n >= 1:
        values.append(-xval * one)
    for k in range(1, n):
        values.append(
            -(qval**k) * xval * values[k]
            + qval ** (k - 1) * q_int_value(k, qval) * values[k - 1]
        )
    return values


def asc_values(n, xval, qval, aval, bval):
    """p_0(x|q,a,b) .. p_n(x|q,a,b) numerically."""
    return _three_term_values(
        n,
        xval,
        lambda k: aval * qval**k,
        lambda k: (1 - bval * qval ** (k - 1)) * q_int_value(k, qval),
    )
