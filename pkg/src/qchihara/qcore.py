"""Exact arithmetic substrate: sparse multivariate polynomials over the
rationals and the q-combinatorics primitives built on them.

Everything symbolic in this package lives in one fixed polynomial ring
Q[q, x, a, b, c, rho, y].  The representation is sparse, so a value only
pays for the variables it actually uses.  Coefficients are exact (``int``
or ``fractions.Fraction``); floats and complex numbers appear only as
*results* of :meth:`MultiPoly.evaluate`.

Monomials are packed into single integers with the total degree in the
top bit-field, so plain integer comparison of keys is graded-lex order
and integer addition is monomial multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isfinite
from numbers import Rational

__all__ = [
    "VARIABLES",
    "MultiPoly",
    "ExactDivisionError",
    "as_finite_complex",
    "q_int",
    "q_factorial",
    "q_binomial",
    "q_int_difference",
    "q",
    "x",
    "a",
    "b",
    "c",
    "rho",
    "y",
]

VARIABLES = ("q", "x", "a", "b", "c", "rho", "y")

_NVARS = len(VARIABLES)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_BITS = 16
_MASK = (1 << _BITS) - 1
_MAX_EXP = _MASK
_DEG_SHIFT = _NVARS * _BITS
# shift of the bit-field of variable i (VARIABLES[0] sits just below the degree)
_SHIFT = tuple((_NVARS - 1 - i) * _BITS for i in range(_NVARS))


class ExactDivisionError(ArithmeticError):
    """A division that was required to be exact left a nonzero remainder."""


def _pack(exponents):
    mono = sum(exponents)
    for e in exponents:
        if not 0 <= e <= _MAX_EXP:
            raise ValueError(f"exponent {e} out of range")
        mono = (mono << _BITS) | e
    return mono


def _unpack(mono):
    exps = [0] * _NVARS
    for i in range(_NVARS - 1, -1, -1):
        exps[i] = mono & _MASK
        mono >>= _BITS
    return tuple(exps)


def _var_mono(index, exponent):
    return (exponent << _DEG_SHIFT) | (exponent << _SHIFT[index])


def _divides(divisor, mono):
    """Field-wise: does the divisor monomial divide ``mono``?"""
    d, m = divisor, mono
    for _ in range(_NVARS):
        if (m & _MASK) < (d & _MASK):
            return False
        d >>= _BITS
        m >>= _BITS
    return True


def _as_coeff(value):
    """Normalize an exact scalar: ints stay ints, integral Fractions demote."""
    if isinstance(value, int):
        return int(value) if isinstance(value, bool) else value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        f = Fraction(value)
        return f.numerator if f.denominator == 1 else f
    raise TypeError(
        f"exact rational coefficient required, got {type(value).__name__}"
    )


class MultiPoly:
    """Immutable sparse polynomial in q, x, a, b, c, rho, y with exact
    rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, value=0):
        coeff = _as_coeff(value)
        self._terms = {0: coeff} if coeff else {}
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        """Adopt a pre-normalized {packed-monomial: coefficient} dict."""
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def variable(cls, name):
        try:
            index = _INDEX[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}; ring has {VARIABLES}") from None
        return cls._raw({_var_mono(index, 1): 1})

    @classmethod
    def monomial(cls, exponents, coeff=1):
        """Build coeff * prod(var**e) from a {name: exponent} mapping."""
        coeff = _as_coeff(coeff)
        if not coeff:
            return ZERO
        exps = [0] * _NVARS
        for name, e in exponents.items():
            exps[_INDEX[name]] = int(e)
        return cls._raw({_pack(exps): coeff})

    # -- basic protocol -------------------------------------------------

    @property
    def is_zero(self):
        return not self._terms

    @property
    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self):
        """The value of a constant polynomial, as int or Fraction."""
        if not self._terms:
            return 0
        if len(self._terms) == 1 and 0 in self._terms:
            return self._terms[0]
        raise ValueError(f"not a constant polynomial: {self}")

    def terms(self):
        """Read-only view: {exponent tuple over VARIABLES: coefficient}."""
        return {_unpack(mono): coeff for mono, coeff in self._terms.items()}

    def variables_used(self):
        used = [False] * _NVARS
        for mono in self._terms:
            for i in range(_NVARS):
                if (mono >> _SHIFT[i]) & _MASK:
                    used[i] = True
        return tuple(name for name, flag in zip(VARIABLES, used) if flag)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, Rational)):
            return self._terms == MultiPoly(other)._terms
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(frozenset(self._terms.items()))
        return h

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        big, small = self._terms, other._terms
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for mono, coeff in small.items():
            v = out.get(mono, 0) + coeff
            if v:
                out[mono] = v.numerator if type(v) is Fraction and v.denominator == 1 else v
            elif mono in out:
                del out[mono]
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({mono: -coeff for mono, coeff in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, MultiPoly):
            scalar = _as_coeff(other)
            if not scalar:
                return ZERO
            out = {}
            for mono, coeff in self._terms.items():
                v = coeff * scalar
                out[mono] = v.numerator if type(v) is Fraction and v.denominator == 1 else v
            return MultiPoly._raw(out)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        aterms, bterms = self._terms, other._terms
        if not aterms or not bterms:
            return ZERO
        if len(aterms) > len(bterms):
            aterms, bterms = bterms, aterms
        out = {}
        get = out.get
        bitems = list(bterms.items())
        for m1, c1 in aterms.items():
            for m2, c2 in bitems:
                k = m1 + m2
                v = get(k, 0) + c1 * c2
                if v:
                    out[k] = v
                elif k in out:
                    del out[k]
        for k, v in out.items():
            if type(v) is Fraction and v.denominator == 1:
                out[k] = v.numerator
        return MultiPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            return self.exact_div(other)
        if isinstance(other, (int, Fraction, Rational)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    # -- structure queries ------------------------------------------------

    def degree(self, var=None):
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(self._terms) >> _DEG_SHIFT
        shift = _SHIFT[_INDEX[var]]
        return max((mono >> shift) & _MASK for mono in self._terms)

    def coefficient_in(self, var, power):
        """The coefficient of var**power, a polynomial in the other variables."""
        shift = _SHIFT[_INDEX[var]]
        strip = (power << shift) | (power << _DEG_SHIFT)
        out = {}
        for mono, coeff in self._terms.items():
            if (mono >> shift) & _MASK == power:
                out[mono - strip] = coeff
        return MultiPoly._raw(out)

    def substitute(self, var, value):
        """Replace ``var`` by another polynomial (or exact scalar)."""
        value = _coerce(value)
        if value is NotImplemented:
            raise TypeError("substitution value must be a polynomial or exact rational")
        shift = _SHIFT[_INDEX[var]]
        groups = {}
        for mono, coeff in self._terms.items():
            e = (mono >> shift) & _MASK
            stripped = mono - (e << shift) - (e << _DEG_SHIFT)
            groups.setdefault(e, {})[stripped] = coeff
        if not groups:
            return ZERO
        top = max(groups)
        result = MultiPoly._raw(groups.get(top, {}).copy())
        for e in range(top - 1, -1, -1):
            result = result * value
            if e in groups:
                result = result + MultiPoly._raw(groups[e].copy())
        return result

    def evaluate(self, **values):
        """Evaluate with every variable that occurs assigned a number.

        Accepts int/Fraction (exact result), float or complex.  Raises
        ``ValueError`` if a variable occurring in the polynomial has no
        assignment, or if an unknown variable name is supplied.
        """
        for name in values:
            if name not in _INDEX:
                raise ValueError(f"unknown variable {name!r}")
        missing = [v for v in self.variables_used() if v not in values]
        if missing:
            raise ValueError(f"no value assigned for variable(s): {', '.join(missing)}")
        powers = {}
        for name, val in values.items():
            powers[_INDEX[name]] = [1, val]
        total = 0
        for mono in sorted(self._terms):
            term = self._terms[mono]
            for i, table in powers.items():
                e = (mono >> _SHIFT[i]) & _MASK
                while len(table) <= e:
                    table.append(table[-1] * table[1])
                if e:
                    term = term * table[e]
            total = total + term
        return total

    # -- division ---------------------------------------------------------

    def _leading(self):
        mono = max(self._terms)
        return mono, self._terms[mono]

    def exact_div(self, divisor):
        """Exact polynomial division; raises ExactDivisionError on any remainder."""
        divisor = _coerce(divisor)
        if divisor is NotImplemented:
            raise TypeError("divisor must be a polynomial or exact rational")
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return ZERO
        d_mono, d_coeff = divisor._leading()
        d_items = [(m, cf) for m, cf in divisor._terms.items() if m != d_mono]
        remainder = dict(self._terms)
        out = {}
        while remainder:
            r_mono = max(remainder)
            if not _divides(d_mono, r_mono):
                raise ExactDivisionError(
                    f"inexact polynomial division (leading monomial not divisible)"
                )
            q_mono = r_mono - d_mono
            q_coeff = Fraction(remainder[r_mono]) / d_coeff
            q_coeff = q_coeff.numerator if q_coeff.denominator == 1 else q_coeff
            out[q_mono] = q_coeff
            del remainder[r_mono]
            for mono, coeff in d_items:
                k = mono + q_mono
                v = remainder.get(k, 0) - coeff * q_coeff
                if v:
                    remainder[k] = v.numerator if type(v) is Fraction and v.denominator == 1 else v
                elif k in remainder:
                    del remainder[k]
        return MultiPoly._raw(out)

    def divmod_in(self, var, divisor):
        """Long division in one variable; the divisor's leading coefficient
        in ``var`` must be a nonzero constant.  Returns (quotient, remainder)."""
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        d_deg = divisor.degree(var)
        lead = divisor.coefficient_in(var, d_deg)
        if not lead.is_constant:
            raise ValueError(f"divisor leading coefficient in {var} must be constant")
        inv = Fraction(1) / Fraction(lead.constant_value())
        v = MultiPoly.variable(var)
        quotient = ZERO
        remainder = self
        r_deg = remainder.degree(var)
        while not remainder.is_zero and r_deg >= d_deg:
            top = remainder.coefficient_in(var, r_deg)
            step = top * inv * v ** (r_deg - d_deg)
            quotient = quotient + step
            remainder = remainder - step * divisor
            r_deg = remainder.degree(var)
        return quotient, remainder

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        """Canonical form: graded-lex descending terms, explicit ^ powers."""
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, reverse=True):
            coeff = self._terms[mono]
            factors = []
            for i, name in enumerate(VARIABLES):
                e = (mono >> _SHIFT[i]) & _MASK
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            neg = coeff < 0
            mag = -coeff if neg else coeff
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self})"


def _coerce(value):
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, (int, Fraction, Rational)):
        return MultiPoly(value)
    return NotImplemented


ZERO = MultiPoly(0)
ONE = MultiPoly(1)

q = MultiPoly.variable("q")
x = MultiPoly.variable("x")
a = MultiPoly.variable("a")
b = MultiPoly.variable("b")
c = MultiPoly.variable("c")
rho = MultiPoly.variable("rho")
y = MultiPoly.variable("y")

_Q_INDEX = _INDEX["q"]


def as_finite_complex(value):
    """Validate and return a complex number with finite components."""
    z = complex(value)
    if not (isfinite(z.real) and isfinite(z.imag)):
        raise ValueError(f"non-finite complex value: {z!r}")
    return z


@lru_cache(maxsize=None)
def q_int(n):
    """The q-integer 1 + q + ... + q^(n-1); zero for n = 0."""
    if n < 0:
        raise ValueError("q_int requires n >= 0")
    return MultiPoly._raw({_var_mono(_Q_INDEX, k): 1 for k in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n):
    """The q-factorial [1]_q [2]_q ... [n]_q; one for n = 0."""
    if n < 0:
        raise ValueError("q_factorial requires n >= 0")
    if n == 0:
        return ONE
    return q_factorial(n - 1) * q_int(n)


@lru_cache(maxsize=None)
def q_binomial(n, k):
    """The Gaussian binomial coefficient as a polynomial in q.

    Out-of-range k gives 0.  Computed by exact division of q-factorials,
    which doubles as a consistency check on the division routine.
    """
    if n < 0:
        raise ValueError("q_binomial requires n >= 0")
    if k < 0 or k > n:
        return ZERO
    return q_factorial(n).exact_div(q_factorial(n - k) * q_factorial(k))


def q_int_difference(n, m):
    """[n]_q - [m]_q in the factored form q^m [n-m]_q, for m <= n.

    The factored form is checked against the direct difference before
    being returned.
    """
    if m > n:
        raise ValueError("q_int_difference requires m <= n")
    result = MultiPoly._raw({_var_mono(_Q_INDEX, m + j): 1 for j in range(n - m)})
    if result != q_int(n) - q_int(m):
        raise ArithmeticError("q-integer difference identity failed internally")
    return result
