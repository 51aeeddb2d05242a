"""Exact Gaussian rationals ``a + b i`` with arbitrary-precision rational parts."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["Scalar", "Q", "ZERO", "ONE", "I", "to_rational", "rational_str"]


def to_rational(x) -> mpq:
    """Coerce ints, Fractions, mpq values and rational strings to ``mpq``."""
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return mpq(x.numerator, x.denominator) if not isinstance(x, int) else mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite float {x!r}")
        return mpq(Fraction(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


Q = to_rational


def rational_str(q) -> str:
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """Immutable Gaussian rational.

    Both parts are stored as reduced ``gmpy2.mpq`` values, so equality is value
    equality and hashing agrees with ``int``/``Fraction`` for real values.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_rational(re))
        object.__setattr__(self, "im", to_rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.re, self.im))

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, str):
            from .parsing import parse_scalar

            return parse_scalar(x)
        return cls(x, 0)

    @classmethod
    def _raw(cls, re, im) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return Scalar._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return Scalar._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        if o.im == 0:
            return Scalar._raw(self.re * o.re, self.im * o.re)
        if self.im == 0:
            return Scalar._raw(self.re * o.re, self.re * o.im)
        return Scalar._raw(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Scalar":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar._raw(self.re / n, -self.im / n)

    def conj(self) -> "Scalar":
        return Scalar._raw(self.re, -self.im)

    def abs2(self) -> mpq:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def abs_bound(self) -> mpq:
        """Rational upper bound ``|re| + |im| >= |self|``."""
        return abs(self.re) + abs(self.im)

    # -- comparison / conversion -----------------------------------------
    def __eq__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Scalar({rational_str(self.re)!r}, {rational_str(self.im)!r})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return rational_str(re)
        if re == 0:
            num, den = im.numerator, im.denominator
            head = "i" if abs(num) == 1 else f"{abs(num)}i"
            sign = "-" if num < 0 else ""
            return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"
        den = math.lcm(int(re.denominator), int(im.denominator))
        a = int(re * den)
        b = int(im * den)
        bpart = "i" if abs(b) == 1 else f"{abs(b)}i"
        body = f"({a}{'-' if b < 0 else '+'}{bpart})"
        return body if den == 1 else f"{body}/{den}"


def _maybe(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, type(mpq())):
        return Scalar(x, 0)
    return None


ZERO = Scalar(0, 0)
ONE = Scalar(1, 0)
I = Scalar(0, 1)
