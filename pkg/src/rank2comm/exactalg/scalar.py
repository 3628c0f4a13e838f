"""Exact scalars: rationals (plain ``Fraction``) and elements of Q[t]/(t^2 - p t - q).

Rational-field scalars are represented directly by :class:`fractions.Fraction`
so the common case pays no wrapper overhead.  Quadratic-extension elements are
:class:`QuadScalar` instances bound to a :class:`QuadraticField`.  Rationals
embed into every extension; two extension elements from different fields
refuse to mix.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from ..errors import FieldMismatch


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def rational_sqrt(x) -> Fraction | None:
    """Square root of a nonnegative rational if it is itself rational."""
    x = to_fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class QuadraticField:
    """The field Q[t]/(t^2 - p t - q) for an irreducible monic quadratic."""

    __slots__ = ("p", "q", "name")

    def __init__(self, p, q, name="t"):
        p, q = to_fraction(p), to_fraction(q)
        if rational_sqrt(p * p + 4 * q) is not None:
            raise ValueError(f"t^2 - ({p})t - ({q}) is reducible over Q")
        self.p = p
        self.q = q
        self.name = name

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and (self.p, self.q) == (other.p, other.q)

    def __hash__(self):
        return hash(("QuadraticField", self.p, self.q))

    def __repr__(self):
        return f"QuadraticField({self.name}^2 = {self.p}*{self.name} + {self.q})"

    def __call__(self, a=0, b=0) -> "QuadScalar":
        return QuadScalar(to_fraction(a), to_fraction(b), self)

    @property
    def gen(self) -> "QuadScalar":
        return QuadScalar(Fraction(0), Fraction(1), self)

    @property
    def discriminant(self) -> Fraction:
        return self.p * self.p + 4 * self.q

    def sqrt(self, x) -> "Fraction | QuadScalar | None":
        """An element whose square is the rational ``x``, or None if absent."""
        x = to_fraction(x)
        r = rational_sqrt(x)
        if r is not None:
            return r
        # sqrt(disc) = 2t - p; any other square root is a rational multiple of it
        s = rational_sqrt(x / self.discriminant)
        if s is None:
            return None
        return self(-s * self.p, 2 * s)


class QuadScalar:
    """a + b*t in a fixed quadratic field.  Immutable."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: Fraction, b: Fraction, field: QuadraticField):
        self.a = a
        self.b = b
        self.field = field

    def _coerce(self, other):
        if isinstance(other, QuadScalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadScalar(Fraction(other), Fraction(0), self.field)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(o.a - self.a, o.b - self.b, self.field)

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.field)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadScalar(self.a * other, self.b * other, self.field)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        bb = self.b * o.b
        return QuadScalar(
            self.a * o.a + bb * f.q,
            self.a * o.b + self.b * o.a + bb * f.p,
            f,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        a, b, f = self.a, self.b, self.field
        return a * a + a * b * f.p - b * b * f.q

    def conjugate(self) -> "QuadScalar":
        return QuadScalar(self.a + self.b * self.field.p, -self.b, self.field)

    def inverse(self) -> "QuadScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return QuadScalar(c.a / n, c.b / n, self.field)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadScalar(self.a / other, self.b / other, self.field)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadScalar(Fraction(1), Fraction(0), self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field))

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QuadScalar({self.a}, {self.b}, {self.field!r})"

    def __str__(self):
        return format_scalar(self)


def format_scalar(x) -> str:
    """Exact text form: ``p/q`` for rationals, ``a+b*t`` for extension elements."""
    if isinstance(x, QuadScalar):
        if x.b == 0:
            return format_scalar(x.a)
        return f"{format_scalar(x.a)}{'+' if x.b >= 0 else '-'}{format_scalar(abs(x.b))}*{x.field.name}"
    x = to_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QuadScalar))


def is_rational_value(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, QuadScalar) and x.b == 0)


def rational_value(x) -> Fraction:
    if isinstance(x, QuadScalar):
        if x.b != 0:
            raise ValueError(f"{x} is not rational")
        return x.a
    return to_fraction(x)
