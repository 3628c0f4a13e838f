"""Truncated Laurent series with exact coefficients and tracked validity order.

A series stores coefficients for exponents ``lo .. order-1``; everything at or
beyond ``order`` is unknown.  ``order == EXACT`` marks a Laurent polynomial
whose coefficients past the stored ones are known to be zero.

Coefficients are scalars (``Fraction``/``QuadScalar``) or :class:`AffineForm`
values; bare scalars stand for constant forms.

Order rules::

    a + b   order = min(order_a, order_b)
    a * b   order = min(lo_a + order_b, lo_b + order_a)
    d^k a   order = order_a - k
    int a   order = order_a + 1
    1 / a   order = order_a - 2 lo_a
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import (
    CenterMismatch,
    InsufficientTruncation,
    LeadingCoefficientNotScalar,
    ResidueNonZero,
    ZeroSeries,
)
from .affine import AffineForm, as_form, is_constant_free, scalar_part
from .scalar import QuadScalar

EXACT = math.inf
ZERO = Fraction(0)

_SCALARS = (int, Fraction, QuadScalar)


def _falling(e: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= e - i
    return out


class LaurentSeries:
    __slots__ = ("center", "lo", "coeffs", "order")

    def __init__(self, coeffs=(), lo: int = 0, order=EXACT, center="origin"):
        coeffs = list(coeffs)
        if order != EXACT:
            order = int(order)
            n = order - lo
            if n <= 0:
                coeffs = []
            elif len(coeffs) > n:
                del coeffs[n:]
            elif len(coeffs) < n:
                coeffs.extend([ZERO] * (n - len(coeffs)))
        start = 0
        while start < len(coeffs) and not coeffs[start]:
            start += 1
        if start == len(coeffs):
            self.center = center
            self.order = order
            self.lo = order
            self.coeffs = ()
            return
        if order == EXACT:
            end = len(coeffs)
            while not coeffs[end - 1]:
                end -= 1
            coeffs = coeffs[start:end]
        else:
            coeffs = coeffs[start:]
        self.center = center
        self.lo = lo + start
        self.coeffs = tuple(coeffs)
        self.order = order

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dict(cls, terms, order=EXACT, center="origin") -> "LaurentSeries":
        terms = {e: c for e, c in terms.items() if c and e < order}
        if not terms:
            return cls.zero(order, center)
        lo = min(terms)
        hi = max(terms) if order == EXACT else order - 1
        return cls([terms.get(e, ZERO) for e in range(lo, hi + 1)], lo, order, center)

    @classmethod
    def zero(cls, order=EXACT, center="origin") -> "LaurentSeries":
        return cls((), 0 if order == EXACT else order, order, center)

    @classmethod
    def constant(cls, c, order=EXACT, center="origin") -> "LaurentSeries":
        return cls([c], 0, order, center)

    @classmethod
    def monomial(cls, c, exponent: int, order=EXACT, center="origin") -> "LaurentSeries":
        return cls([c], exponent, order, center)

    @classmethod
    def polynomial(cls, coeffs, center="origin") -> "LaurentSeries":
        """Exact polynomial from ascending coefficients."""
        return cls([Fraction(c) if isinstance(c, int) else c for c in coeffs], 0, EXACT, center)

    # -- inspection -------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.order == EXACT

    @property
    def hi(self):
        """One past the last stored exponent."""
        return self.lo + len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, e: int):
        if e >= self.order:
            raise InsufficientTruncation(
                f"coefficient x^{e} requested but series is valid only below x^{self.order}"
            )
        if not self.coeffs or e < self.lo or e >= self.hi:
            return ZERO
        return self.coeffs[e - self.lo]

    __getitem__ = coeff

    def items(self):
        """(exponent, coefficient) pairs for the nonzero stored coefficients."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.lo + i, c

    def to_dict(self):
        return dict(self.items())

    def leading(self):
        if not self.coeffs:
            raise ZeroSeries("zero series has no leading coefficient")
        return self.coeffs[0]

    def is_constant_free(self) -> bool:
        return all(is_constant_free(c) for c in self.coeffs)

    def _check_center(self, other):
        if self.center != other.center:
            raise CenterMismatch(f"{self.center!r} vs {other.center!r}")

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, LaurentSeries):
            self._check_center(other)
            return other
        if isinstance(other, _SCALARS + (AffineForm,)):
            return LaurentSeries.constant(other, EXACT, self.center)
        return None

    def __add__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        a = self
        order = min(a.order, b.order)
        if not a.coeffs:
            return LaurentSeries(b.coeffs, b.lo, order, self.center)
        if not b.coeffs:
            return LaurentSeries(a.coeffs, a.lo, order, self.center)
        lo = min(a.lo, b.lo)
        hi = max(a.hi, b.hi)
        if order != EXACT:
            hi = min(hi, order)
        out = []
        for e in range(lo, hi):
            ia, ib = e - a.lo, e - b.lo
            ca = a.coeffs[ia] if 0 <= ia < len(a.coeffs) else None
            cb = b.coeffs[ib] if 0 <= ib < len(b.coeffs) else None
            if ca is None:
                out.append(cb if cb is not None else ZERO)
            elif cb is None:
                out.append(ca)
            else:
                out.append(ca + cb)
        return LaurentSeries(out, lo, order, self.center)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries([-c for c in self.coeffs], self.lo, self.order, self.center)

    def __sub__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return b + (-self)

    def scale(self, s) -> "LaurentSeries":
        if not s:
            return LaurentSeries.zero(self.order, self.center)
        return LaurentSeries([c * s for c in self.coeffs], self.lo, self.order, self.center)

    def __mul__(self, other):
        if isinstance(other, _SCALARS + (AffineForm,)):
            return self.scale(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        self._check_center(other)
        a, b = self, other
        order = min(a.lo + b.order, b.lo + a.order)
        if not a.coeffs or not b.coeffs:
            return LaurentSeries.zero(order, self.center)
        lo = a.lo + b.lo
        ac, bc = a.coeffs, b.coeffs
        if order == EXACT:
            n = len(ac) + len(bc) - 1
        else:
            n = order - lo
        out = [0] * n
        bnz = [(j, c) for j, c in enumerate(bc) if c]
        for i, ca in enumerate(ac):
            if not ca:
                continue
            lim = n - i
            for j, cb in bnz:
                if j >= lim:
                    break
                out[i + j] = out[i + j] + ca * cb
        return LaurentSeries(out, lo, order, self.center)

    def __rmul__(self, other):
        if isinstance(other, _SCALARS + (AffineForm,)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, _SCALARS):
            return self.scale(1 / other)
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentSeries.constant(Fraction(1), EXACT, self.center)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.center == other.center
            and self.order == other.order
            and self.lo == other.lo
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.center, self.lo, self.order, self.coeffs))

    # -- calculus ---------------------------------------------------------

    def derivative(self, k: int = 1) -> "LaurentSeries":
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        if k == 0:
            return self
        order = self.order - k
        if not self.coeffs:
            return LaurentSeries.zero(order, self.center)
        out = [c * _falling(self.lo + i, k) for i, c in enumerate(self.coeffs)]
        return LaurentSeries(out, self.lo - k, order, self.center)

    def residue(self):
        return self.coeff(-1)

    def antiderivative(self) -> "LaurentSeries":
        """Termwise antiderivative with zero integration constant."""
        res = self.residue()
        if res:
            raise ResidueNonZero(res, self.center)
        order = self.order + 1
        if not self.coeffs:
            return LaurentSeries.zero(order, self.center)
        out = [ZERO]
        for i, c in enumerate(self.coeffs):
            e = self.lo + i
            out.append(ZERO if e == -1 else c / (e + 1))
        return LaurentSeries(out, self.lo, order, self.center)

    def without_residue(self) -> "LaurentSeries":
        if self.order <= -1 or self.lo > -1 or self.hi <= -1:
            return self
        out = list(self.coeffs)
        out[-1 - self.lo] = ZERO
        return LaurentSeries(out, self.lo, self.order, self.center)

    def inverse(self, order=None) -> "LaurentSeries":
        """Multiplicative inverse; ``order`` caps an exact input with several terms."""
        a = self
        if order is not None:
            a = a.truncate(order)
        if not a.coeffs:
            raise ZeroSeries("cannot invert the zero series")
        lead = a.coeffs[0]
        if not is_constant_free(lead):
            raise LeadingCoefficientNotScalar(f"leading coefficient {lead} depends on constants")
        lead = scalar_part(lead)
        if a.order == EXACT:
            if len(a.coeffs) == 1:
                return LaurentSeries([1 / Fraction(lead) if isinstance(lead, int) else 1 / lead],
                                     -a.lo, EXACT, self.center)
            raise InsufficientTruncation("inverse of an exact multi-term series needs an order")
        rel = a.order - a.lo
        inv0 = 1 / lead
        b = [inv0]
        ac = a.coeffs
        for m in range(1, rel):
            s = ZERO
            for k in range(1, m + 1):
                if ac[k]:
                    s = s + ac[k] * b[m - k]
            b.append(-s * inv0)
        return LaurentSeries(b, -a.lo, rel - a.lo, self.center)

    # -- bookkeeping ------------------------------------------------------

    def truncate(self, order) -> "LaurentSeries":
        order = min(order, self.order)
        return LaurentSeries(self.coeffs, self.lo if self.coeffs else order, order, self.center)

    def recenter(self, center) -> "LaurentSeries":
        return LaurentSeries(self.coeffs, self.lo, self.order, center)

    def principal_part(self) -> "LaurentSeries":
        return LaurentSeries.from_dict({e: c for e, c in self.items() if e < 0}, EXACT, self.center)

    def substitute(self, values) -> "LaurentSeries":
        return LaurentSeries(
            [c.substitute(values) if isinstance(c, AffineForm) else c for c in self.coeffs],
            self.lo,
            self.order,
            self.center,
        )

    def forms(self):
        """Coefficients lifted to :class:`AffineForm`, exponent ``lo`` first."""
        return [as_form(c) for c in self.coeffs]

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        terms = []
        for e, c in self.items():
            terms.append(f"({c})x^{e}")
        body = " + ".join(terms) if terms else "0"
        if self.order == EXACT:
            return f"{body} [exact, at {self.center}]"
        return f"{body} + O(x^{self.order}) [at {self.center}]"


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a + b


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def series_derivative(a: LaurentSeries, k: int = 1) -> LaurentSeries:
    return a.derivative(k)


def series_antiderivative(a: LaurentSeries) -> LaurentSeries:
    return a.antiderivative()


def series_inverse(a: LaurentSeries, order=None) -> LaurentSeries:
    return a.inverse(order)
