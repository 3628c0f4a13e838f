"""Scalar expressions affine in the integration constants C_1, C_2, ..."""

from __future__ import annotations

from fractions import Fraction

from ..errors import NonlinearInConstants
from .scalar import QuadScalar, format_scalar

_SCALARS = (int, Fraction, QuadScalar)


class AffineForm:
    """``const + sum(lin[i] * C_i)``.

    The linear part never stores zero coefficients.  Multiplying two forms is
    allowed only when at least one of them is a plain scalar, since the
    hierarchy is linear in the constants.
    """

    __slots__ = ("const", "lin")

    def __init__(self, const=0, lin=None):
        if isinstance(const, int):
            const = Fraction(const)
        self.const = const
        self.lin = {i: c for i, c in lin.items() if c} if lin else {}

    @classmethod
    def var(cls, index: int, coeff=1) -> "AffineForm":
        return cls(0, {index: Fraction(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def lift(cls, x) -> "AffineForm":
        return x if isinstance(x, AffineForm) else cls(x)

    def is_scalar(self) -> bool:
        return not self.lin

    def indices(self):
        return sorted(self.lin)

    def coefficient(self, index: int):
        return self.lin.get(index, Fraction(0))

    def __bool__(self):
        return bool(self.const) or bool(self.lin)

    def __eq__(self, other):
        if isinstance(other, AffineForm):
            return self.const == other.const and self.lin == other.lin
        if isinstance(other, _SCALARS):
            return not self.lin and self.const == other
        return NotImplemented

    def __hash__(self):
        if not self.lin:
            return hash(self.const)
        return hash((self.const, tuple(sorted(self.lin.items(), key=lambda kv: kv[0]))))

    def __add__(self, other):
        if isinstance(other, AffineForm):
            lin = dict(self.lin)
            for i, c in other.lin.items():
                lin[i] = lin[i] + c if i in lin else c
            return AffineForm(self.const + other.const, lin)
        if isinstance(other, _SCALARS):
            out = AffineForm.__new__(AffineForm)
            out.const = self.const + other
            out.lin = self.lin
            return out
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        out = AffineForm.__new__(AffineForm)
        out.const = -self.const
        out.lin = {i: -c for i, c in self.lin.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (AffineForm,) + _SCALARS):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _SCALARS):
            return (-self) + other
        return NotImplemented

    def _scale(self, s):
        if not s:
            return AffineForm(0 * self.const)
        out = AffineForm.__new__(AffineForm)
        out.const = self.const * s
        out.lin = {i: c * s for i, c in self.lin.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return self._scale(other)
        if isinstance(other, AffineForm):
            if not other.lin:
                return self._scale(other.const)
            if not self.lin:
                return other._scale(self.const)
            raise NonlinearInConstants(f"({self}) * ({other})")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, AffineForm):
            if other.lin:
                raise NonlinearInConstants(f"division by {other}")
            other = other.const
        if isinstance(other, _SCALARS):
            if isinstance(other, int):
                other = Fraction(other)
            inv = 1 / other
            return self._scale(inv)
        return NotImplemented

    def substitute(self, values):
        """Replace each C_i present in ``values``; returns a scalar if nothing is left."""
        const = self.const
        rest = {}
        for i, c in self.lin.items():
            if i in values:
                const = const + c * values[i]
            else:
                rest[i] = c
        if not rest:
            return const
        return AffineForm(const, rest)

    def __repr__(self):
        return f"AffineForm({self})"

    def __str__(self):
        parts = [format_scalar(self.const)] if self.const or not self.lin else []
        for i in sorted(self.lin):
            parts.append(f"{format_scalar(self.lin[i])}*C{i}")
        return " + ".join(parts)


def as_form(x) -> AffineForm:
    return AffineForm.lift(x)


def is_constant_free(x) -> bool:
    """True when ``x`` does not involve any C_i."""
    return not isinstance(x, AffineForm) or not x.lin


def scalar_part(x):
    """The value of a constant-free coefficient as a bare scalar."""
    if isinstance(x, AffineForm):
        if x.lin:
            raise NonlinearInConstants(f"{x} still depends on constants")
        return x.const
    return x
