"""Ordinary differential operators sum c_k d^k with Laurent-series coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import CenterMismatch
from .exactalg import EXACT, LaurentSeries


def _series(c, center):
    if isinstance(c, LaurentSeries):
        return c
    return LaurentSeries.constant(Fraction(c) if isinstance(c, int) else c, EXACT, center)


class DiffOperator:
    """Immutable operator; ``coeffs[k]`` multiplies d^k.  Trailing zero coefficients are dropped."""

    __slots__ = ("coeffs", "center")

    def __init__(self, coeffs, center="origin"):
        cs = [_series(c, center) for c in coeffs]
        for c in cs:
            if c.center != center:
                raise CenterMismatch(f"{c.center!r} vs {center!r}")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.center = center

    @classmethod
    def d(cls, k: int = 1, center="origin") -> "DiffOperator":
        one = LaurentSeries.constant(Fraction(1), EXACT, center)
        zero = LaurentSeries.zero(EXACT, center)
        return cls([zero] * k + [one], center)

    @classmethod
    def mult(cls, f, center=None) -> "DiffOperator":
        if center is None:
            center = f.center if isinstance(f, LaurentSeries) else "origin"
        return cls([f], center)

    @classmethod
    def zero(cls, center="origin") -> "DiffOperator":
        return cls([], center)

    @property
    def order(self) -> int:
        """-1 for the zero operator."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> LaurentSeries:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return LaurentSeries.zero(EXACT, self.center)

    def _lift(self, other):
        if isinstance(other, DiffOperator):
            if other.center != self.center:
                raise CenterMismatch(f"{self.center!r} vs {other.center!r}")
            return other
        if isinstance(other, (int, Fraction, LaurentSeries)):
            return DiffOperator.mult(_series(other, self.center), self.center)
        return None

    def __add__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        n = max(len(self.coeffs), len(b.coeffs))
        return DiffOperator([self.coefficient(k) + b.coefficient(k) for k in range(n)], self.center)

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator([-c for c in self.coeffs], self.center)

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

    def __mul__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return op_mul(self, b)

    def __rmul__(self, other):
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return op_mul(b, self)

    def __pow__(self, k: int):
        out = DiffOperator.mult(LaurentSeries.constant(Fraction(1), EXACT, self.center))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.center == other.center and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.center, self.coeffs))

    def __repr__(self):
        terms = [f"({c})*d^{k}" for k, c in enumerate(self.coeffs) if c]
        return "DiffOperator(" + (" + ".join(terms) or "0") + ")"

    def apply(self, psi: LaurentSeries, shift=None) -> LaurentSeries:
        """Apply to ``psi``, or to ``x^shift * psi`` when ``shift`` is given.

        With a shift the result ``T`` satisfies ``A(x^shift psi) = x^shift T``;
        ``shift`` may live in a quadratic extension, derivatives then use
        falling factorials of ``shift + e``.
        """
        if psi.center != self.center:
            raise CenterMismatch(f"{psi.center!r} vs {self.center!r}")
        out = LaurentSeries.zero(EXACT, self.center)
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            out = out + c * _twisted_derivative(psi, k, shift)
        return out


def _twisted_derivative(psi: LaurentSeries, k: int, shift) -> LaurentSeries:
    if shift is None:
        return psi.derivative(k)
    if k == 0:
        return psi
    out = []
    for i, c in enumerate(psi.coeffs):
        f = 1
        s = shift + (psi.lo + i)
        for j in range(k):
            f = f * (s - j)
        out.append(c * f)
    return LaurentSeries(out, psi.lo - k, psi.order - k, psi.center)


def op_mul(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Composition A.B, moving d past coefficients by the Leibniz rule."""
    if A.center != B.center:
        raise CenterMismatch(f"{A.center!r} vs {B.center!r}")
    if A.is_zero() or B.is_zero():
        return DiffOperator.zero(A.center)
    out = [LaurentSeries.zero(EXACT, A.center)] * (A.order + B.order + 1)
    derivs = {}
    for j, b in enumerate(B.coeffs):
        if b.is_zero():
            continue
        for i, a in enumerate(A.coeffs):
            if a.is_zero():
                continue
            for r in range(0, i + 1):
                key = (j, r)
                if key not in derivs:
                    derivs[key] = b.derivative(r)
                br = derivs[key]
                if br.is_zero():
                    continue
                out[i + j - r] = out[i + j - r] + (a * br) * comb(i, r)
    return DiffOperator(out, A.center)


def op_commutator(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    return op_mul(A, B) - op_mul(B, A)


def build_L(V: LaurentSeries, W: LaurentSeries) -> DiffOperator:
    """d^4 + 2V d^2 + 2V' d + (V^2 + V'' + W)."""
    c = W.center
    zero = LaurentSeries.zero(EXACT, c)
    one = LaurentSeries.constant(Fraction(1), EXACT, c)
    return DiffOperator(
        [V * V + V.derivative(2) + W, V.derivative(1) * 2, V * 2, zero, one], c
    )


def _poly(*coeffs):
    return LaurentSeries.polynomial(coeffs)


def dixmier_rank2(alpha, quadratic_tail: bool = False) -> tuple[DiffOperator, DiffOperator]:
    """L = (d^2 + x^3 + a)^2 + 2x and M = H^3 + (3/2)(xH + Hx), H = d^2 + x^3 + a.

    Expanded, M = H^3 + 3x d^2 + 3d + 3x(x^3 + a).  ``quadratic_tail=True``
    uses 3x(x^2 + a) for the last term; that operator does not commute with L.
    """
    a = Fraction(alpha)
    H = DiffOperator.d(2) + _poly(a, 0, 0, 1)
    L = H * H + _poly(0, 2)
    tail = _poly(0, 3 * a, 0, 3) if quadratic_tail else _poly(0, 3 * a, 0, 0, 3)
    M = H * H * H + DiffOperator([tail, _poly(3), _poly(0, 3)])
    return L, M


def dixmier_rank3(alpha) -> tuple[DiffOperator, DiffOperator]:
    """L = (d^3 + x^2 + a)^2 + 2d and M = (d^3 + x^2 + a)^3 + 3d^4 + 3(x^2 + a)d + 3x."""
    a = Fraction(alpha)
    H = DiffOperator.d(3) + _poly(a, 0, 1)
    L = H * H + DiffOperator.d(1) * 2
    M = H * H * H + DiffOperator.d(4) * 3 + DiffOperator([_poly(0, 3), _poly(3 * a, 0, 3)])
    return L, M


__all__ = [
    "DiffOperator",
    "build_L",
    "dixmier_rank2",
    "dixmier_rank3",
    "op_commutator",
    "op_mul",
]
