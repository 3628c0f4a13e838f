"""Q(x, z), the commutativity relation, the spectral curve w^2 = F(z) and its discriminant.

Polynomials in z are lists of x-series, index i holding the z^i coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientTruncation, XDependence
from .exactalg import EXACT, LaurentSeries, bareiss_determinant
from .exactalg.affine import scalar_part


@dataclass(frozen=True)
class QPoly:
    """Q = z^g + a_1 z^(g-1) + ... + a_g with x-series a_i free of constants."""

    g: int
    a: tuple

    def __post_init__(self):
        if len(self.a) != self.g:
            raise ValueError(f"need {self.g} coefficients, got {len(self.a)}")
        for s in self.a:
            if not s.is_constant_free():
                raise ValueError("Q coefficients must not depend on unsolved constants")

    @classmethod
    def from_closure(cls, closure, center) -> "QPoly":
        return cls(closure.state.g, tuple(closure.q_coefficients(center)))

    def z_coeffs(self, center) -> list[LaurentSeries]:
        """Ascending in z: [a_g, ..., a_1, 1]."""
        one = LaurentSeries.constant(Fraction(1), EXACT, center)
        return list(reversed(self.a)) + [one]


@dataclass(frozen=True)
class SpectralCurve:
    coeffs: tuple
    discriminant: object

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _pmul(p, q):
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            t = a * b
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return out


def _padd(*ps):
    n = max(len(p) for p in ps)
    out = []
    for i in range(n):
        terms = [p[i] for p in ps if i < len(p)]
        acc = terms[0]
        for t in terms[1:]:
            acc = acc + t
        out.append(acc)
    return out


def _pscale(p, s):
    return [c * s for c in p]


def _pd(p, k=1):
    return [c.derivative(k) for c in p]


def _pmul_series(p, s):
    return [c * s for c in p]


def _shift_z(p):
    """Multiply by z."""
    zero = LaurentSeries.zero(EXACT, p[0].center)
    return [zero] + list(p)


def verify_relation(Q: QPoly, V: LaurentSeries, W: LaurentSeries) -> dict:
    """Residual of Q^(5) + 4VQ''' + 6V'Q'' + 2Q'(2z - 2W + V'') - 2QW', per power of z.

    The relation holds when every entry of ``residual`` is the zero series;
    ``max_nonzero`` reports the first offending (z-power, series) pair.
    """
    c = W.center
    q = Q.z_coeffs(c)
    d1, d2, d3, d5 = _pd(q, 1), _pd(q, 2), _pd(q, 3), _pd(q, 5)
    Vp, Vpp, Wp = V.derivative(1), V.derivative(2), W.derivative(1)
    res = _padd(
        d5,
        _pscale(_pmul_series(d3, V), 4),
        _pscale(_pmul_series(d2, Vp), 6),
        _pscale(_shift_z(d1), 4),
        _pscale(_pmul_series(d1, Vpp - W * 2), 2),
        _pscale(_pmul_series(q, Wp), -2),
    )
    bad = [(i, s) for i, s in enumerate(res) if not s.is_zero()]
    orders = [s.order for s in res]
    return {
        "residual": res,
        "zero": not bad,
        "max_nonzero": bad[0] if bad else None,
        "valid_below": min(orders),
    }


def curve_polynomial(Q: QPoly, V: LaurentSeries, W: LaurentSeries) -> list[LaurentSeries]:
    """4F(z) = 4(z - W)Q^2 - 4V(Q')^2 + (Q'')^2 - 2Q'Q''' + 2Q(2V'Q' + 4VQ'' + Q^(4))."""
    c = W.center
    q = Q.z_coeffs(c)
    d1, d2, d3, d4 = _pd(q, 1), _pd(q, 2), _pd(q, 3), _pd(q, 4)
    Vp = V.derivative(1)
    qq = _pmul(q, q)
    inner = _padd(_pscale(_pmul_series(d1, Vp), 2), _pscale(_pmul_series(d2, V), 4), d4)
    return _padd(
        _pscale(_shift_z(qq), 4),
        _pscale(_pmul_series(qq, W), -4),
        _pscale(_pmul_series(_pmul(d1, d1), V), -4),
        _pmul(d2, d2),
        _pscale(_pmul(d1, d3), -2),
        _pscale(_pmul(q, inner), 2),
    )


def curve(Q: QPoly, V: LaurentSeries, W: LaurentSeries, min_checked: int = 1) -> SpectralCurve:
    """Spectral curve from Q; every z-coefficient of 4F must be x-independent.

    ``min_checked`` is the exponent below which each coefficient must be
    known exactly; anything shorter raises InsufficientTruncation.
    """
    four_f = curve_polynomial(Q, V, W)
    coeffs = []
    for i, s in enumerate(four_f):
        if s.order < min_checked:
            raise InsufficientTruncation(f"z^{i} coefficient of 4F known only below x^{s.order}")
        for e, v in s.items():
            if e != 0:
                raise XDependence(i, s)
        coeffs.append(scalar_part(s.coeff(0)) / 4)
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    return SpectralCurve(tuple(coeffs), discriminant(coeffs))


def sylvester_matrix(p, q):
    """Sylvester matrix of two polynomials given in ascending coefficient order."""
    m, n = len(p) - 1, len(q) - 1
    pd, qd = list(reversed(p)), list(reversed(q))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + pd + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + qd + [Fraction(0)] * (size - n - 1 - i))
    return rows


def resultant(p, q):
    return bareiss_determinant(sylvester_matrix(p, q))


def discriminant(F):
    """disc(F) = (-1)^(n(n-1)/2) Res(F, F') / lead(F), ascending coefficients."""
    F = list(F)
    while len(F) > 1 and not F[-1]:
        F.pop()
    n = len(F) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    dF = [F[i] * i for i in range(1, n + 1)]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(F, dF) / F[-1]


__all__ = [
    "QPoly",
    "SpectralCurve",
    "curve",
    "curve_polynomial",
    "discriminant",
    "resultant",
    "sylvester_matrix",
    "verify_relation",
]
