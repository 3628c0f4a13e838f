"""Potentials u (or pairs V, W) and their local Laurent expansions at the poles.

Four kinds are supported:

* :class:`RationalPotential` -- constant plus principal parts at finitely many
  poles, no pole at infinity.
* :class:`EllipticPotential` -- ``c0 + c1*wp + c2*wp^2`` with optional copy
  shifted by a half-period (g3 = 0 only).
* :class:`PolynomialPotential` -- entire polynomial V and W around the origin.
* :class:`LocalPotential` -- raw local Laurent data per pole, for exploratory
  runs where no global function is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import UnsupportedHalfPeriod, UnsupportedShape
from .exactalg import EXACT, LaurentSeries, QuadraticField, rational_sqrt, to_fraction


class PotentialClass(str, Enum):
    RATIONAL = "RationalNoPoleAtInfinity"
    ELLIPTIC = "Elliptic"
    ENTIRE = "EntirePolynomial"
    LOCAL = "LocalData"


def quantized_strength(n: int) -> int:
    """n(4n+1)(4n+3)(4n+4): the admissible leading pole coefficients."""
    return n * (4 * n + 1) * (4 * n + 3) * (4 * n + 4)


def quantum_number(phi4) -> int | None:
    """The positive integer n with quantized_strength(n) == phi4, if any."""
    phi4 = to_fraction(phi4)
    if phi4 <= 0 or phi4.denominator != 1:
        return None
    target = phi4.numerator
    # strength(n) > 64 n^4, so n < (target/64)^(1/4) + 1
    hi = math.isqrt(math.isqrt(target // 64 + 1)) + 2
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if quantized_strength(mid) < target:
            lo = mid + 1
        else:
            hi = mid
    return lo if quantized_strength(lo) == target else None


@dataclass(frozen=True)
class PoleData:
    """Laurent data of u at one pole: ``phi[k]`` is the coefficient of (x-a)^k."""

    location: object
    phi: dict = field(default_factory=dict)
    n: int | None = None
    label: str | None = None

    def __post_init__(self):
        if isinstance(self.location, (int, str)):
            object.__setattr__(self, "location", to_fraction(self.location))
        phi = {int(k): to_fraction(v) if isinstance(v, (int, str)) else v for k, v in self.phi.items()}
        object.__setattr__(self, "phi", {k: v for k, v in sorted(phi.items()) if v})
        phi4 = self.phi.get(-4, 0)
        if self.n is not None and self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.n is not None and phi4 and quantized_strength(self.n) != phi4:
            raise ValueError(f"declared n={self.n} does not match phi_-4 = {phi4}")

    @property
    def name(self) -> str:
        if self.label is not None:
            return self.label
        return f"x={self.location}"

    @property
    def pole_order(self) -> int:
        neg = [k for k in self.phi if k < 0]
        return -min(neg) if neg else 0

    def principal_terms(self) -> dict:
        return {k: v for k, v in self.phi.items() if k < 0}


class Potential:
    kind: PotentialClass

    def centers(self) -> list[str]:
        raise NotImplementedError

    def local_expansions(self, order) -> dict[str, LaurentSeries]:
        """Laurent expansion of W (equal to u when V = 0) at every center."""
        raise NotImplementedError

    def local_V(self, order) -> dict[str, LaurentSeries]:
        return {c: LaurentSeries.zero(EXACT, c) for c in self.centers()}

    @property
    def has_V(self) -> bool:
        return False

    def to_dict(self) -> dict:
        raise NotImplementedError


# -- Weierstrass data --------------------------------------------------------


def weierstrass_series(g2, g3, order: int, center="origin") -> LaurentSeries:
    """wp(x) = x^-2 + sum_{k>=2} c_k x^(2k-2), exact below x^order.

    Normalization (wp')^2 = 4 wp^3 - g2 wp - g3.  Coefficients follow from
    wp'' = 6 wp^2 - g2/2: c_2 = g2/20, c_3 = g3/28 and
    c_k = 3/((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m} for k >= 4.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    g2, g3 = to_fraction(g2), to_fraction(g3)
    c = {2: g2 / 20, 3: g3 / 28}
    k = 4
    while 2 * k - 2 < order:
        s = sum((c[m] * c[k - m] for m in range(2, k - 1)), Fraction(0))
        c[k] = 3 * s / ((2 * k + 1) * (k - 3))
        k += 1
    terms = {-2: Fraction(1)}
    for k, v in c.items():
        terms[2 * k - 2] = v
    return LaurentSeries.from_dict(terms, order, center)


def ode_residual(w: LaurentSeries, g2, g3) -> LaurentSeries:
    """(w')^2 - 4 w^3 + g2 w + g3, for checking candidate wp-like series."""
    dw = w.derivative()
    return dw * dw - (w * w * w) * 4 + w * to_fraction(g2) + to_fraction(g3)


def half_period_root(g2, branch: str = "zero", field: QuadraticField | None = None):
    """The value e = wp(omega) for a half-period of the g3 = 0 lattice.

    The roots of 4t^3 - g2 t are 0 and +-sqrt(g2)/2.  ``zero`` is always
    rational; ``plus``/``minus`` need g2 to be a rational square or a field
    containing sqrt(g2).
    """
    g2 = to_fraction(g2)
    if branch == "zero":
        return Fraction(0)
    if branch not in ("plus", "minus"):
        raise UnsupportedHalfPeriod(f"unknown half-period branch {branch!r}")
    s = rational_sqrt(g2)
    if s is None and field is not None:
        s = field.sqrt(g2)
    if s is None:
        raise UnsupportedHalfPeriod(
            f"wp(omega) = +-sqrt({g2})/2 needs an extension field containing sqrt({g2})"
        )
    return s / 2 if branch == "plus" else -s / 2


def half_period_shift(g2, order: int, branch: str = "zero", field=None, center="origin") -> LaurentSeries:
    """Taylor series at 0 of wp(x - omega) for the g3 = 0 lattice.

    Uses wp(z + omega) = e + (3e^2 - g2/4) / (wp(z) - e) and then checks the
    result against the differential equation of wp before returning it.
    """
    g2 = to_fraction(g2)
    e = half_period_root(g2, branch, field)
    wp = weierstrass_series(g2, 0, order + 4, center)
    scale = 3 * e * e - g2 / 4
    h = (wp - e).inverse() * scale + e
    h = h.truncate(order)
    res = ode_residual(h, g2, 0)
    if not res.is_zero():
        raise ArithmeticError(f"half-period identity failed the ODE check: {res}")
    return h


# -- concrete potentials -----------------------------------------------------


def _binomial_reexpansion(coeff, power: int, shift, order: int, center) -> LaurentSeries:
    """coeff * (y + shift)^power as a Taylor series in y, for power < 0, shift != 0."""
    s = -power
    terms = {}
    binom = Fraction(1)
    for r in range(max(order, 0)):
        if r > 0:
            binom = binom * (-s - r + 1) / r
        terms[r] = coeff * binom * shift ** (-s - r)
    return LaurentSeries.from_dict(terms, order, center)


class RationalPotential(Potential):
    kind = PotentialClass.RATIONAL

    def __init__(self, poles, constant=0):
        self.poles = list(poles)
        self.constant = to_fraction(constant) if isinstance(constant, (int, str)) else constant
        locs = [p.location for p in self.poles]
        if len(set(locs)) != len(locs):
            raise ValueError("pole locations must be distinct")
        for p in self.poles:
            if any(k >= 0 for k in p.phi):
                raise ValueError("rational poles carry principal parts only (negative exponents)")

    def centers(self):
        return [p.name for p in self.poles]

    def pole(self, name) -> PoleData:
        return next(p for p in self.poles if p.name == name)

    def local_expansions(self, order):
        out = {}
        for p in self.poles:
            if len(self.poles) == 1:
                order_here = EXACT
            else:
                order_here = order
            s = LaurentSeries.from_dict(p.principal_terms(), order_here, p.name)
            s = s + self.constant if self.constant else s
            for q in self.poles:
                if q is p:
                    continue
                shift = p.location - q.location
                for k, v in q.principal_terms().items():
                    s = s + _binomial_reexpansion(v, k, shift, order_here, p.name)
            out[p.name] = s
        return out

    def to_dict(self):
        return {
            "class": self.kind.value,
            "constant": self.constant,
            "poles": [{"at": p.location, "phi": p.phi} for p in self.poles],
        }


class EllipticPotential(Potential):
    """u = c0 + c1*wp + c2*wp^2, plus the same pattern in wp(x - omega) when shifted."""

    kind = PotentialClass.ELLIPTIC

    def __init__(self, g2, g3, wp2=0, wp1=0, const=0, shift=None, field=None):
        self.g2 = to_fraction(g2)
        self.g3 = to_fraction(g3)
        self.wp2 = to_fraction(wp2)
        self.wp1 = to_fraction(wp1)
        self.const = to_fraction(const)
        self.shift = shift
        self.field = field
        if shift is not None:
            if self.g3 != 0:
                raise UnsupportedShape("half-period shifts require g3 = 0")
            half_period_root(self.g2, shift, field)

    def centers(self):
        return ["0"] if self.shift is None else ["0", "omega"]

    def _pattern(self, w: LaurentSeries) -> LaurentSeries:
        out = w * w * self.wp2 + w * self.wp1
        return out

    def local_expansions(self, order):
        wp = weierstrass_series(self.g2, self.g3, order + 4, "0")
        u = (self._pattern(wp) + self.const).truncate(order)
        if self.shift is not None:
            h = half_period_shift(self.g2, order, self.shift, self.field, "0")
            u = (u + self._pattern(h)).truncate(order)
        out = {"0": u}
        if self.shift is not None:
            # wp(y + omega) = wp(y - omega), so the expansion at omega is identical
            out["omega"] = u.recenter("omega")
        return out

    def to_dict(self):
        return {
            "class": self.kind.value,
            "g2": self.g2,
            "g3": self.g3,
            "wp2": self.wp2,
            "wp1": self.wp1,
            "const": self.const,
            "shift": self.shift,
        }


def build_elliptic_u(n: int, g2, g3, shifted: bool = False, branch: str = "zero", field=None) -> EllipticPotential:
    """n(4n+1)(4n+3)(4n+4) wp^2, optionally plus the same term at a half-period."""
    if n < 1:
        raise UnsupportedShape("n must be a positive integer")
    if shifted and (n != 1 or to_fraction(g3) != 0):
        raise UnsupportedShape("shifted potentials need n = 1 and g3 = 0")
    return EllipticPotential(g2, g3, wp2=quantized_strength(n), shift=branch if shifted else None, field=field)


class PolynomialPotential(Potential):
    """L = (d^2 + V)^2 + W with polynomial V, W (ascending coefficient lists)."""

    kind = PotentialClass.ENTIRE

    def __init__(self, V=(), W=()):
        self.V = [to_fraction(c) for c in V]
        self.W = [to_fraction(c) for c in W]

    def centers(self):
        return ["origin"]

    def local_expansions(self, order=None):
        return {"origin": LaurentSeries.polynomial(self.W)}

    def local_V(self, order=None):
        return {"origin": LaurentSeries.polynomial(self.V)}

    @property
    def has_V(self) -> bool:
        return any(self.V)

    @property
    def degree_W(self) -> int:
        nz = [i for i, c in enumerate(self.W) if c]
        return max(nz) if nz else -1

    def to_dict(self):
        return {"class": self.kind.value, "V": self.V, "W": self.W}


class LocalPotential(Potential):
    """Poles given by raw local data; coefficients not listed are taken as 0."""

    kind = PotentialClass.LOCAL

    def __init__(self, poles):
        self.poles = list(poles)
        names = [p.name for p in self.poles]
        if len(set(names)) != len(names):
            raise ValueError("pole labels must be distinct")

    def centers(self):
        return [p.name for p in self.poles]

    def pole(self, name) -> PoleData:
        return next(p for p in self.poles if p.name == name)

    def local_expansions(self, order):
        out = {}
        for p in self.poles:
            out[p.name] = LaurentSeries.from_dict(p.phi, order, p.name)
        return out

    def to_dict(self):
        return {"class": self.kind.value, "poles": [{"at": p.location, "phi": p.phi} for p in self.poles]}


def local_expansions(p: Potential, order) -> dict[str, LaurentSeries]:
    return p.local_expansions(order)
