"""Frobenius analysis of d^4 + u at a fourth-order pole.

With psi = sum c_m x^(sigma+m) and x^4 (u - lam) = sum_k p_k x^k, the
eigenfunction equation becomes

    c_m f0(sigma+m) + sum_{k=1..m} p_k c_{m-k} = 0,   f0(s) = [s]_4 + phi_-4.

For quantized phi_-4 = n(4n+1)(4n+3)(4n+4) the quartic f0 splits over Q into
two irreducible quadratics.  Each is handled as one branch: sigma is the
generator of Q[t]/(quadratic), so both conjugate exponents are covered by a
single exact computation.  Exponents of the low and high factor differ by
4n+2, which is the only place a logarithm could enter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InsufficientTruncation,
    LogarithmRequired,
    NotQuantized,
    ResonantDenominator,
    UnsupportedShape,
)
from .exactalg import LaurentSeries, QuadraticField, bareiss_determinant, to_fraction
from .exactalg.scalar import is_rational_value, rational_value
from .hierarchy import Violation, check_theorem_1_1
from .operators import DiffOperator
from .potentials import quantum_number

BRANCHES = ("low", "high")

_FALLING4 = (0, -6, 11, -6, 1)  # s(s-1)(s-2)(s-3), ascending


def _peval(coeffs, s):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc


def _polymul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _has_rational_root(monic_quadratic) -> bool:
    c, b, _ = monic_quadratic
    disc = b * b - 4 * c
    if disc < 0:
        return False
    r = int(disc ** 0.5)
    while r * r > disc:
        r -= 1
    while (r + 1) * (r + 1) <= disc:
        r += 1
    return r * r == disc


@dataclass(frozen=True)
class IndicialData:
    """f0 and its factorization; polynomials are ascending coefficient tuples."""

    n: int
    phi4: Fraction
    f0: tuple
    low: tuple
    high: tuple
    label: str | None = None

    @property
    def gap(self) -> int:
        return 4 * self.n + 2

    def factor(self, branch: str) -> tuple:
        if branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}")
        return self.low if branch == "low" else self.high

    def field(self, branch: str) -> QuadraticField:
        q0, q1, _ = self.factor(branch)
        return QuadraticField(-q1, -q0, name=f"s_{branch}")

    def sigma(self, branch: str):
        return self.field(branch).gen

    def f0_at(self, s):
        return _peval(self.f0, s)

    @property
    def branch_point(self) -> bool:
        """True when no exponent is an integer, i.e. psi always branches at the pole."""
        return not (_has_rational_root(self.low) or _has_rational_root(self.high))


def indicial(phi4, label=None) -> IndicialData:
    """Indicial data for f0(s) = [s]_4 + phi4; raises NotQuantized otherwise."""
    phi4 = to_fraction(phi4)
    f0 = tuple(Fraction(c) for c in (_FALLING4[0] + phi4,) + _FALLING4[1:])
    n = quantum_number(phi4)
    if n is None:
        raise NotQuantized(phi4, f0)
    low = (Fraction(8 * n * n + 2 * n), Fraction(4 * n - 1), Fraction(1))
    high = (Fraction(8 * n * n + 14 * n + 6), Fraction(-(5 + 4 * n)), Fraction(1))
    if tuple(_polymul(low, high)) != f0:
        raise ArithmeticError(f"factorization of f0 failed for n={n}")
    return IndicialData(n, phi4, f0, low, high, label)


@dataclass(frozen=True)
class Resonance:
    m: int
    obstruction: object
    free: bool


@dataclass(frozen=True)
class FrobeniusSolution:
    branch: str
    lam: Fraction
    sigma: object
    coeffs: tuple
    resonances: tuple = ()
    center: str = "origin"

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1

    def series(self) -> LaurentSeries:
        """The analytic factor sum c_m x^m, valid below x^(M+1)."""
        return LaurentSeries(list(self.coeffs), 0, self.M + 1, self.center)


def _local_data(u: LaurentSeries, lam, M: int):
    """phi_-4 and p_1..p_M, the coefficients of x^4 (u - lam)."""
    if u.is_zero() or u.lo != -4:
        raise UnsupportedShape(f"expected a pole of order 4, got leading exponent {u.lo}")
    if u.order < M - 3:
        raise InsufficientTruncation(f"need u below x^{M - 3}, have x^{u.order}")
    vals = []
    for e in range(-4, M - 3):
        c = u.coeff(e)
        if not is_rational_value(c):
            raise UnsupportedShape(f"coefficient of x^{e} is not rational: {c}")
        vals.append(rational_value(c))
    phi4, p = vals[0], vals[1:]
    if M >= 4:
        p[3] -= lam
    return phi4, p


def frobenius_series(u_local: LaurentSeries, lam, branch: str, M: int, strict: bool = True) -> FrobeniusSolution:
    """Coefficients c_0..c_M on one branch, with c_0 = 1.

    At a resonance the obstruction sum is recorded; if it vanishes c_m is set
    to 0, otherwise LogarithmRequired is raised (or, with ``strict=False``,
    the value is recorded and c_m is still set to 0).
    """
    lam = to_fraction(lam)
    phi4, p = _local_data(u_local, lam, M)
    data = indicial(phi4)
    sigma = data.sigma(branch)
    c = [sigma ** 0]
    resonances = []
    for m in range(1, M + 1):
        rest = sum((p[k - 1] * c[m - k] for k in range(1, m + 1) if p[k - 1]), sigma * 0)
        d = data.f0_at(sigma + m)
        if d:
            c.append(-rest / d)
            continue
        if rest and strict:
            raise LogarithmRequired(m, rest)
        resonances.append(Resonance(m, rest, not rest))
        c.append(sigma * 0)
    return FrobeniusSolution(branch, lam, sigma, tuple(c), tuple(resonances), u_local.center)


def fm_determinant(u_local: LaurentSeries, lam, branch: str, m: int, c0=1):
    """c_m from the m x m determinant F_m, entry (i, j) = f_{i-j+1}(sigma + j - 1).

    c_m = (-1)^m c0 det F_m / prod_{j=1..m} f0(sigma + j).
    """
    lam = to_fraction(lam)
    phi4, p = _local_data(u_local, lam, m)
    data = indicial(phi4)
    sigma = data.sigma(branch)

    def f(k, s):
        if k < 0:
            return Fraction(0)
        if k == 0:
            return data.f0_at(s)
        return p[k - 1]

    denom = sigma ** 0
    for j in range(1, m + 1):
        d = data.f0_at(sigma + j)
        if not d:
            raise ResonantDenominator(f"f0(sigma+{j}) = 0 on the {branch} branch")
        denom = denom * d
    if m == 0:
        return sigma ** 0 * c0
    mat = [[f(i - j + 1, sigma + (j - 1)) for j in range(1, m + 1)] for i in range(1, m + 1)]
    mat = [[x if not isinstance(x, (int, Fraction)) else sigma * 0 + x for x in row] for row in mat]
    det = bareiss_determinant(mat)
    sign = -1 if m % 2 else 1
    return det * sign * c0 / denom


def eigen_residual(sol: FrobeniusSolution, u_local: LaurentSeries) -> LaurentSeries:
    """x^4 (psi'''' + (u - lam) psi) / x^sigma as a truncated series."""
    x4 = LaurentSeries.monomial(Fraction(1), 4, center=u_local.center)
    op = DiffOperator.d(4, u_local.center) + (u_local - sol.lam)
    return x4 * op.apply(sol.series(), shift=sol.sigma)


@dataclass(frozen=True)
class BranchVerdict:
    lam: Fraction
    branch: str
    ok: bool
    resonances: tuple
    structural_zero: bool
    residual_zero: bool
    residual_order: object
    fm_checked: tuple
    fm_agrees: bool
    solution: FrobeniusSolution = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class NoLogReport:
    pole: str
    n: int | None
    gate: object
    forced: bool
    refused: bool
    verdicts: tuple
    branch_point: bool
    tag: str = "Theorem1.5"

    @property
    def ok(self) -> bool:
        return not self.refused and all(v.ok for v in self.verdicts)


def no_log_check(p, pole, lambdas, M=None, force=False, fm_max=8) -> NoLogReport:
    """Run both branches past the resonance for every lambda.

    The pole conditions gate the check; a failing potential is refused unless
    ``force`` is set, in which case the obstruction values are still computed.
    """
    gate = check_theorem_1_1(p)
    if isinstance(gate, Violation) and not force:
        return NoLogReport(str(pole), None, gate, False, True, (), False)
    probe = p.local_expansions(1)[pole]
    n = quantum_number(probe.coeff(-4)) if probe.lo == -4 else None
    if n is None:
        raise NotQuantized(probe.coeff(probe.lo) if probe else 0, None)
    data = indicial(probe.coeff(-4), label=str(pole))
    if M is None:
        M = max(fm_max, data.gap + 4)
    u = p.local_expansions(M - 3)[pole]
    verdicts = []
    for lam in lambdas:
        lam = to_fraction(lam)
        _, pk = _local_data(u, lam, M)
        structural = all(not pk[k - 1] for k in range(1, M + 1) if k % 4)
        for branch in BRANCHES:
            sol = frobenius_series(u, lam, branch, M, strict=False)
            res = eigen_residual(sol, u)
            resid_zero = res.is_zero() and res.order >= M + 1
            checked = []
            agrees = True
            for m in range(1, min(fm_max, M) + 1):
                try:
                    cm = fm_determinant(u, lam, branch, m)
                except ResonantDenominator:
                    break
                checked.append(m)
                agrees = agrees and cm == sol.coeffs[m]
            ok = all(r.free for r in sol.resonances) and resid_zero and agrees
            verdicts.append(BranchVerdict(lam, branch, ok, sol.resonances, structural,
                                          resid_zero, res.order, tuple(checked), agrees, sol))
    return NoLogReport(str(pole), n, gate, force, False, tuple(verdicts), data.branch_point)


__all__ = [
    "BRANCHES",
    "BranchVerdict",
    "FrobeniusSolution",
    "IndicialData",
    "NoLogReport",
    "Resonance",
    "eigen_residual",
    "fm_determinant",
    "frobenius_series",
    "indicial",
    "no_log_check",
]
