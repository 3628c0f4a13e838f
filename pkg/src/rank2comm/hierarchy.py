"""The f_j recursion for L = (d^2 + V)^2 + W, closure solving and the pole checks.

With f_1 = W/2 + C_1 and

    4 f_{j+1}' = -f_j^(5) - 4 V f_j''' - 6 V' f_j'' + 2 (2W - V'') f_j' + 2 W' f_j,

L commutes with an operator of order 4g+2 (rank 2, hyperelliptic genus g)
exactly when constants C_1..C_g make f_{g+1} constant.  For V = 0 and W = u
the right-hand side is 4 (u f' + u' f / 2 - f^(5) / 4).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InsufficientTruncation, ObstructionError, ResidueNonZero
from .exactalg import (
    EXACT,
    AffineForm,
    Inconsistent,
    LaurentSeries,
    Underdetermined,
    solve_linear,
)
from .exactalg.affine import is_constant_free
from .potentials import (
    LocalPotential,
    PoleData,
    Potential,
    PotentialClass,
    PolynomialPotential,
    quantized_strength,
    quantum_number,
)


def required_order(g: int, tail: int = -1) -> int:
    """Smallest expansion order certifying f_{g+1} below x^(tail+1)."""
    return tail + 4 * (g + 1) + 1


def auto_truncation(g: int, tail: int = 4) -> int:
    """Default expansion order: enough for closure plus the spectral curve.

    The hierarchy loses 4 orders per step; the curve products lose about 8g.
    """
    return max(required_order(g, tail), tail + 8 * g + 5)


@dataclass(frozen=True)
class Obstruction:
    center: str
    exponent: int | None
    form: object
    tag: str
    step: int | None = None
    detail: str = ""

    def __str__(self):
        where = f"{self.center}"
        if self.exponent is not None:
            where += f", x^{self.exponent}"
        if self.step is not None:
            where += f", step {self.step}"
        return f"[{self.tag}] {where}: {self.form} {self.detail}".rstrip()


@dataclass
class HierarchyState:
    g: int
    kind: PotentialClass
    order: object
    f: dict = field(default_factory=dict)
    V: dict = field(default_factory=dict)
    W: dict = field(default_factory=dict)
    residue_constraints: list = field(default_factory=list)

    @property
    def constants(self) -> list[int]:
        return list(range(1, self.g + 2))

    def last(self, center) -> LaurentSeries:
        return self.f[center][-1]


def _is_zero_V(V: LaurentSeries) -> bool:
    return V.is_zero() and V.is_exact


def _rhs(f: LaurentSeries, V: LaurentSeries, W: LaurentSeries) -> LaurentSeries:
    """f_{j+1}' as a series."""
    d1 = f.derivative(1)
    d5 = f.derivative(5)
    if _is_zero_V(V):
        return W * d1 + (W.derivative(1) * f) / 2 - d5 / 4
    d2 = f.derivative(2)
    d3 = f.derivative(3)
    Vp, Vpp, Wp = V.derivative(1), V.derivative(2), W.derivative(1)
    total = -d5 - (V * d3) * 4 - (Vp * d2) * 6 + ((W * 2 - Vpp) * d1) * 2 + (Wp * f) * 2
    return total / 4


def _step(f, V, W, next_index):
    rhs = _rhs(f, V, W)
    residue = rhs.residue()
    if residue and not is_constant_free(residue):
        rhs = rhs.without_residue()
    else:
        residue = None
    return rhs.antiderivative() + AffineForm.var(next_index), residue


def step(f: LaurentSeries, V: LaurentSeries, W: LaurentSeries, next_constant_index: int) -> LaurentSeries:
    """One hierarchy step: C_next + integral of the recursion right-hand side.

    Raises ResidueNonZero when the integrand has an x^-1 term.
    """
    rhs = _rhs(f, V, W)
    return rhs.antiderivative() + AffineForm.var(next_constant_index)


def first(W: LaurentSeries) -> LaurentSeries:
    return W / 2 + AffineForm.var(1)


def run(p: Potential, g: int, order=None) -> HierarchyState:
    """Compute f_1..f_{g+1} at every center of ``p``.

    Residues that depend on the constants become extra linear constraints;
    a residue that is a nonzero number raises ObstructionError.
    """
    if g < 1:
        raise ValueError("genus must be >= 1")
    if p.kind is PotentialClass.ENTIRE:
        order = EXACT
    else:
        if order is None:
            order = auto_truncation(g)
        if order < required_order(g):
            raise InsufficientTruncation(
                f"order {order} < {required_order(g)} needed to certify principal parts of f_{g + 1}"
            )
    Ws = p.local_expansions(order)
    Vs = p.local_V(order)
    state = HierarchyState(g=g, kind=p.kind, order=order, V=Vs, W=Ws)
    for c in p.centers():
        V, W = Vs[c], Ws[c]
        fs = [first(W)]
        for j in range(1, g + 1):
            try:
                nxt, residue = _step(fs[-1], V, W, j + 1)
            except ResidueNonZero as exc:
                raise ObstructionError(Obstruction(c, -1, exc.residue, "residue", step=j + 1)) from exc
            if residue is not None:
                state.residue_constraints.append((c, j + 1, residue))
            fs.append(nxt)
        state.f[c] = fs
    return state


@dataclass
class Closure:
    constants: dict
    free: tuple
    certificate: dict
    state: HierarchyState

    def q_coefficients(self, center) -> list[LaurentSeries]:
        """a_1..a_g with the solved constants substituted."""
        return [f.substitute(self.constants) for f in self.state.f[center][: self.state.g]]

    def f_last(self, center) -> LaurentSeries:
        return self.state.f[center][-1].substitute(self.constants)


def closure_equations(state: HierarchyState):
    """(center, exponent, tag, form) rows that must vanish for closure."""
    rows = []
    for c, fs in state.f.items():
        f = fs[-1]
        if state.kind is PotentialClass.ENTIRE:
            if not f.is_exact:
                raise InsufficientTruncation("entire-class closure needs exact polynomials")
            for e, coef in f.items():
                if e != 0:
                    rows.append((c, e, "closure", coef))
        else:
            if f.order <= -1:
                raise InsufficientTruncation(f"f_{state.g + 1} at {c} is valid only below x^{f.order}")
            for e, coef in f.items():
                if e < 0:
                    rows.append((c, e, "Corollary1.2", coef))
    for c, j, residue in state.residue_constraints:
        rows.append((c, -1, "residue", residue))
    return rows


def close(state: HierarchyState, p: Potential | None = None) -> Closure:
    """Choose C_1..C_g so f_{g+1} is constant; raise ObstructionError if impossible.

    Rational, elliptic and local classes need only the principal parts to
    vanish (no poles and no growth means constant).  The Taylor tail is then
    checked as a redundant self-test and recorded in the certificate.
    """
    rows = closure_equations(state)
    verdict = solve_linear([r[3] for r in rows], unknowns=range(1, state.g + 1))
    if isinstance(verdict, Inconsistent):
        c, e, tag, form = rows[verdict.source]
        raise ObstructionError(
            Obstruction(c, e, form, tag, step=state.g + 1, detail=f"(reduces to 0 = {verdict.witness})")
        )
    values = {i: v for i, v in verdict.values.items() if i <= state.g}
    free = tuple(i for i in getattr(verdict, "free", ()) if i <= state.g)
    extra = {i: v for i, v in verdict.values.items() if i > state.g}
    if extra:
        # a residue constraint may also fix C_{g+1}; it only shifts the constant value
        values.update(extra)

    cert = {"centers": {}, "liouville": state.kind is not PotentialClass.ENTIRE}
    for c, fs in state.f.items():
        f = fs[-1].substitute(values)
        principal_zero = all(coef == 0 for e, coef in f.items() if e < 0)
        tail = [(e, coef) for e, coef in f.items() if e > 0]
        cert["centers"][c] = {
            "principal_part_zero": principal_zero,
            "tail_constant": not tail,
            "checked_below": f.order,
            "constant_term": f.coeff(0) if f.order > 0 else None,
            "first_tail_term": tail[0] if tail else None,
        }
    cert["closed"] = all(v["principal_part_zero"] and v["tail_constant"] for v in cert["centers"].values())
    return Closure(constants=values, free=free, certificate=cert, state=state)


# -- pole conditions ---------------------------------------------------------


@dataclass(frozen=True)
class Pass:
    n: dict = field(default_factory=dict)
    tag: str = "Theorem1.1"

    ok = True


@dataclass(frozen=True)
class Violation:
    tag: str
    center: str | None = None
    k: int | None = None
    l: int | None = None
    exponent: int | None = None
    value: object = None
    detail: str = ""

    ok = False

    def __str__(self):
        parts = [self.tag]
        if self.center is not None:
            parts.append(f"pole {self.center}")
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.l is not None:
            parts.append(f"l={self.l}")
        if self.exponent is not None:
            parts.append(f"phi_{self.exponent}={self.value}")
        if self.detail:
            parts.append(self.detail)
        return ", ".join(parts)


def _pole_violation(center, u: LaurentSeries, g: int | None, conjecture_S: int | None = None):
    """First failed condition for one local expansion, or the pole's n."""
    if u.is_zero() or u.lo >= 0:
        return None
    if u.lo != -4:
        return Violation("Lemma3.1", center, exponent=u.lo, value=u.coeff(u.lo),
                         detail=f"pole of order {-u.lo}, expected 4")
    phi4 = u.coeff(-4)
    n = quantum_number(phi4) if is_constant_free(phi4) else None
    if n is None:
        return Violation("Lemma3.2", center, exponent=-4, value=phi4,
                         detail="phi_-4 is not n(4n+1)(4n+3)(4n+4)")
    for e in (-3, -2, -1):
        if u.coeff(e):
            return Violation("Lemma3.4", center, k=0, l=-e, exponent=e, value=u.coeff(e))
    for k in range(1, n + 1):
        for l in (1, 2, 3):
            e = 4 * k - l
            if u.coeff(e):
                return Violation("Theorem1.1", center, k=k, l=l, exponent=e, value=u.coeff(e))
    top = conjecture_S if conjecture_S is not None else (g or 0)
    for r in range(n + 1, top + 1):
        for l in (1, 3):
            e = 4 * r - l
            if u.coeff(e):
                return Violation("Theorem1.1", center, k=r, l=l, exponent=e, value=u.coeff(e),
                                 detail=f"r={r} > n={n}")
    return n


def check_theorem_1_1(p: Potential, g: int | None = None):
    """Pole-order, quantization and vanishing conditions at every pole.

    Returns :class:`Pass` with n per pole, or the first :class:`Violation`.
    Entire potentials have no finite poles and pass trivially.
    """
    if p.kind is PotentialClass.ENTIRE:
        return Pass({})
    probe = p.local_expansions(1)
    ns = {}
    for c in p.centers():
        u = probe[c]
        guess = 1
        if u.lo == -4 and is_constant_free(u.coeff(-4)):
            guess = quantum_number(u.coeff(-4)) or 1
        need = 4 * max(guess, g or 1) + 1
        u = p.local_expansions(need)[c] if not u.is_exact else u
        result = _pole_violation(c, u, g)
        if isinstance(result, Violation):
            return result
        if result is not None:
            ns[c] = result
    return Pass(ns)


def check_infinity(p: Potential):
    """A nonconstant polynomial u makes the leading coefficients grow forever.

    With u ~ phi x^m, f_k ~ A^k x^(km) and A^(k+1) = (2k+1)/(2(k+1)) phi A^k,
    which never vanishes.  Only V = 0 operators are in scope.
    """
    if p.kind is not PotentialClass.ENTIRE:
        return Pass({}, tag="Theorem1.1-infinity")
    assert isinstance(p, PolynomialPotential)
    if p.has_V:
        raise ValueError("the infinity argument applies to L = d^4 + u (V = 0) only")
    m = p.degree_W
    if m < 1:
        return Pass({}, tag="Theorem1.1-infinity")
    phi = p.W[m]
    leading = [phi / 2]
    for k in range(1, 4):
        leading.append(Fraction(2 * k + 1, 2 * (k + 1)) * phi * leading[-1])
    return Violation("Theorem1.1-infinity", "infinity", exponent=m, value=phi,
                     detail="leading coefficients " + ", ".join(str(a) for a in leading) + ", ... never vanish")


# -- closed-form oracles -----------------------------------------------------


def oracle_leading(phi4, k: int):
    """x^(-4k) coefficient of f_k for u = phi4 x^-4 + (higher terms)."""
    if k < 1:
        raise ValueError("k >= 1")
    phi4 = Fraction(phi4) if isinstance(phi4, int) else phi4
    A = phi4 / 2
    for j in range(1, k):
        A = Fraction(2 * j + 1, 2 * j + 2) * (phi4 - j * (4 * j + 1) * (4 * j + 3) * (4 * j + 4)) * A
    return A


def oracle_subleading(phi, m: int, l: int, k: int):
    """x^(4m-4k-l) coefficient of f_{k+1} for u = phi_-4 x^-4 + phi_(4m-l) x^(4m-l) + (x^(4t) terms).

    ``phi`` maps -4 and 4m-l to their coefficients.  Each step is

        B' = (q-2)(4 phi_-4 - q(q-1)(q-3)(q-4)) B / (4(q-4)) + (p-8j) psi A_j / (2(q-4))

    with q = 4m-4j+4-l the current exponent, p = 4m-l and A_j the leading
    coefficient of f_j.
    """
    if l not in (1, 2, 3):
        raise ValueError("l must be 1, 2 or 3")
    if k < 1 or m < 0:
        raise ValueError("need k >= 1 and m >= 0")
    p = 4 * m - l
    phi4 = Fraction(phi[-4]) if isinstance(phi[-4], int) else phi[-4]
    psi = Fraction(phi[p]) if isinstance(phi[p], int) else phi[p]
    A = phi4 / 2
    B = psi / 2
    for j in range(1, k + 1):
        q = 4 * m - 4 * j + 4 - l
        B = (
            Fraction(q - 2, 4 * (q - 4)) * (4 * phi4 - q * (q - 1) * (q - 3) * (q - 4)) * B
            + Fraction(p - 8 * j, 2 * (q - 4)) * psi * A
        )
        A = Fraction(2 * j + 1, 2 * j + 2) * (phi4 - j * (4 * j + 1) * (4 * j + 3) * (4 * j + 4)) * A
    return B


def subleading_k_factor(phi4, m: int, l: int, k: int):
    """K with A^{k+1}_{4m-4k-l} = phi_(4m-l) * K; independent of phi_(4m-l)."""
    return oracle_subleading({-4: phi4, 4 * m - l: Fraction(1)}, m, l, k)


# -- conjecture explorer -----------------------------------------------------


def explore_conjecture(poles, order=None, potential: Potential | None = None) -> dict:
    """Exploratory run for several poles with quantized data.

    With S = sum(n_i) + 1, runs the hierarchy to f_{S+1} and reports whether
    the constants can kill every principal part.  ``potential`` supplies the
    expansions (e.g. a RationalPotential, whose poles see each other);
    without it the raw local data of ``poles`` is used.  Failed pole
    conditions are recorded but do not stop the run.  The report is evidence
    only and never asserts the underlying claim.
    """
    poles = [p if isinstance(p, PoleData) else PoleData(**p) for p in poles]
    pot = potential if potential is not None else LocalPotential(poles)
    report = {"exploratory": True, "poles": [p.name for p in poles]}
    ns = {}
    probe = pot.local_expansions(1)
    for c in pot.centers():
        u = probe[c]
        n = quantum_number(u.coeff(-4)) if u.lo == -4 and is_constant_free(u.coeff(-4)) else None
        if n is None:
            v = _pole_violation(c, u.truncate(-3), None) if u.lo < 0 else None
            report.update(status="rejected", S=None,
                          violation=str(v) if v else f"{c}: no quantized fourth-order pole")
            return report
        ns[c] = n
    S = sum(ns.values()) + 1
    report["S"] = S
    if order is None:
        order = max(auto_truncation(S, tail=0), max((max(p.phi) for p in poles if p.phi), default=0) + 1)
    report["truncation"] = order
    expansions = pot.local_expansions(order)
    conditions = "pass"
    for c in pot.centers():
        v = _pole_violation(c, expansions[c], None, conjecture_S=S)
        if isinstance(v, Violation):
            conditions = str(v)
            break
    report["pole_conditions"] = conditions
    try:
        state = run(pot, S, order)
        cl = close(state, pot)
    except ObstructionError as exc:
        report.update(status="unsolvable", obstruction=str(exc.obstruction))
        return report
    rows = closure_equations(state)
    report.update(
        status="solvable",
        equations=len(rows),
        constants=cl.constants,
        free=list(cl.free),
        principal_parts_vanish=all(v["principal_part_zero"] for v in cl.certificate["centers"].values()),
        tail_constant=all(v["tail_constant"] for v in cl.certificate["centers"].values()),
    )
    return report


__all__ = [
    "Closure",
    "HierarchyState",
    "Obstruction",
    "Pass",
    "Violation",
    "auto_truncation",
    "check_infinity",
    "check_theorem_1_1",
    "close",
    "closure_equations",
    "explore_conjecture",
    "first",
    "oracle_leading",
    "oracle_subleading",
    "quantized_strength",
    "required_order",
    "run",
    "step",
    "subleading_k_factor",
]
