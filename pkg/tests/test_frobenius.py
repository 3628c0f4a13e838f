from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from rank2comm.errors import LogarithmRequired, NotQuantized, ResonantDenominator, UnsupportedShape
from rank2comm.exactalg import LaurentSeries
from rank2comm.frobenius import (
    eigen_residual,
    fm_determinant,
    frobenius_series,
    indicial,
    no_log_check,
)
from rank2comm.potentials import LocalPotential, PoleData, RationalPotential, build_elliptic_u, quantized_strength

s = sp.Symbol("s")


def u280(extra=None, order=20):
    return LaurentSeries.from_dict({-4: 280, **(extra or {})}, order, "x=0")


def test_indicial_n1_example():
    d = indicial(280)
    assert d.f0 == (280, -6, 11, -6, 1)
    assert d.low == (10, 3, 1) and d.high == (28, -9, 1)
    assert d.gap == 6 and d.n == 1


@pytest.mark.parametrize("n", range(1, 11))
def test_factor_product_identity(n):
    d = indicial(quantized_strength(n))
    low = sum(sp.Integer(int(c)) * s**i for i, c in enumerate(d.low))
    high = sum(sp.Integer(int(c)) * s**i for i, c in enumerate(d.high))
    assert sp.expand(low * high - (sp.ff(s, 4) + quantized_strength(n))) == 0
    assert (-d.high[1]) - (-d.low[1]) == 2 * (4 * n + 2)
    assert d.branch_point
    # negative discriminant 1 - 16n - 16n^2 in both factors
    for q in (d.low, d.high):
        assert q[1] ** 2 - 4 * q[0] == 1 - 16 * n - 16 * n * n


def test_not_quantized():
    with pytest.raises(NotQuantized) as info:
        indicial(300)
    assert info.value.quartic[0] == 300
    # phi = 0 is not a quantized pole; its quartic has the integer roots 0..3
    with pytest.raises(NotQuantized) as info:
        indicial(0)
    f0 = info.value.quartic
    assert all(sum(c * r**i for i, c in enumerate(f0)) == 0 for r in range(4))


def test_sigma_is_root_of_its_factor():
    d = indicial(2376)
    for b in ("low", "high"):
        sig = d.sigma(b)
        q = d.factor(b)
        assert q[0] + q[1] * sig + sig * sig == 0
        assert d.f0_at(sig) == 0
    assert d.f0_at(d.sigma("low") + d.gap) == 0 or d.f0_at(d.sigma("low") - d.gap) == 0


@pytest.mark.parametrize("lam", [0, 1, -2])
def test_series_280_no_log(lam):
    sol = frobenius_series(u280(), lam, "low", 12)
    assert sol.coeffs[0] == 1
    assert [r.m for r in sol.resonances] == [6]
    assert sol.resonances[0].obstruction == 0 and sol.resonances[0].free
    assert all(not c for m, c in enumerate(sol.coeffs) if m % 4)
    assert not frobenius_series(u280(), lam, "high", 12).resonances


def test_recursion_holds_at_non_resonant_m():
    sol = frobenius_series(u280({0: 3, 4: Fraction(1, 2)}), 1, "high", 12)
    d = indicial(280)
    p = {4: 2, 8: Fraction(1, 2)}  # x^4 (u - lam): phi_0 - lam = 2, phi_4 = 1/2
    for m in range(1, 13):
        total = sol.coeffs[m] * d.f0_at(sol.sigma + m) + sum(
            p.get(k, 0) * sol.coeffs[m - k] for k in range(1, m + 1))
        assert total == 0


def test_requires_quartic_pole():
    with pytest.raises(UnsupportedShape):
        frobenius_series(LaurentSeries.zero(10), 0, "low", 8)


def test_log_required_when_obstruction_nonzero():
    u = u280({2: 1})
    with pytest.raises(LogarithmRequired) as info:
        frobenius_series(u, 0, "low", 8)
    assert info.value.m == 6 and info.value.obstruction == 1
    sol = frobenius_series(u, 0, "low", 8, strict=False)
    assert not sol.resonances[0].free


@given(st.sampled_from([1, 2]), st.sampled_from(["low", "high"]),
       st.fractions(min_value=-5, max_value=5, max_denominator=3),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=3, max_size=3))
def test_fm_determinant_matches_recursion(n, branch, lam, tail):
    u = LaurentSeries.from_dict({-4: quantized_strength(n), 0: tail[0], 4: tail[1], 8: tail[2]}, 20, "p")
    sol = frobenius_series(u, lam, branch, 8)
    for m in range(0, 9):
        try:
            cm = fm_determinant(u, lam, branch, m)
        except ResonantDenominator:
            assert branch == "low" and m >= 4 * n + 2
            continue
        assert cm == sol.coeffs[m]


def test_fm_determinant_small_cases():
    u = u280({1: 7})
    sig = indicial(280).sigma("high")
    assert fm_determinant(u, 0, "high", 1) == 0
    assert fm_determinant(u, 0, "high", 5) == -7 / indicial(280).f0_at(sig + 5)
    assert fm_determinant(u, 0, "high", 3, c0=0) == 0
    with pytest.raises(ResonantDenominator):
        fm_determinant(u280(), 0, "low", 6)


def test_eigen_residual_vanishes():
    u = u280({0: 3, 4: 1})
    for branch in ("low", "high"):
        sol = frobenius_series(u, 1, branch, 12)
        res = eigen_residual(sol, u)
        assert res.is_zero() and res.order >= 13


@pytest.mark.parametrize("p,pole", [
    (RationalPotential([PoleData(0, {-4: 280})]), "x=0"),
    (build_elliptic_u(1, 4, 0), "0"),
    (build_elliptic_u(2, 1, 0), "0"),
])
def test_no_log_check_passes(p, pole):
    rep = no_log_check(p, pole, [0, 1, -2])
    assert rep.ok and rep.branch_point and not rep.refused
    assert len(rep.verdicts) == 6
    for v in rep.verdicts:
        assert v.structural_zero and v.residual_zero and v.fm_agrees
        assert all(r.obstruction == 0 for r in v.resonances)


def test_no_log_gate_and_force():
    p = LocalPotential([PoleData(0, {-4: 280, 1: 1})])
    rep = no_log_check(p, "x=0", [0])
    assert rep.refused and rep.gate.tag == "Theorem1.1" and not rep.ok
    forced = no_log_check(p, "x=0", [0], force=True)
    assert forced.forced and not forced.refused
    low = [v for v in forced.verdicts if v.branch == "low"][0]
    assert not low.structural_zero
    assert [r.m for r in low.resonances] == [6]
    # the value is reported as computed; for phi_1 it happens to vanish at m = 6
    assert low.resonances[0].obstruction == 0
    p2 = LocalPotential([PoleData(0, {-4: 280, 2: 1})])
    forced2 = no_log_check(p2, "x=0", [0], force=True)
    assert not forced2.ok
