import time
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from rank2comm.exactalg import LaurentSeries, QuadraticField
from rank2comm.operators import (
    DiffOperator,
    build_L,
    dixmier_rank2,
    dixmier_rank3,
    op_commutator,
    op_mul,
)

x = sp.Symbol("x")
ints = st.integers(-5, 5)
polys = st.lists(ints, min_size=0, max_size=5).map(LaurentSeries.polynomial)
ops = st.lists(polys, min_size=1, max_size=4).map(DiffOperator)
D = DiffOperator.d()
X = DiffOperator.mult(LaurentSeries.polynomial([0, 1]))


def sym(s: LaurentSeries):
    return sum(sp.Rational(c.numerator, c.denominator) * x**e for e, c in s.items())


def sym_apply(A: DiffOperator, f):
    return sp.expand(sum(sym(c) * sp.diff(f, x, k) for k, c in enumerate(A.coeffs)))


def test_leibniz_base_cases():
    assert op_mul(D, X) == X * D + 1
    assert op_commutator(D, X) == DiffOperator([1])
    assert DiffOperator.d(2) * DiffOperator.d(3) == DiffOperator.d(5)


def test_square_expansion():
    V = LaurentSeries.polynomial([1, 0, 3, 1])
    H = DiffOperator.d(2) + V
    zero = LaurentSeries.zero()
    expected = DiffOperator([V * V + V.derivative(2), V.derivative() * 2, V * 2, zero, 1])
    assert H * H == expected
    assert build_L(V, LaurentSeries.zero()) == expected


@given(ops, ops, ops)
def test_associativity(A, B, C):
    assert (A * B) * C == A * (B * C)


@given(ops, ops)
def test_commutator_order_drops(A, B):
    K = op_commutator(A, B)
    assert K.order <= A.order + B.order - 1 or K.is_zero()


@given(ops, ops, st.lists(ints, min_size=1, max_size=6))
def test_composition_matches_sympy(A, B, f):
    fs = sum(c * x**i for i, c in enumerate(f))
    assert sp.expand(sym_apply(A * B, fs) - sym_apply(A, sym_apply(B, fs))) == 0


@given(polys, polys, st.lists(ints, min_size=1, max_size=6))
def test_build_L_agrees_with_composition(V, W, f):
    psi = LaurentSeries.polynomial(f)
    H = DiffOperator.d(2) + V
    assert build_L(V, W).apply(psi) == (H * H + W).apply(psi)


@pytest.mark.parametrize("alpha", [0, 1, -3])
def test_dixmier_pairs_commute(alpha):
    t0 = time.perf_counter()
    L, M = dixmier_rank2(alpha)
    assert (L.order, M.order) == (4, 6)
    assert op_commutator(L, M).is_zero()
    L3, M3 = dixmier_rank3(alpha)
    assert (L3.order, M3.order) == (6, 9)
    assert op_commutator(L3, M3).is_zero()
    assert time.perf_counter() - t0 < 1


def test_quadratic_tail_variant_does_not_commute():
    L, M = dixmier_rank2(1, quadratic_tail=True)
    assert not op_commutator(L, M).is_zero()


def test_mironov_operators():
    L = build_L(LaurentSeries.polynomial([0, 0, 0, 1]), LaurentSeries.polynomial([0, 2]))
    assert L == dixmier_rank2(0)[0]
    A = Fraction(2)
    L5 = build_L(LaurentSeries.polynomial([0] * 5 + [A]), LaurentSeries.polynomial([0, 0, 0, 18 * A]))
    H = DiffOperator.d(2) + LaurentSeries.polynomial([0] * 5 + [A])
    assert L5 == H * H + LaurentSeries.polynomial([0, 0, 0, 18 * A])


def test_twisted_application():
    # d^2 applied to x^s (1 + x) = x^s (s(s-1) x^-2 + (s+1)s x^-1)
    K = QuadraticField(-3, -10)
    s = K.gen
    psi = LaurentSeries.polynomial([1, 1])
    out = DiffOperator.d(2).apply(psi, shift=s)
    assert out.coeff(-2) == s * (s - 1)
    assert out.coeff(-1) == (s + 1) * s
    assert DiffOperator.d(2).apply(psi) == LaurentSeries.zero()
