"""Exact linear solving for the integration constants, plus Bareiss determinants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .affine import AffineForm, as_form


@dataclass(frozen=True)
class UniqueSolution:
    values: dict

    @property
    def consistent(self) -> bool:
        return True


@dataclass(frozen=True)
class Underdetermined:
    """``values`` pins free constants to zero; ``free`` lists their indices."""

    values: dict
    free: tuple = field(default_factory=tuple)

    @property
    def consistent(self) -> bool:
        return True


@dataclass(frozen=True)
class Inconsistent:
    """``witness`` is the reduced equation 0 = nonzero; ``source`` the input row it came from."""

    witness: AffineForm
    source: int

    @property
    def consistent(self) -> bool:
        return False


def solve_linear(equations, unknowns=None):
    """Solve ``form == 0`` for every form in ``equations`` by exact elimination.

    ``unknowns`` adds constant indices that must appear in the answer even if
    no equation mentions them.  Returns :class:`UniqueSolution`,
    :class:`Underdetermined` (free constants set to 0) or :class:`Inconsistent`.
    """
    forms = [as_form(e) for e in equations]
    idx = set(unknowns or ())
    for f in forms:
        idx.update(f.lin)
    idx = sorted(idx)
    col = {i: k for k, i in enumerate(idx)}
    ncol = len(idx)

    rows = []
    for src, f in enumerate(forms):
        row = [Fraction(0)] * (ncol + 1)
        for i, c in f.lin.items():
            row[col[i]] = c
        row[ncol] = -f.const
        rows.append((src, row))

    pivots = []
    r = 0
    for c in range(ncol):
        p = next((k for k in range(r, len(rows)) if rows[k][1][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        src, prow = rows[r]
        inv = 1 / prow[c]
        prow = [x * inv for x in prow]
        rows[r] = (src, prow)
        for k in range(len(rows)):
            if k != r and rows[k][1][c]:
                s, krow = rows[k]
                factor = krow[c]
                rows[k] = (s, [a - factor * b for a, b in zip(krow, prow)])
        pivots.append(c)
        r += 1

    for src, row in rows[r:]:
        if row[ncol]:
            return Inconsistent(AffineForm(-row[ncol]), src)

    free = [idx[c] for c in range(ncol) if c not in pivots]
    values = {i: Fraction(0) for i in free}
    for k, c in enumerate(pivots):
        values[idx[c]] = rows[k][1][ncol]
    values = dict(sorted(values.items()))
    if free:
        return Underdetermined(values, tuple(free))
    return UniqueSolution(values)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def bareiss_determinant(matrix):
    """Determinant by fraction-free (Bareiss) elimination.

    Rational matrices are scaled row-wise to integers first so the whole
    elimination runs in exact integer arithmetic; other field entries use the
    same recurrence with exact field division.
    """
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if all(_is_rational(x) for row in matrix for x in row):
        scale = Fraction(1)
        m = []
        for row in matrix:
            row = [Fraction(x) for x in row]
            den = math.lcm(*(x.denominator for x in row))
            scale *= den
            m.append([int(x * den) for x in row])
        return Fraction(_bareiss(m, lambda a, b: a // b, 0), 1) / scale
    m = [list(row) for row in matrix]
    return _bareiss(m, lambda a, b: a / b, Fraction(0))


def _bareiss(m, exact_div, zero):
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return zero
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pkk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            rowi, rowk = m[i], m[k]
            for j in range(k + 1, n):
                rowi[j] = exact_div(rowi[j] * pkk - mik * rowk[j], prev)
            rowi[k] = zero
        prev = pkk
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def gaussian_determinant(matrix):
    """Plain elimination determinant over any exact field (used as a cross-check)."""
    m = [list(row) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k]), None)
        if p is None:
            return Fraction(0)
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        det = det * m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return det


__all__ = [
    "Inconsistent",
    "Underdetermined",
    "UniqueSolution",
    "bareiss_determinant",
    "gaussian_determinant",
    "solve_linear",
]
