"""Exact verification of rank-2 commuting differential operators L = (d^2 + V)^2 + W."""

from .errors import Rank2Error
from .exactalg import EXACT, AffineForm, LaurentSeries, QuadraticField, QuadScalar
from .hierarchy import check_infinity, check_theorem_1_1, close, run
from .operators import DiffOperator, build_L, op_commutator, op_mul
from .spectral import QPoly, curve, discriminant

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "AffineForm",
    "DiffOperator",
    "LaurentSeries",
    "QPoly",
    "QuadScalar",
    "QuadraticField",
    "Rank2Error",
    "build_L",
    "check_infinity",
    "check_theorem_1_1",
    "close",
    "curve",
    "discriminant",
    "op_commutator",
    "op_mul",
    "run",
]
