"""Exact arithmetic substrate: scalars, affine forms, Laurent series, linear solving."""

from .affine import AffineForm, as_form, is_constant_free, scalar_part
from .linsolve import (
    Inconsistent,
    Underdetermined,
    UniqueSolution,
    bareiss_determinant,
    gaussian_determinant,
    solve_linear,
)
from .scalar import (
    QuadraticField,
    QuadScalar,
    format_scalar,
    rational_sqrt,
    rational_value,
    to_fraction,
)
from .series import (
    EXACT,
    LaurentSeries,
    series_add,
    series_antiderivative,
    series_derivative,
    series_inverse,
    series_mul,
)

__all__ = [
    "EXACT",
    "AffineForm",
    "Inconsistent",
    "LaurentSeries",
    "QuadScalar",
    "QuadraticField",
    "Underdetermined",
    "UniqueSolution",
    "as_form",
    "bareiss_determinant",
    "format_scalar",
    "gaussian_determinant",
    "is_constant_free",
    "rational_sqrt",
    "rational_value",
    "scalar_part",
    "series_add",
    "series_antiderivative",
    "series_derivative",
    "series_inverse",
    "series_mul",
    "solve_linear",
    "to_fraction",
]
