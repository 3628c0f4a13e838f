"""Exception types shared across the package."""

from __future__ import annotations


class Rank2Error(Exception):
    """Base class for every error raised by rank2comm."""


class FieldMismatch(Rank2Error):
    pass


class CenterMismatch(Rank2Error):
    pass


class InsufficientTruncation(Rank2Error):
    """A computation would read a coefficient beyond the tracked validity order."""


class NonlinearInConstants(Rank2Error):
    """A product of two forms that both depend on the integration constants."""


class ResidueNonZero(Rank2Error):
    """Antiderivative requested for a series with a nonzero x^-1 coefficient."""

    def __init__(self, residue, center=None):
        self.residue = residue
        self.center = center
        super().__init__(f"nonzero residue {residue} at {center}")


class ZeroSeries(Rank2Error):
    pass


class LeadingCoefficientNotScalar(Rank2Error):
    pass


class UnsupportedHalfPeriod(Rank2Error):
    pass


class UnsupportedShape(Rank2Error):
    pass


class XDependence(Rank2Error):
    """A z-coefficient of the spectral polynomial is not constant in x."""

    def __init__(self, index, series):
        self.index = index
        self.series = series
        super().__init__(f"coefficient of z^{index} depends on x: {series}")


class NotQuantized(Rank2Error):
    def __init__(self, phi4, quartic):
        self.phi4 = phi4
        self.quartic = quartic
        super().__init__(f"leading coefficient {phi4} is not n(4n+1)(4n+3)(4n+4)")


class LogarithmRequired(Rank2Error):
    def __init__(self, m, obstruction):
        self.m = m
        self.obstruction = obstruction
        super().__init__(f"nonzero obstruction {obstruction} at resonance m={m}")


class ResonantDenominator(Rank2Error):
    pass


class ObstructionError(Rank2Error):
    """The hierarchy cannot close; ``obstruction`` says where and why."""

    def __init__(self, obstruction):
        self.obstruction = obstruction
        super().__init__(str(obstruction))


class SpecError(Rank2Error):
    """Syntax or semantic error in a job description."""

    def __init__(self, message, line=None, column=None, expected=None):
        self.line = line
        self.column = column
        self.expected = sorted(expected) if expected else []
        where = f"{line}:{column}: " if line is not None else ""
        tail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{tail}")
