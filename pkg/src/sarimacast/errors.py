"""Exception types shared across the package.

Every domain error derives from :class:`SarimacastError` so callers (and the
CLI exit-code mapping) can distinguish data problems from programming bugs,
which raise plain ``ValueError``/``TypeError``.
"""

from __future__ import annotations


class SarimacastError(Exception):
    """Base class for all domain errors raised by this package."""


class NonPositiveValue(SarimacastError):
    """A value that must be strictly positive (e.g. before a log) is not."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"non-positive value {value!r} at position {index}")


class SeriesTooShort(SarimacastError):
    """The series does not have enough observations for the operation."""


class InconsistentInitials(SarimacastError):
    """Stored differencing initials do not match the transform accounting."""


class DegenerateSeries(SarimacastError):
    """The series has zero variance (or an equally unusable shape)."""


class NumericalBreakdown(SarimacastError):
    """A recursion denominator underflowed; the computation cannot continue."""


class InvalidDf(SarimacastError):
    """Portmanteau degrees of freedom would be non-positive."""


class SampleSizeOutOfRange(SarimacastError):
    """Sample size outside the validated range of the test."""


class OutOfDomain(SarimacastError):
    """Argument outside the mathematical domain of the function."""


class ShapeMismatch(SarimacastError):
    """Coefficient counts or array shapes do not match the model order."""


class NonStationaryRegion(SarimacastError):
    """AR polynomial has no stationary solution (or MA is non-invertible).

    Signaled, not fatal: the fitting objective converts it into a penalty.
    """


class NonStationaryCoefficients(SarimacastError):
    """Simulation requested from coefficients outside the admissible region."""


class AllCandidatesFailed(SarimacastError):
    """No candidate order in the search grid produced a converged fit."""


class NoAdmissibleCandidate(SarimacastError):
    """No converged candidate with admissible roots exists in the ranking."""


class InvalidLevel(SarimacastError):
    """Prediction-interval level outside (0, 1)."""


class HorizonZero(SarimacastError):
    """Forecast horizon must be a positive number of steps."""


class MisalignedCalendar(SarimacastError):
    """Two series that must share a calendar anchor do not."""


class ParseError(SarimacastError):
    """Input file could not be parsed; carries the offending line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MissingMonth(SarimacastError):
    """A month inside the configured period has no record for a category."""

    def __init__(self, category: str, year: int, month: int):
        self.category = category
        self.year = year
        self.month = month
        super().__init__(f"category {category!r} has no record for {year:04d}-{month:02d}")


class NegativeCount(SarimacastError):
    """A count in the input file is negative."""
