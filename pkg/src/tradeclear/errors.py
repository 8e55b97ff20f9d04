"""Exception types shared across the package.

Each class carries the process exit code the command line maps it to:
2 for data or model validation problems, 3 for a solver that ran out of
iterations, 4 for unreadable or malformed input files.
"""


class TradeClearError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class DimensionMismatch(TradeClearError):
    """Array shapes or vector lengths do not line up."""


class NegativeEntry(TradeClearError):
    """A matrix that must be nonnegative has a negative entry."""


class PositivityViolation(TradeClearError):
    """Some good has zero world imports, so import shares are undefined."""


class IrreducibilityViolation(TradeClearError):
    """The goods coupling matrix splits into isolated trading blocks."""

    def __init__(self, message, components=()):
        super().__init__(message)
        self.components = tuple(tuple(c) for c in components)


class ZeroSpend(TradeClearError):
    """A country has zero import value at the given prices."""


class AsymmetricSchedule(TradeClearError):
    """Reduction factors for a good differ across country pairs."""

    def __init__(self, message, good, pair):
        super().__init__(message)
        self.good = good
        self.pair = pair


class FactorOutOfRange(TradeClearError):
    """A tariff or reduction factor lies outside the interval (0, 1]."""


class ConfigError(TradeClearError):
    """A scenario configuration violates its own constraints."""


class ConvergenceFailure(TradeClearError):
    """The price iteration did not settle within the iteration budget."""

    exit_code = 3

    def __init__(self, message, iterations, step_delta):
        super().__init__(message)
        self.iterations = iterations
        self.step_delta = step_delta


class InputFormatError(TradeClearError):
    """Base class for file and payload ingestion problems."""

    exit_code = 4


class ParseError(InputFormatError):
    """Malformed cell, header, or row; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SelfFlow(ParseError):
    """A flow row ships goods from a country to itself."""


class NegativeQuantity(ParseError):
    """A flow quantity is negative."""


class RaggedRows(ParseError):
    """A grid row has a different number of cells than the header."""


class NonNumericCell(ParseError):
    """A grid cell that must be numeric is not."""


class EmptyInput(InputFormatError):
    """A file or payload contains no data rows."""
