"""Exception types shared across the package."""


class KdrError(Exception):
    """Base class for all package errors."""


class InvalidConfigError(KdrError, ValueError):
    """A parameter is outside its valid range (non-positive scale, bad dim, ...)."""


class ShapeError(KdrError, ValueError):
    """Array arguments have incompatible shapes."""


class NumericError(KdrError, ArithmeticError):
    """A factorization or solve failed; usually indicates corrupted input."""


class DegenerateStepError(KdrError, ArithmeticError):
    """A trial point is rank deficient and cannot be retracted."""


class ConstantColumnError(KdrError, ValueError):
    """A covariate column has zero variance and cannot be standardized."""

    def __init__(self, column: object):
        self.column = column
        super().__init__(f"column {column!r} is constant (zero sample variance)")


class UnsupportedResponseError(KdrError, ValueError):
    """The estimator does not support this response shape (e.g. multivariate Y)."""


class CsvFormatError(KdrError, ValueError):
    """A CSV file could not be parsed; message carries a line diagnostic."""


class BenchmarkError(KdrError, RuntimeError):
    """Too many replications failed for the aggregate to be trustworthy."""
