"""
Error hierarchy for the taxonomy pipeline.
Each error class carries the process exit code the CLI reports for it.
"""


class TaxonomyError(Exception):
    """Base class for all pipeline errors."""
    exit_code = 1


class InvalidArgumentError(TaxonomyError, ValueError):
    """An argument is outside its documented range."""
    exit_code = 2


class InputIOError(TaxonomyError, OSError):
    """An input file is missing or unreadable."""
    exit_code = 3


class DataValidationError(TaxonomyError, ValueError):
    """Input data violates a structural invariant."""
    exit_code = 4


class NumericalError(TaxonomyError, ArithmeticError):
    """A quantity is mathematically undefined for the given data."""
    exit_code = 5


class ZeroVarianceError(NumericalError):
    """One or more return series are constant, so correlation is undefined."""

    def __init__(self, symbols):
        self.symbols = list(symbols)
        super().__init__(
            "Zero-variance series, correlation undefined: " + ", ".join(self.symbols)
        )
