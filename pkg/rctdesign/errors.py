"""Exception hierarchy shared by the library and the command line."""

from typing import Optional


class RctDesignError(Exception):
    """Base class for every error raised by rctdesign."""


class DatasetError(RctDesignError):
    """Malformed input: dataset, weights, config, spec or exported record."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(RctDesignError):
    """A numerical routine could not produce a valid result."""


class ResampleError(NumericalError):
    """Bootstrap redraws were exhausted without both arms present."""


class ProjectionError(NumericalError):
    """Alternating projections did not reach a feasible point."""


class ConvergenceError(NumericalError):
    """The solver stopped at its iteration cap."""
