"""Exception hierarchy shared across the library.

The CLI maps these onto exit codes: parameter problems exit 2, numerical
failures exit 3, I/O failures exit 4.
"""


class CwlabError(Exception):
    """Base class for all library errors."""


class ParameterError(CwlabError, ValueError):
    """Invalid or inconsistent input parameters."""


class DimensionError(ParameterError):
    """Array length does not match the expected dimension."""


class CapacityError(ParameterError):
    """Requested problem size exceeds the dense-operation guard."""


class DomainError(ParameterError):
    """Argument outside the mathematical domain of the operation."""


class SolverError(CwlabError, RuntimeError):
    """An eigensolver failed to converge or violated its residual contract."""


class AmbiguityError(CwlabError, RuntimeError):
    """A measurement is ill-defined on the given input (e.g. multiple peaks)."""

    def __init__(self, message: str, peaks=None):
        super().__init__(message)
        self.peaks = list(peaks) if peaks is not None else []
