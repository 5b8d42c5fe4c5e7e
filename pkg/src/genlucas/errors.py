"""Exception types shared across the package."""

from .precreal import AmbiguityError, IndeterminateError, PrecisionLimitError


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ReductionFailure(RuntimeError):
    """No convergent gave a certified positive epsilon within the retry budget."""

    def __init__(self, message, problem=None):
        super().__init__(message)
        self.problem = problem


__all__ = [
    "AmbiguityError",
    "DomainError",
    "IndeterminateError",
    "PrecisionLimitError",
    "ReductionFailure",
]
