"""Certified replay of the coincidence analysis for generalized Lucas sequences."""

from .bigseq import SequenceSpec, intersection_bruteforce, term, terms
from .charpoly import binet_dominant, dominant_root, lucas_coefficient
from .errors import (AmbiguityError, DomainError, IndeterminateError,
                     PrecisionLimitError, ReductionFailure)
from .precreal import PrecReal, pr_eval
from .reduction import baker_davenport_reduce, cf_expand

__all__ = [
    "AmbiguityError",
    "DomainError",
    "IndeterminateError",
    "PrecReal",
    "PrecisionLimitError",
    "ReductionFailure",
    "SequenceSpec",
    "baker_davenport_reduce",
    "binet_dominant",
    "cf_expand",
    "dominant_root",
    "intersection_bruteforce",
    "lucas_coefficient",
    "pr_eval",
    "term",
    "terms",
]

__version__ = "0.1.0"
