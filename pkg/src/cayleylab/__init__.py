"""Exact and asymptotic bounds on the diameter-two probability of random Cayley digraphs."""

from .errors import FeasibilityError, GroupSpecError, PreconditionError, QuadratureError

__version__ = "0.1.0"

__all__ = [
    "FeasibilityError",
    "GroupSpecError",
    "PreconditionError",
    "QuadratureError",
]
