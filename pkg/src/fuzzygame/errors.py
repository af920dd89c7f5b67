"""Exception hierarchy.

Every error raised on bad input derives from :class:`FuzzyGameError`, so
callers (the CLI in particular) can map failures onto exit codes without
catching unrelated exceptions.
"""

from __future__ import annotations


class FuzzyGameError(Exception):
    """Base class for all validation failures in this package."""


class NotNormalized(FuzzyGameError):
    """A set function does not send the empty set to 0 and the space to 1."""


class NotMonotone(FuzzyGameError):
    """A set function decreases along an inclusion ``A ⊆ B``."""

    def __init__(self, message: str, witness: tuple[int, int]):
        super().__init__(message)
        self.witness = witness


class NotPossibility(FuzzyGameError):
    """A capacity is not maxitive, so it has no density."""


class DomainError(FuzzyGameError):
    """A t-norm argument lies outside the unit interval."""


class RangeError(FuzzyGameError):
    """A function exceeds 1 where the integral needs values in [0, 1]."""


class NegativeValue(FuzzyGameError):
    """A function takes a negative value."""


class SpaceMismatch(FuzzyGameError):
    """Two objects that must live on the same space do not."""


class SizeError(FuzzyGameError):
    """An enumeration would exceed the configured size cap."""


class ConstraintError(FuzzyGameError):
    """Arguments violate a documented precondition."""


class InvalidTNorm(FuzzyGameError):
    """A user-supplied rule fails the t-norm screening."""
