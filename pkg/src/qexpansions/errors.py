"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QExpansionError(Exception):
    """Base class for all errors raised by the toolkit."""


class DomainError(QExpansionError, ValueError):
    """An input violates an operation's precondition."""


class DigitRangeError(DomainError):
    """A digit falls outside ``{0, ..., M}`` (or ``{-M, ..., M}`` for differences)."""


class AdmissibilityError(DomainError):
    """A sequence fails the self-admissibility condition at ``index``."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"sequence is not self-admissible at shift {index}")


class PrecisionExhausted(QExpansionError):
    """A decision could not be certified within the refinement budget.

    ``position`` is the digit index (1-based) or step at which work stopped;
    ``partial`` carries whatever was certified before that point.
    """

    def __init__(self, position: int, message: str | None = None, partial=None):
        self.position = position
        self.partial = partial
        super().__init__(message or f"precision exhausted at position {position}")


class CertificationFailure(QExpansionError):
    """A sign that should be certifiable could not be certified."""

    def __init__(self, message: str, subinterval=None):
        self.subinterval = subinterval
        super().__init__(message)
