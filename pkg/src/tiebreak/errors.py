"""Exception types shared across the toolkit."""

from __future__ import annotations


class TiebreakError(ValueError):
    """Base class for all toolkit errors."""


class FormatError(TiebreakError):
    """Malformed external text (rationals, weights, traces, trees, configs).

    Carries an optional 1-based line and column so command line tools can
    point at the offending token.
    """

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(TiebreakError):
    """Input outside an operation's domain (negative weight, empty vector)."""


class StructureError(TiebreakError):
    """Structurally inconsistent objects (index out of range, length mismatch)."""


class CapacityError(TiebreakError):
    """Input exceeds a documented size cap of an exhaustive oracle."""


class CorruptTraceError(TiebreakError):
    """A trace record disagrees with its own recorded value when re-evaluated.

    Distinct from a policy verification failure: a corrupt trace cannot be
    judged at all.
    """


class PolicyMismatchError(TiebreakError):
    """A trace failed policy verification where a verified trace was required."""
