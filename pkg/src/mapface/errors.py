"""Error types shared across the package."""
from __future__ import annotations


class ValidationError(ValueError):
    """A structural invariant of a map, rotation, or matching is violated.

    ``invariant`` names the violated rule, ``offender`` points at the dart,
    vertex, or edge that broke it (when there is a single culprit).
    """

    def __init__(self, message: str, invariant: str | None = None, offender=None):
        super().__init__(message)
        self.invariant = invariant
        self.offender = offender


class RefusalError(RuntimeError):
    """An operation was refused before doing any work.

    Raised when a request falls outside the supported domain or would exceed
    the configured enumeration budget.  Maps to exit code 1 in the CLI.
    """
