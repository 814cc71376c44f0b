"""Exception types shared across the package."""

from __future__ import annotations


class OpetopeError(ValueError):
    """A domain-level failure: invalid structure or an operation outside its domain."""


class ValidationError(OpetopeError):
    """Raised when a structure fails validation; carries the list of violations."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ParseError(OpetopeError):
    """Malformed or unrecognised document content."""
