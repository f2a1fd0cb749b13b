"""Exception hierarchy shared by all logalg modules.

Exit-code mapping (used by the CLI and the service):
  InputError  -> exit 2 / HTTP 422  (malformed documents, violated preconditions)
  NumericError -> exit 3 / HTTP 500 (overflow, non-convergence, certificate mismatch)
Negative mathematical verdicts are *not* errors; they are ordinary results.
"""

from __future__ import annotations


class LogalgError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LogalgError):
    """Invalid input: bad document, violated precondition, unusable arguments."""


class UnsupportedMergeError(InputError):
    """Passport merge outside the representable class (misaligned infinite tails)."""


class NumericError(LogalgError):
    """Numeric failure: overflow, iteration non-convergence, certificate mismatch."""


class NumericRangeError(NumericError):
    """A value overflowed the double range and may not be returned as a number."""


class DocumentError(InputError):
    """Document parse/validation failure carrying positioned error records.

    Each record is a dict with a ``message`` key and either ``line``/``column``
    (syntax errors) or ``path`` (a JSON-pointer-style location for semantic
    errors).
    """

    def __init__(self, errors):
        self.errors = list(errors)
        first = self.errors[0]["message"] if self.errors else "invalid document"
        super().__init__(first)
