"""Exception hierarchy shared across the package.

Programmer-level misuse (dimension mismatches, bad arguments) raises plain
ValueError; the classes below mark problems with *input data* or with the
solver's own invariants, so the CLI can map them to distinct exit codes.
"""


class PlvcspError(Exception):
    """Base class for all package-specific errors."""


class ParseError(PlvcspError):
    """The instance document is syntactically malformed."""


class ValidationError(PlvcspError):
    """The document parsed but violates a structural constraint
    (bad index, wrong dimension, zero denominator, ...)."""


class InvalidInstanceError(ValidationError):
    """The instance violates a semantic requirement discovered while
    solving: two overlapping pieces assign different values."""


class InternalError(PlvcspError):
    """An internal invariant failed; indicates a bug, not bad input."""
