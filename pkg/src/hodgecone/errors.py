"""Exception hierarchy shared by the library and the CLI.

Exit-code mapping (stable): ValidationError -> 2, StabilizationError -> 3,
InvariantViolation -> 4.
"""


class HodgeconeError(Exception):
    """Base class for all library errors."""


class ValidationError(HodgeconeError):
    """Malformed or inconsistent input data.

    The message names the violated invariant and, where available, the
    offending field path.
    """


class StabilizationError(HodgeconeError):
    """A truncated computation failed to stabilize below the hard cap."""


class InvariantViolation(HodgeconeError):
    """An internal exact identity failed to hold.  Always a bug."""
