class OredimError(Exception):
    """Base class for all library errors."""


class InvalidSpecError(OredimError, ValueError):
    """A ring, map, module or fixture description is malformed."""


class LawViolationError(OredimError):
    """An algebraic law failed; ``report`` carries the witness."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CapExceededError(OredimError):
    """An exhaustive computation would exceed its configured size cap."""
