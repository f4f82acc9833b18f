"""Exception types shared across the package."""


class CohomexError(Exception):
    """Base class for all errors raised by cohomex."""


class ResourceError(CohomexError):
    """A configured size/precision/time budget would be exceeded."""


class ParseError(CohomexError, ValueError):
    """A descriptor, matrix file or CLI argument could not be parsed."""


class UnsupportedError(CohomexError):
    """The input lies outside the regime an operation supports."""


class InvariantViolation(CohomexError):
    """An internal mathematical consistency check failed (signals a bug)."""


class PrecisionError(CohomexError):
    """Local (mod p^k) elimination could not resolve the answer at the requested precision."""
