"""Exception types shared by all sepguil modules."""


class SepguilError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SepguilError, ValueError):
    """An argument violates a documented precondition."""


class PatternError(SepguilError, ValueError):
    """A pattern string or pattern object is malformed or unsupported."""


class ParseError(SepguilError, ValueError):
    """Serialized input (JSON, path string) could not be decoded."""


class ResourceLimitError(SepguilError, RuntimeError):
    """A brute-force enumeration would exceed the configured work bound."""


class SolverError(SepguilError, RuntimeError):
    """A fixed-point iteration failed to converge in the x-adic sense."""


class ConsistencyError(SepguilError, RuntimeError):
    """An internal exactness check failed (e.g. a count came out non-integer).

    This always indicates a bug, never bad user input.
    """


class UnsupportedDimensionError(DomainError):
    """The operation is only implemented for a smaller dimension."""
