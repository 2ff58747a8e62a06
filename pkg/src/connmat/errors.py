"""Exception types shared across the package."""


class ConnMatError(Exception):
    """Base class for all errors raised by connmat."""


class DomainError(ConnMatError, ValueError):
    """An argument lies outside the domain of the operation (mismatched n, bad permutation, ...)."""


class SizeLimitError(ConnMatError):
    """The requested instance exceeds a configured size cap."""


class ParseError(ConnMatError, ValueError):
    """Malformed textual input (partition text, graph file, ordering file)."""


class OrderError(DomainError):
    """A proposed ordering of Part_n is incomplete, not coherent, or splits a conjugation class."""


class ConsistencyError(ConnMatError, AssertionError):
    """An internal invariant failed; indicates a bug rather than bad input."""
