"""Exception types raised by memwalk."""


class MemwalkError(Exception):
    """Base class for all package errors."""


class InvalidInputError(MemwalkError, ValueError):
    """A coin, initial state, or argument violates its contract."""


class InvalidMemoryKeyError(InvalidInputError):
    """A memory-walk key (n2, n1, p) with |n1 - n2| != 1 or p not a bit."""


class ResourceLimitError(MemwalkError):
    """The requested computation exceeds the configured budget."""


class AliasingError(InvalidInputError):
    """A Fourier grid too coarse to represent the walk's support exactly."""
