"""Exception hierarchy shared by every module."""


class SlowEntropyError(Exception):
    """Base class for toolkit errors."""


class DomainError(SlowEntropyError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConstructionError(SlowEntropyError, ValueError):
    """Invalid parameters for a dynamical object (lengths, permutations, roofs)."""


class InsufficientDataError(SlowEntropyError, ValueError):
    """Too few points or samples for the requested estimate."""


class PrecisionError(SlowEntropyError, ArithmeticError):
    """A rational proxy is too shallow to certify the requested quantity.

    The caller should deepen the proxy (larger continued-fraction depth) and
    retry; ``needed`` carries a hint when one is known.
    """

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class ResourceError(SlowEntropyError, RuntimeError):
    """A computation would exceed a hard resource guard."""
