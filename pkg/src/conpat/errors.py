"""Exception hierarchy shared by all engines."""


class ConpatError(Exception):
    """Base class for every error raised by this package."""


class DuplicateEntries(ConpatError, ValueError):
    pass


class InvalidPermutation(ConpatError, ValueError):
    pass


class RedundantPatternSet(ConpatError, ValueError):
    """A pattern of the set consecutively contains another one."""


class CapExceeded(ConpatError):
    """An enumeration would exceed its configured size cap."""


class NonDivisible(ConpatError, ArithmeticError):
    """Exact division was requested but a remainder is left over."""


class DegenerateBase(ConpatError, ArithmeticError):
    """Geometric summation over a monomial that is identically one."""
