"""Exception types shared across the library."""


class SpinAlignError(Exception):
    """Base class for all library errors."""


class ValidationError(SpinAlignError, ValueError):
    """An input violates a documented precondition."""


class CapacityError(SpinAlignError):
    """A requested dense object or sweep exceeds the configured size cap."""


class UndefinedDirectionError(SpinAlignError):
    """A Bloch vector (or its in-plane projection) is too short to define a direction."""


class IndeterminateOptimumError(SpinAlignError):
    """Every rotation angle is stationary; no optimal angle exists."""


class QueryBudgetError(SpinAlignError):
    """The oracle's query budget is exhausted."""
