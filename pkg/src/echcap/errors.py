"""Exception types shared across the package."""


class EchcapError(Exception):
    """Base class for errors raised by this package."""


class DegenerateRegionError(EchcapError):
    """A moment region has zero area or otherwise fails to be a valid domain."""


class RealizationLimitError(EchcapError):
    """A weight multiset is too large to realize as an explicit profile."""


class ResourceLimitError(EchcapError):
    """A computation exceeds a configured budget (capacity index, DP budget)."""


class RepresentabilityError(EchcapError):
    """An exact-mode quantity is irrational and cannot be represented."""


class NonterminationError(EchcapError):
    """The weight-expansion recursion exceeded its step limit."""


class DimensionMismatchError(EchcapError):
    """Two vectors that must share a dimension do not."""
