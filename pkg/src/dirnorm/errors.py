"""Semantic exception hierarchy shared across the package."""


class DirnormError(Exception):
    """Base class for all library errors."""


class ParameterDomainError(DirnormError, ValueError):
    """A distribution parameter is outside its admissible domain."""


class BoundaryError(DirnormError, ValueError):
    """An operation requiring a strictly interior point received a boundary point."""


class DimensionError(DirnormError, ValueError):
    """The requested dimension is not supported by this operation."""


class UnsupportedSpecError(DirnormError, ValueError):
    """The requested index pattern or parameter choice has no supported closed form."""


class InsufficientSamplesError(DirnormError, ValueError):
    """A Monte Carlo routine was asked to run with too few samples or replicates."""


class EmptyRegionError(DirnormError, ValueError):
    """A grid or integration region contains no admissible points."""
