"""Exception types shared across the package."""


class L0LandscapeError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(L0LandscapeError, ValueError):
    """Invalid problem data or configuration; maps to CLI exit code 2."""


class DimensionMismatchError(ValidationError):
    """Array shapes are inconsistent with each other or with m, n."""


class NonFiniteDataError(ValidationError):
    """An input array contains NaN or infinite entries."""


class SparsityRangeError(ValidationError):
    """The sparsity bound s lies outside {0, ..., n-1}."""


class MeasurementBoundError(ValidationError):
    """The sparsity bound s exceeds the number of measurements m."""


class ToleranceError(ValidationError):
    """A tolerance configuration violates its invariants."""


class InstanceFormatError(ValidationError):
    """An instance file could not be parsed; the message is line-precise."""


class RankDeficiencyError(L0LandscapeError):
    """An operation required full column rank but the matrix does not have it."""


class NotStationaryError(L0LandscapeError):
    """An operation required an M-stationary point but the residual is too large."""


class InfeasiblePointError(L0LandscapeError):
    """A point violates the sparsity constraint of the instance."""
