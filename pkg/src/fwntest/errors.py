"""Exception types raised by fwntest."""


class FwnError(ValueError):
    """Base class for all fwntest errors."""


class GridMismatchError(FwnError):
    pass


class InsufficientDataError(FwnError):
    pass


class DegenerateSampleError(FwnError):
    pass


class InvalidBandwidthError(FwnError):
    pass


class InvalidExponentError(FwnError):
    pass


class LagRangeError(FwnError):
    pass


class CoverageError(FwnError):
    """Raised when a lag-window sum needs lags that were not computed."""


class UnsupportedKernelError(FwnError):
    pass


class DegenerateWeightsError(FwnError):
    pass


class ConfigError(FwnError):
    pass
