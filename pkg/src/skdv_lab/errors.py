"""Exception types raised across the lab."""


class SKdVError(Exception):
    """Base class for all lab errors."""


class InvalidGridError(SKdVError, ValueError):
    pass


class ParameterError(SKdVError, ValueError):
    pass


class NaNError(SKdVError, FloatingPointError):
    """A NaN reached an operation that refuses to propagate it silently."""


class DomainTooSmallError(SKdVError):
    """Dispersive tails reach the edge of the periodic box."""

    def __init__(self, message, contamination=None):
        super().__init__(message)
        self.contamination = contamination


class TruncationError(SKdVError):
    def __init__(self, message, required_j_max=None):
        super().__init__(message)
        self.required_j_max = required_j_max


class BlowUpDetected(SKdVError):
    """The time stepper produced NaN/overflow or a norm above the abort level."""

    def __init__(self, message, time=None, norm=None):
        super().__init__(message)
        self.time = time
        self.norm = norm


class ContractionFailure(SKdVError):
    def __init__(self, message, T=None, bundle=None, factors=None):
        super().__init__(message)
        self.T = T
        self.bundle = bundle
        self.factors = factors


class InsufficientResolutionError(SKdVError):
    pass


class NotApplicable(SKdVError):
    """The requested diagnostic has no meaning for this input (e.g. zero data)."""


class CorruptFileError(SKdVError):
    pass


class TruncatedFileError(SKdVError):
    pass


class ConfigError(SKdVError, ValueError):
    def __init__(self, message, line=None, key=None):
        super().__init__(message)
        self.line = line
        self.key = key


class TrialError(SKdVError):
    """One ensemble member failed; the campaign stops there."""

    def __init__(self, message, member_index=None):
        super().__init__(message)
        self.member_index = member_index
