"""Exception and warning types shared across the package."""


class NfbistError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(NfbistError, ValueError):
    """A scalar argument is outside its documented domain."""


class ShapeError(NfbistError, ValueError):
    """Array arguments have incompatible lengths, rates or grids."""


class InsufficientDataError(ParameterError):
    """Not enough samples for the requested analysis (e.g. FFT size)."""


class DegenerateReferenceError(NfbistError, ValueError):
    """Reference peak power is zero or unusable for normalization."""


class DegenerateBandError(NfbistError, ValueError):
    """No spectral bins remain in the integration band after exclusions."""


class SingularYError(NfbistError, ValueError):
    """Y-factor equals 1, so the noise-factor equations are singular."""


class ConfigError(NfbistError, ValueError):
    """Experiment configuration is invalid.

    ``fields`` lists one message per offending field so a caller can report
    every problem at once instead of stopping at the first.
    """

    def __init__(self, fields):
        self.fields = list(fields)
        super().__init__("invalid configuration: " + "; ".join(self.fields))


class CaptureFormatError(NfbistError):
    """Capture file has an unsupported magic number or version."""


class CaptureCorruptError(NfbistError):
    """Capture file is truncated or internally inconsistent."""


class NonphysicalResultWarning(UserWarning):
    """A computed noise factor fell below 1 (or below 0).

    Measurement noise can legitimately produce such values, so they are
    returned for downstream statistics rather than rejected.
    """
