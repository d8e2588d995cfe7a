"""Exception types shared across the package."""


class FibspecError(Exception):
    """Base class for all fibspec errors."""


class ConfigError(FibspecError):
    """Invalid user-supplied configuration (piece spec, range, grid)."""


class InvalidFrequencyError(ConfigError):
    """Rotation word requested with zero denominator."""


class DomainError(FibspecError):
    """Potential piece evaluated outside its interval of definition."""


class UnsupportedPieceError(FibspecError):
    """Operation requires a unit-length piece."""


class InvalidCellError(FibspecError):
    """Cell potential built from an empty word."""


class StepCountTooSmallError(FibspecError):
    """ODE transfer lost the unimodularity certificate at this step count."""


class IntegrationFailureError(FibspecError):
    """Integrator produced a non-finite state."""


class DegenerateEnergyError(FibspecError):
    """Closed-form solution basis degenerates at this energy."""


class NotHyperbolicError(FibspecError):
    """Matrix has |trace| <= 2, so no expanding eigendirection exists."""


class NoDistinguishedDirectionError(FibspecError):
    """Matrix norm is 1, so singular directions are not unique."""


class FitDomainError(FibspecError):
    """Exponent fit requested on unusable data (too few points, sign)."""


class PreconditionError(FibspecError):
    """Measurement called outside the regime of the underlying estimate."""
