"""Exception hierarchy shared by every erspud module."""


class ErspudError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ErspudError, ValueError):
    """Operand shapes are incompatible."""


class SingularMatrixError(ErspudError):
    """A linear system is numerically singular."""


class NotSPDError(ErspudError):
    """Matrix is not (numerically) symmetric positive definite."""


class ConfigError(ErspudError, ValueError):
    """Invalid model, experiment or check parameters."""


class InputError(ErspudError, ValueError):
    """Non-finite or otherwise malformed numerical input."""


class RankDeficiencyError(ErspudError):
    """Fewer independent directions were found than required."""

    def __init__(self, message, found=None):
        super().__init__(message)
        self.found = found


class ReconstructionError(ErspudError):
    """Dictionary reconstruction failed."""


class DataGenerationError(ErspudError):
    """Random data could not be generated with the required properties."""
