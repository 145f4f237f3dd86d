"""Exception types shared across the package."""


class ErmcdaError(Exception):
    """Base class for every error raised by this package."""


class ScaleError(ErmcdaError):
    """Invalid grade scale definition."""


class TransformError(ErmcdaError):
    """Invalid scale transform, or a transform applied to the wrong scale."""


class DistributionError(ErmcdaError):
    """Invalid belief distribution or construction input."""


class TreeError(ErmcdaError):
    """Structurally invalid attribute tree or weight assignment."""


class ConflictError(ErmcdaError):
    """Total conflict between evidence sources; combination is undefined."""


class DataError(ErmcdaError):
    """Raw data could not be turned into usable records."""


class ModelError(ErmcdaError):
    """Model file missing, malformed, or failing validation."""
