"""Exception types shared across the package."""


class CortegError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(CortegError):
    """Tensor shapes are incompatible for an operation."""


class ConfigError(CortegError):
    """A run or architecture configuration is invalid."""


class DataFormatError(CortegError):
    """An on-disk container or checkpoint is malformed."""


class FilterDesignError(CortegError):
    """Requested filter cannot be designed (e.g. edge at/above Nyquist)."""


class TrainingError(CortegError):
    """A training step or loop hit an unrecoverable condition."""


class AnalysisError(CortegError):
    """A post-hoc analysis was called on degenerate input."""
