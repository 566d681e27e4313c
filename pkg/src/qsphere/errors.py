"""Exception types shared across the package."""


class QsphereError(Exception):
    """Base class for all package errors."""


class ConfigurationError(QsphereError):
    """Invalid configuration: bad qubit counts, mismatched shapes, unknown keys."""


class DataError(QsphereError):
    """Malformed or insufficient input data."""


class CapabilityError(QsphereError):
    """Requested operation exceeds what this implementation supports."""


class OptimizerError(QsphereError):
    """Optimizer received non-finite or inconsistent inputs."""


class TrainingError(QsphereError):
    """Training diverged or otherwise failed."""
