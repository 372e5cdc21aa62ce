"""Exception types raised across the package."""


class RaygeomError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(RaygeomError, ValueError):
    pass


class UndefinedPhaseError(RaygeomError, ValueError):
    """A relative phase was requested for (near-)orthogonal vectors."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DomainError(RaygeomError, ValueError):
    """A point lies outside the domain of a chart or coordinate system."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class UnsupportedError(RaygeomError, NotImplementedError):
    pass


class ConvergenceError(RaygeomError, RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
