"""Exception hierarchy for shearlattice."""


class ShearLatticeError(Exception):
    """Base class for all package errors."""


class LatticeError(ShearLatticeError, ValueError):
    """Misconfigured lattice window, parameters or initial data."""


class IntegrationError(ShearLatticeError, RuntimeError):
    """The time integration produced a non-finite state or could not proceed."""


class WindowLimitError(IntegrationError):
    """The adaptive mode window would exceed its configured hard limit."""


class RegimeError(ShearLatticeError):
    """A routine was asked to assert a property outside its parameter regime."""


class QuadratureError(ShearLatticeError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, worst_interval=None):
        super().__init__(message)
        self.worst_interval = worst_interval


class PathCountError(ShearLatticeError, ValueError):
    """Path enumeration would exceed the configured cap."""


class DomainError(ShearLatticeError, ValueError):
    """A closed-form bound was requested where its hypotheses fail."""


class ConfigError(ShearLatticeError, ValueError):
    """Invalid run configuration."""
