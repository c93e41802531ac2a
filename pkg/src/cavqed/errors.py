"""Exception types shared across the package."""


class CavqedError(Exception):
    """Base class for all package-specific errors."""


class CutoffOverflow(CavqedError):
    """Too much population has leaked into the top of the Fock cutoff."""


class QuadratureNonConvergence(CavqedError):
    """A pulse-functional integral did not reach the requested accuracy."""


class BadAxis(CavqedError, ValueError):
    """Rotation axis is not a unit 3-vector."""


class EigenFailure(CavqedError):
    """Eigenvalue computation failed or produced unusable values."""


class EnvelopeUnsuitable(CavqedError, ValueError):
    """Pulse envelope cannot realize the requested operation."""


class StepControlFailure(CavqedError):
    """Adaptive integrator failed its step or norm control."""


class ConfigError(CavqedError, ValueError):
    """Scenario configuration is malformed or inconsistent."""
