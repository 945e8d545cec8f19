"""Exception hierarchy shared by all modules.

Every failure the library raises deliberately derives from SpdcError so
callers (and the CLI) can distinguish our diagnostics from genuine bugs.
"""

__all__ = ["SpdcError", "ValidationError", "DomainError", "ConvergenceError"]


class SpdcError(Exception):
    """Base class for all errors raised by spdcsim."""


class ValidationError(SpdcError):
    """A specification, configuration or argument is ill-formed."""


class DomainError(SpdcError):
    """An evaluation point violates a model validity guard.

    Guards are loud by design: points outside the paraxial or narrowband
    windows are rejected, never silently clamped.
    """


class ConvergenceError(SpdcError):
    """A quadrature refinement loop failed to settle."""
