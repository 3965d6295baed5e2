"""Exception hierarchy shared by the numerical modules."""
from __future__ import annotations


class OffresError(Exception):
    """Base class for library errors."""


class InvalidArgumentError(OffresError, ValueError):
    pass


class NoResonanceError(OffresError, ValueError):
    """Overdamped oscillator: the amplitude curve has no interior maximum."""


class NumericalError(OffresError, ArithmeticError):
    """Integration could not proceed; carries the last accepted state."""

    def __init__(self, message: str, t: float | None = None, y=None, partial=None):
        super().__init__(message)
        self.t = t
        self.y = y
        self.partial = partial


class StepUnderflowError(NumericalError):
    pass


class SingularityError(NumericalError):
    """Right-hand side is unbounded (a tangent pole of the geodesic equation)."""

    def __init__(self, message: str, theta: float | None = None, **kwargs):
        super().__init__(message, **kwargs)
        self.theta = theta


class IntegrationQualityError(NumericalError):
    """Integrated amplitudes lost unitarity beyond the allowed budget."""
