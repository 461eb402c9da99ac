"""Exception types shared across the physics modules."""


class LensCoupledError(Exception):
    """Base class for all package errors."""


class DomainError(LensCoupledError, ValueError):
    """An input lies outside the validity domain of an operation."""


class SingularityError(LensCoupledError, ZeroDivisionError):
    """Evaluation at a geometric singularity (e.g. coincident source/field points)."""


class ConvergenceError(LensCoupledError, RuntimeError):
    """Adaptive quadrature failed to converge.

    Carries the last two refinement estimates so callers can judge how far
    the iteration got.
    """

    def __init__(self, message, last=None, previous=None):
        super().__init__(message)
        self.last = last
        self.previous = previous


class SingularParameterError(LensCoupledError, ValueError):
    """A closed-form steady-state expression has a vanishing denominator."""


class PhysicalityError(LensCoupledError, ValueError):
    """Rates violate a physical constraint (e.g. |Gamma_12| > Gamma)."""


class NumericalRankError(LensCoupledError, RuntimeError):
    """A linear solve produced a degenerate or ill-determined null space."""
