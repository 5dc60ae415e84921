"""
Exception hierarchy for hamslab.

Every error raised by the library derives from HamsError, which is itself a
ValueError so existing ``except ValueError`` handlers keep working.
"""

__all__ = [
    'HamsError',
    'NotPSD',
    'NotPD',
    'NonFinite',
    'Degenerate',
    'InvalidParams',
    'SingularCovariance',
    'ConstraintViolation',
    'Unsupported',
    'ZeroVariance',
    'DegenerateBetween',
    'TuningFailed',
]


class HamsError(ValueError):
    """Base class for all hamslab errors."""


class NotPSD(HamsError):
    """A 2x2 covariance is not positive semidefinite within tolerance."""


class NotPD(HamsError):
    """A matrix handed to a Cholesky factorization is not positive definite."""


class NonFinite(HamsError):
    """A potential or gradient overflowed; usually a diverging chain."""


class Degenerate(HamsError):
    """A closed form hit a division by (near) zero."""


class InvalidParams(HamsError):
    """Parameters fall outside their documented ranges."""


class SingularCovariance(HamsError):
    """2A - A^2 is singular where the general G difference needs its inverse."""


class ConstraintViolation(HamsError):
    """Preconditions of an optimal-tuning formula do not hold."""


class Unsupported(HamsError):
    """The model does not provide the requested capability."""


class ZeroVariance(HamsError):
    """A series handed to an ESS estimator is constant."""


class DegenerateBetween(HamsError):
    """The between-chain variance vanishes (identical chains)."""


class TuningFailed(HamsError):
    """Step-size adaptation did not reach the requested acceptance rate."""
