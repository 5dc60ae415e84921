"""
Context layer - sampling kernels, targets, oracles and diagnostics.
"""

from hamslab.context.hams import HamsKernel, ShiftedHamsKernel
from hamslab.context.langevin import IntegratorKernel
from hamslab.context.metropolized import MetropolizedKernel
from hamslab.context.targets import GaussianTarget, DoubleWellTarget, SvModel, CoxModel
from hamslab.context.precondition import WhitenedTarget

__all__ = [
    'HamsKernel',
    'ShiftedHamsKernel',
    'IntegratorKernel',
    'MetropolizedKernel',
    'GaussianTarget',
    'DoubleWellTarget',
    'SvModel',
    'CoxModel',
    'WhitenedTarget',
]
