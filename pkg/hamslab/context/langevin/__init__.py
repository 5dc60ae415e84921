"""
Underdamped Langevin integrators and their Gaussian linearizations.
"""

from hamslab.context.langevin.integrators import (
    NOISE_COUNT,
    integrator_step,
    apply_rule,
    friction_kick,
    half_shift,
    spv_shift,
    IntegratorKernel,
)
from hamslab.context.langevin.linearization import linearize

__all__ = [
    'NOISE_COUNT',
    'integrator_step',
    'apply_rule',
    'friction_kick',
    'half_shift',
    'spv_shift',
    'IntegratorKernel',
    'linearize',
]
