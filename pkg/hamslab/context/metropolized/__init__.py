"""
Metropolis-adjusted Langevin integrators.
"""

from hamslab.context.metropolized.kernels import (
    MA_KINDS,
    carryover,
    ma_propose,
    ma_step,
    ma_delta_g_crosscheck,
    MetropolizedKernel,
)

__all__ = [
    'MA_KINDS',
    'carryover',
    'ma_propose',
    'ma_step',
    'ma_delta_g_crosscheck',
    'MetropolizedKernel',
]
