"""
Chain diagnostics: effective sample sizes, temperatures and density error.
"""

from hamslab.context.diagnostics.ess import (
    DEFAULT_CUTOFF,
    autocorrelation,
    ess_bartlett,
    ess_bartlett_columns,
    ess_multichain,
)
from hamslab.context.diagnostics.thermometry import (
    temperatures,
    supports_temperatures,
    true_bin_masses,
    empirical_bin_masses,
    density_bin_error,
    rmse_over_reps,
)

__all__ = [
    'DEFAULT_CUTOFF',
    'autocorrelation',
    'ess_bartlett',
    'ess_bartlett_columns',
    'ess_multichain',
    'temperatures',
    'supports_temperatures',
    'true_bin_masses',
    'empirical_bin_masses',
    'density_bin_error',
    'rmse_over_reps',
]
