"""
Analytic oracles: stationary variance, acceptance rates, spectral radius.
"""

from hamslab.context.analytic.oracles import (
    var_kernel,
    stationary_covariance,
    stationary_variance_closed,
    acceptance_from_delta_g,
    expected_delta_g,
    expected_acceptance,
    expected_delta_g_ma,
    expected_acceptance_ma,
    spectral_radius,
    optimal_a3,
    optimal_a1,
    quadrant_probability,
    stationary_acceptance_mc,
)

__all__ = [
    'var_kernel',
    'stationary_covariance',
    'stationary_variance_closed',
    'acceptance_from_delta_g',
    'expected_delta_g',
    'expected_acceptance',
    'expected_delta_g_ma',
    'expected_acceptance_ma',
    'spectral_radius',
    'optimal_a3',
    'optimal_a1',
    'quadrant_probability',
    'stationary_acceptance_mc',
]
