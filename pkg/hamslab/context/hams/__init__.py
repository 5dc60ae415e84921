"""
Hamiltonian-assisted Metropolis sampling: coefficients, proposal, acceptance.
"""

from hamslab.context.hams.coefficients import (
    default_phi,
    is_default_phi,
    coeffs_from_sde,
    hams_a_coeffs,
    hams_b_coeffs,
    hams_k_coeffs,
    hams_a_spectral,
    hams_b_spectral,
    spectral_carryover,
    ma_carryover,
    implied_eta,
    sde_moments,
)
from hamslab.context.hams.kernel import (
    forward_map,
    propose,
    delta_g_default,
    delta_g_general,
    step,
    shifted_propose,
    proposal_factor,
    HamsKernel,
    ShiftedHamsKernel,
)

__all__ = [
    'default_phi',
    'is_default_phi',
    'coeffs_from_sde',
    'hams_a_coeffs',
    'hams_b_coeffs',
    'hams_k_coeffs',
    'hams_a_spectral',
    'hams_b_spectral',
    'spectral_carryover',
    'ma_carryover',
    'implied_eta',
    'sde_moments',
    'forward_map',
    'propose',
    'delta_g_default',
    'delta_g_general',
    'step',
    'shifted_propose',
    'proposal_factor',
    'HamsKernel',
    'ShiftedHamsKernel',
]
