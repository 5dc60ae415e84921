"""
Core numerics: seeded streams, noise pairs, dense Cholesky.
"""

from hamslab.context.core.rng import generator, make_rng, spawn_streams
from hamslab.context.core.noise import factor_cov2, sample_noise_pair
from hamslab.context.core.linalg import chol_dense, solve_lower, solve_lower_transpose, spd_inverse
from hamslab.context.core.acceptance import accept_probability, metropolis_accept, select_state

__all__ = [
    'generator',
    'make_rng',
    'spawn_streams',
    'factor_cov2',
    'sample_noise_pair',
    'chol_dense',
    'solve_lower',
    'solve_lower_transpose',
    'spd_inverse',
    'accept_probability',
    'metropolis_accept',
    'select_state',
]
