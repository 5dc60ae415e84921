"""
Matching maps between Langevin integrators and (shifted) HAMS.
"""

from hamslab.context.matching.maps import (
    HAMS_MATCHED,
    SHIFTED_MATCHED,
    hams_coeffs_for,
    shifted_coeffs_for,
    verify_match,
)

__all__ = [
    'HAMS_MATCHED',
    'SHIFTED_MATCHED',
    'hams_coeffs_for',
    'shifted_coeffs_for',
    'verify_match',
]
