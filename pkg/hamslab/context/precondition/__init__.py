"""
Preconditioning by Cholesky whitening.
"""

from hamslab.context.precondition.whitening import (
    build_whitener,
    build_whitener_from_precision,
    WhitenedTarget,
    whiten,
)

__all__ = [
    'build_whitener',
    'build_whitener_from_precision',
    'WhitenedTarget',
    'whiten',
]
