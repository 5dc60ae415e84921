"""
Gaussian noise pairs with the per-coordinate block covariance 2A - A^2.
"""

from typing import Tuple, Union

import numpy as np

from hamslab.errors import NotPSD
from hamslab.models import Cov2x2, NoisePair

PSD_TOL = 1e-12


def factor_cov2(cov: Cov2x2) -> np.ndarray:
    """
    Lower-triangular F with F @ F.T == cov.

    A pivot below 1e-12 marks a rank-deficient direction; its column is
    zeroed, which is the regular path for HAMS-A and HAMS-B.

    Raises:
        NotPSD: a diagonal entry or the determinant is below -1e-12
    """
    v11, v12, v22 = cov.v11, cov.v12, cov.v22
    if v11 < -PSD_TOL or v22 < -PSD_TOL or cov.det < -PSD_TOL:
        raise NotPSD(f"covariance ({v11}, {v12}, {v22}) is not positive semidefinite")

    factor = np.zeros((2, 2))
    if v11 < PSD_TOL:
        # first column vanishes; the second coordinate carries all the noise
        factor[1, 1] = np.sqrt(max(v22, 0.0))
        return factor

    l11 = np.sqrt(v11)
    l21 = v12 / l11
    schur = v22 - l21 ** 2
    factor[0, 0] = l11
    factor[1, 0] = l21
    if schur >= PSD_TOL:
        factor[1, 1] = np.sqrt(schur)
    return factor


def sample_noise_pair(factor: np.ndarray,
                      shape: Union[int, Tuple[int, ...]],
                      rng: np.random.Generator) -> NoisePair:
    """
    Draw (z1, z2) = F (xi1, xi2) independently per coordinate.

    Only columns of F with a nonzero entry consume standard normals, so a
    rank-1 factor draws a single vector per step.
    """
    if isinstance(shape, int):
        shape = (shape,)
    z1 = np.zeros(shape)
    z2 = np.zeros(shape)
    for col in range(2):
        if factor[0, col] == 0.0 and factor[1, col] == 0.0:
            continue
        xi = rng.standard_normal(shape)
        z1 = z1 + factor[0, col] * xi
        z2 = z2 + factor[1, col] * xi
    return NoisePair(z1, z2)
