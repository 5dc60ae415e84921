"""
Dense Cholesky factorization and triangular solves.

Right-hand sides may be batched as rows: ``b`` of shape (..., k) is solved
row by row, matching the (..., k) layout of phase states.
"""

import numpy as np
from scipy import linalg

from hamslab.errors import NotPD, InvalidParams

SYMMETRY_TOL = 1e-10


def chol_dense(matrix: np.ndarray) -> np.ndarray:
    """
    Lower-triangular L with L @ L.T == matrix.

    Raises:
        InvalidParams: matrix is not square or not symmetric within 1e-10
        NotPD: a pivot is not positive
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidParams(f"expected a square matrix, got shape {matrix.shape}")
    scale = max(np.max(np.abs(matrix)), 1.0)
    if np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOL * scale:
        raise InvalidParams("matrix is not symmetric")
    try:
        return linalg.cholesky(matrix, lower=True, check_finite=True)
    except linalg.LinAlgError as exc:
        raise NotPD(f"matrix is not positive definite: {exc}") from exc


def solve_lower(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve L y = b for each row of b."""
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        return linalg.solve_triangular(L, b, lower=True)
    flat = b.reshape(-1, b.shape[-1])
    return linalg.solve_triangular(L, flat.T, lower=True).T.reshape(b.shape)


def solve_lower_transpose(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve L.T y = b for each row of b."""
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        return linalg.solve_triangular(L, b, lower=True, trans='T')
    flat = b.reshape(-1, b.shape[-1])
    return linalg.solve_triangular(L, flat.T, lower=True, trans='T').T.reshape(b.shape)


def spd_inverse(matrix: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via its Cholesky factor."""
    L = chol_dense(matrix)
    inverse = linalg.cho_solve((L, True), np.eye(matrix.shape[0]))
    return 0.5 * (inverse + inverse.T)
