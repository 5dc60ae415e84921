"""
Cholesky whitening of a target.

With Sigma-hat^{-1} = L L^T the chain runs on x_hat = L^T x. The whitened
gradient needs one triangular solve per evaluation; mapping back to the
original coordinates needs another and happens only when a draw is emitted.
"""

import logging
from typing import Tuple

import numpy as np

from hamslab.context.core.linalg import chol_dense, solve_lower, solve_lower_transpose, spd_inverse
from hamslab.errors import InvalidParams
from hamslab.protocols import TargetModel

logger = logging.getLogger(__name__)


def build_whitener(sigma_hat: np.ndarray) -> np.ndarray:
    """
    Lower-triangular L with L @ L.T equal to the inverse of sigma_hat.

    Raises:
        NotPD: sigma_hat is not positive definite
    """
    return build_whitener_from_precision(spd_inverse(np.asarray(sigma_hat, dtype=float)))


def build_whitener_from_precision(precision: np.ndarray) -> np.ndarray:
    """Same as build_whitener when the inverse of sigma_hat is already at hand."""
    L = chol_dense(np.asarray(precision, dtype=float))
    L.setflags(write=False)
    return L


class WhitenedTarget(TargetModel):
    """The target seen in whitened coordinates x_hat = L^T x."""

    def __init__(self, model: TargetModel, L: np.ndarray):
        L = np.asarray(L, dtype=float)
        if L.shape != (model.dim, model.dim):
            raise InvalidParams(f"whitener shape {L.shape} does not fit dimension {model.dim}")
        if np.any(np.triu(L, 1) != 0):
            raise InvalidParams("whitener must be lower triangular")
        self.model = model
        self.L = L

    @property
    def dim(self) -> int:
        return self.model.dim

    def to_original(self, x_hat: np.ndarray) -> np.ndarray:
        """x = (L^T)^{-1} x_hat, row-wise."""
        return solve_lower_transpose(self.L, x_hat)

    def to_whitened(self, x: np.ndarray) -> np.ndarray:
        """x_hat = L^T x, row-wise."""
        return np.asarray(x, dtype=float) @ self.L

    def evaluate(self, x_hat: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        potential, grad = self.model.evaluate(self.to_original(x_hat))
        return potential, solve_lower(self.L, grad)

    def potential(self, x_hat: np.ndarray) -> np.ndarray:
        return self.model.potential(self.to_original(x_hat))

    def gradient(self, x_hat: np.ndarray) -> np.ndarray:
        return solve_lower(self.L, self.model.gradient(self.to_original(x_hat)))

    def __repr__(self):
        return f"WhitenedTarget({self.model!r})"


def whiten(model: TargetModel, L: np.ndarray) -> WhitenedTarget:
    """Wrap ``model`` so kernels act on x_hat = L^T x."""
    if isinstance(model, WhitenedTarget):
        logger.debug("whitening an already whitened %r", model.model)
    return WhitenedTarget(model, L)
