"""
Gaussian and double-well targets.
"""

from typing import Optional, Tuple

import numpy as np

from hamslab.errors import InvalidParams
from hamslab.protocols import TargetModel


class GaussianTarget(TargetModel):
    """N(0, gamma^{-1} I), or N(0, P^{-1}) when a precision matrix P is given."""

    def __init__(self, gamma: float = 1.0, dim: int = 1, precision: Optional[np.ndarray] = None):
        if precision is not None:
            precision = np.asarray(precision, dtype=float)
            if precision.ndim != 2 or precision.shape[0] != precision.shape[1]:
                raise InvalidParams("precision must be a square matrix")
            dim = precision.shape[0]
        elif gamma <= 0:
            raise InvalidParams(f"precision gamma={gamma} must be positive")
        if dim < 1:
            raise InvalidParams("dim must be >= 1")
        self.gamma = float(gamma)
        self.precision = precision
        self._dim = int(dim)

    @property
    def dim(self) -> int:
        return self._dim

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.precision is None:
            return self.gamma * x
        return x @ self.precision

    def potential(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 0.5 * np.sum(x * self.gradient(x), axis=-1)

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        grad = self.gradient(x)
        return 0.5 * np.sum(x * grad, axis=-1), grad

    def hessian_diag(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.precision is None:
            return np.full(x.shape, self.gamma)
        return np.broadcast_to(np.diag(self.precision), x.shape).copy()

    def __repr__(self):
        if self.precision is not None:
            return f"GaussianTarget(dim={self.dim}, precision=<matrix>)"
        return f"GaussianTarget(gamma={self.gamma}, dim={self.dim})"


class DoubleWellTarget(TargetModel):
    """U(x) = ((x^2 - 1)^2 + x) / T in one dimension."""

    def __init__(self, temperature: float = 1.0):
        if temperature <= 0:
            raise InvalidParams("temperature must be positive")
        self.temperature = float(temperature)

    @property
    def dim(self) -> int:
        return 1

    def potential(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.sum((x ** 2 - 1) ** 2 + x, axis=-1) / self.temperature

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (4 * x * (x ** 2 - 1) + 1) / self.temperature

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        sq = x ** 2 - 1
        potential = np.sum(sq ** 2 + x, axis=-1) / self.temperature
        return potential, (4 * x * sq + 1) / self.temperature

    def hessian_diag(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (12 * x ** 2 - 4) / self.temperature

    def __repr__(self):
        return f"DoubleWellTarget(temperature={self.temperature})"
