"""
Log-Gaussian Cox process on an m x m grid.

Latent x ~ N(0, C) with C[(i,j),(i',j')] = sigma2 * exp(-dist / (m * beta));
counts y_ij ~ Poisson(exp(x_ij + mu) / n), n = m^2.
"""

from typing import Optional, Tuple

import numpy as np

from hamslab.context.core.linalg import chol_dense, spd_inverse
from hamslab.errors import InvalidParams, NonFinite
from hamslab.protocols import TargetModel

EXP_LIMIT = 700.0
JITTER = 1e-10


def grid_covariance(m: int, sigma2: float, beta: float) -> np.ndarray:
    """Exponential covariance between the cells of an m x m grid (row-major)."""
    if m < 2:
        raise InvalidParams("grid side m must be >= 2")
    if sigma2 <= 0 or beta <= 0:
        raise InvalidParams("need sigma2 > 0 and beta > 0")
    rows, cols = np.divmod(np.arange(m * m), m)
    dist = np.hypot(rows[:, None] - rows[None, :], cols[:, None] - cols[None, :])
    return sigma2 * np.exp(-dist / (m * beta))


class CoxModel(TargetModel):
    """Posterior of the latent intensity field given counts y."""

    def __init__(self, y: np.ndarray, m: int, sigma2: float = 1.91, beta: float = 1 / 33,
                 mu: float = float(np.log(126) - 0.955), covariance: Optional[np.ndarray] = None):
        y = np.asarray(y, dtype=float).ravel()
        if y.size != m * m:
            raise InvalidParams(f"expected {m * m} counts, got {y.size}")
        if np.any(y < 0) or np.any(y != np.round(y)):
            raise InvalidParams("counts must be nonnegative integers")
        self.m = int(m)
        self.n = self.m * self.m
        self.sigma2 = float(sigma2)
        self.beta = float(beta)
        self.mu = float(mu)
        self.y = y
        self.covariance = grid_covariance(m, sigma2, beta) if covariance is None else covariance
        self.precision = spd_inverse(self.covariance + JITTER * self.sigma2 * np.eye(self.n))

    @property
    def dim(self) -> int:
        return self.n

    def _intensity(self, x: np.ndarray) -> np.ndarray:
        arg = x + self.mu
        if np.any(arg > EXP_LIMIT):
            raise NonFinite(f"exponent {float(np.max(arg)):.1f} exceeds {EXP_LIMIT}; chain diverged")
        return np.exp(arg) / self.n

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        lam = self._intensity(x)
        px = x @ self.precision
        potential = 0.5 * np.sum(x * px, axis=-1) - np.sum(self.y * x - lam, axis=-1)
        return potential, px - self.y + lam

    def potential(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[0]

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[1]

    def hessian_diag(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.diag(self.precision) + self._intensity(x)

    def __repr__(self):
        return f"CoxModel(m={self.m}, sigma2={self.sigma2}, beta={self.beta:.4g}, mu={self.mu:.4g})"


def simulate_cox(m: int, sigma2: float, beta: float, mu: float,
                 rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simulate a latent field and Poisson counts on an m x m grid.

    Returns:
        (x_true, y), both of length m^2
    """
    cov = grid_covariance(m, sigma2, beta)
    L = chol_dense(cov + JITTER * sigma2 * np.eye(m * m))
    x = L @ rng.standard_normal(m * m)
    arg = x + mu
    if np.any(arg > EXP_LIMIT):
        raise NonFinite("simulated intensity overflows")
    y = rng.poisson(np.exp(arg) / (m * m)).astype(float)
    return x, y
