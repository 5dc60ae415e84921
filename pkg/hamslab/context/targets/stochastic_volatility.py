"""
Stochastic-volatility latent posterior.

    x_1 ~ N(0, sigma^2 / (1 - varphi^2)),  x_t = varphi x_{t-1} + N(0, sigma^2)
    y_t = z_t * beta * exp(x_t / 2)

The AR(1) prior precision is tridiagonal and is applied without ever forming
the dense prior covariance.
"""

from typing import Tuple

import numpy as np

from hamslab.errors import InvalidParams, NonFinite
from hamslab.protocols import TargetModel

EXP_LIMIT = 700.0


def ar1_precision_bands(t_len: int, sigma: float, varphi: float) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the AR(1) prior precision."""
    s2 = sigma ** 2
    if t_len == 1:
        return np.array([(1 - varphi ** 2) / s2]), np.zeros(0)
    diag = np.full(t_len, (1 + varphi ** 2) / s2)
    diag[0] = diag[-1] = 1 / s2
    off = np.full(t_len - 1, -varphi / s2)
    return diag, off


def _check_exponent(arg: np.ndarray):
    if np.any(arg > EXP_LIMIT):
        raise NonFinite(f"exponent {float(np.max(arg)):.1f} exceeds {EXP_LIMIT}; chain diverged")


class SvModel(TargetModel):
    """Posterior of the latent log-volatilities given observations y."""

    def __init__(self, y: np.ndarray, beta: float = 0.65, sigma: float = 0.15, varphi: float = 0.98):
        y = np.asarray(y, dtype=float).ravel()
        if y.size < 1:
            raise InvalidParams("need at least one observation")
        if not abs(varphi) < 1 or sigma <= 0 or beta <= 0:
            raise InvalidParams("need |varphi| < 1, sigma > 0 and beta > 0")
        self.y = y
        self.beta = float(beta)
        self.sigma = float(sigma)
        self.varphi = float(varphi)
        self.diag, self.off = ar1_precision_bands(y.size, self.sigma, self.varphi)
        self._scaled_y2 = y ** 2 / self.beta ** 2

    @property
    def dim(self) -> int:
        return self.y.size

    @property
    def t_len(self) -> int:
        return self.y.size

    def precision_matvec(self, x: np.ndarray) -> np.ndarray:
        """C^{-1} x for rows of x."""
        out = self.diag * x
        out[..., :-1] += self.off * x[..., 1:]
        out[..., 1:] += self.off * x[..., :-1]
        return out

    def dense_precision(self) -> np.ndarray:
        P = np.diag(self.diag)
        if self.off.size:
            P += np.diag(self.off, 1) + np.diag(self.off, -1)
        return P

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        _check_exponent(-x)
        px = self.precision_matvec(x)
        scaled = self._scaled_y2 * np.exp(-x)
        potential = 0.5 * np.sum(x * px, axis=-1) + 0.5 * np.sum(x + scaled, axis=-1)
        grad = px - 0.5 * scaled + 0.5
        return potential, grad

    def potential(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[0]

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[1]

    def hessian_diag(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        _check_exponent(-x)
        return self.diag + 0.5 * self._scaled_y2 * np.exp(-x)

    def __repr__(self):
        return (f"SvModel(T={self.t_len}, beta={self.beta}, sigma={self.sigma}, "
                f"varphi={self.varphi})")


def simulate_sv(t_len: int, beta: float, sigma: float, varphi: float,
                rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simulate latent volatilities and observations.

    Returns:
        (x_true, y), both of length t_len
    """
    if t_len < 1:
        raise InvalidParams("t_len must be >= 1")
    if not abs(varphi) < 1 or sigma <= 0 or beta <= 0:
        raise InvalidParams("need |varphi| < 1, sigma > 0 and beta > 0")
    shocks = rng.standard_normal(t_len)
    x = np.empty(t_len)
    x[0] = sigma / np.sqrt(1 - varphi ** 2) * shocks[0]
    for t in range(1, t_len):
        x[t] = varphi * x[t - 1] + sigma * shocks[t]
    z = rng.standard_normal(t_len)
    y = z * beta * np.exp(x / 2)
    return x, y
