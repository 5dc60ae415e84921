"""
Temperature estimators, density-bin error and error aggregation over repetitions.

Draws of a univariate target may carry leading repetition axes: ``xs`` of
shape (R, n) yields R estimates at once.
"""

from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from scipy import integrate

from hamslab.errors import InvalidParams, Unsupported
from hamslab.protocols import TargetModel

QUAD_TOL = 1e-10
QUAD_RANGE = (-10.0, 10.0)
MIN_SAMPLES = 1000
DEFAULT_EDGES = np.linspace(-2.0, 2.0, 17)

Estimate = Union[float, np.ndarray]


def _scalar(value: np.ndarray) -> Estimate:
    return float(value) if np.ndim(value) == 0 else value


def _univariate(model: TargetModel):
    if model.dim != 1:
        raise InvalidParams(f"expected a univariate model, got dim={model.dim}")


def temperatures(xs: np.ndarray, us: np.ndarray,
                 model: TargetModel) -> Tuple[Estimate, Estimate, Estimate]:
    """
    Configurational and kinetic temperature estimates.

    T_C1 = mean(x U'(x)), T_C2 = mean(U'(x)^2) / mean(U''(x)), T_K = mean(u^2).

    Args:
        xs: Positions, shape (..., n)
        us: Momenta, same shape as xs
        model: Univariate target providing hessian_diag

    Raises:
        Unsupported: the model has no hessian_diag
    """
    _univariate(model)
    xs = np.asarray(xs, dtype=float)
    us = np.asarray(us, dtype=float)
    if xs.shape != us.shape:
        raise InvalidParams("positions and momenta differ in shape")
    grad = model.gradient(xs[..., None])[..., 0]
    hess = model.hessian_diag(xs[..., None])[..., 0]
    t_c1 = np.mean(xs * grad, axis=-1)
    t_c2 = np.mean(grad ** 2, axis=-1) / np.mean(hess, axis=-1)
    t_k = np.mean(us ** 2, axis=-1)
    return _scalar(t_c1), _scalar(t_c2), _scalar(t_k)


def supports_temperatures(model: TargetModel) -> bool:
    if model.dim != 1:
        return False
    try:
        model.hessian_diag(np.zeros((1, 1)))
    except Unsupported:
        return False
    return True


@lru_cache(maxsize=32)
def _bin_masses(model: TargetModel, edges: Tuple[float, ...]) -> np.ndarray:
    lo, hi = QUAD_RANGE
    grid = np.linspace(lo, hi, 4001)[:, None]
    shift = float(np.min(model.potential(grid)))

    def density(x: float) -> float:
        return float(np.exp(shift - model.potential(np.array([[x]]))[0]))

    opts = dict(epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    norm, _ = integrate.quad(density, lo, hi, **opts)
    masses = [integrate.quad(density, a, b, **opts)[0] for a, b in zip(edges[:-1], edges[1:])]
    result = np.array(masses) / norm
    result.setflags(write=False)
    return result


def true_bin_masses(model: TargetModel, edges: np.ndarray = DEFAULT_EDGES) -> np.ndarray:
    """Probability of each bin under exp(-U), normalized over [-10, 10] by adaptive quadrature."""
    _univariate(model)
    return _bin_masses(model, tuple(float(e) for e in edges))


def empirical_bin_masses(samples: np.ndarray, edges: np.ndarray = DEFAULT_EDGES) -> np.ndarray:
    """Fraction of samples per bin; bins are half-open except the last."""
    samples = np.asarray(samples, dtype=float)
    edges = np.asarray(edges, dtype=float)
    n_bins = len(edges) - 1
    index = np.searchsorted(edges, samples, side='right') - 1
    index = np.where(samples == edges[-1], n_bins - 1, index)
    return np.stack([np.mean(index == b, axis=-1) for b in range(n_bins)], axis=-1)


def density_bin_error(samples: np.ndarray, model: TargetModel,
                      edges: np.ndarray = DEFAULT_EDGES) -> Estimate:
    """
    Mean absolute gap between empirical and true bin masses.

    Args:
        samples: Univariate draws, shape (..., n) with n >= 1000
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape[-1] < MIN_SAMPLES:
        raise InvalidParams(f"need at least {MIN_SAMPLES} samples, got {samples.shape[-1]}")
    gap = np.abs(empirical_bin_masses(samples, edges) - true_bin_masses(model, edges))
    return _scalar(np.mean(gap, axis=-1))


def rmse_over_reps(estimates: np.ndarray, truth: float) -> float:
    """sqrt(mean((T_j - T)^2)) over repetitions j."""
    estimates = np.asarray(estimates, dtype=float).ravel()
    if estimates.size < 1:
        raise InvalidParams("need at least one repetition")
    return float(np.sqrt(np.mean((estimates - truth) ** 2)))
