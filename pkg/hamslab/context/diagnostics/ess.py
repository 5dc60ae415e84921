"""
Effective sample size estimators.

ess_bartlett is the single-chain estimator with a Bartlett-tapered sum of
autocorrelations; ess_multichain compares within- and between-chain variance
over independent repetitions.
"""

import logging
from typing import Union

import numpy as np

from hamslab.errors import DegenerateBetween, InvalidParams, ZeroVariance

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 3000
BETWEEN_TOL = 1e-300


def autocorrelation(values: np.ndarray, max_lag: int) -> np.ndarray:
    """
    Biased-normalization sample autocorrelations for lags 0..max_lag along axis 0.

    Args:
        values: Series of shape (n,) or (n, k)
        max_lag: Largest lag returned, below n

    Returns:
        Array of shape (max_lag + 1,) or (max_lag + 1, k)
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    centered = values - values.mean(axis=0)
    nfft = 1 << int(2 * n - 1).bit_length()
    spectrum = np.fft.rfft(centered, n=nfft, axis=0)
    acov = np.fft.irfft(spectrum * np.conj(spectrum), n=nfft, axis=0)[:max_lag + 1] / n
    return acov / acov[0]


def _effective_cutoff(n: int, cutoff: int) -> int:
    if cutoff < 1:
        raise InvalidParams(f"cutoff={cutoff} must be >= 1")
    if n < 2:
        raise InvalidParams("need at least two draws")
    if cutoff >= n:
        logger.warning("chain of length %d cannot support cutoff %d; using %d", n, cutoff, n - 1)
        return n - 1
    return cutoff


def ess_bartlett_columns(draws: np.ndarray, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """
    ESS of every column of an (n, k) draw matrix.

    Raises:
        ZeroVariance: some column is constant
    """
    draws = np.asarray(draws, dtype=float)
    if draws.ndim == 1:
        draws = draws[:, None]
    n = draws.shape[0]
    cutoff = _effective_cutoff(n, cutoff)
    constant = np.ptp(draws, axis=0) == 0
    if np.any(constant):
        raise ZeroVariance(f"columns {np.flatnonzero(constant).tolist()} are constant")
    rho = autocorrelation(draws, cutoff)[1:]
    lags = np.arange(1, cutoff + 1)
    weights = (1 - lags / cutoff)[:, None]
    denom = 1 + 2 * np.sum(weights * rho, axis=0)
    return n / np.maximum(denom, np.finfo(float).tiny)


def ess_bartlett(series: np.ndarray, cutoff: int = DEFAULT_CUTOFF) -> float:
    """
    ESS = n / (1 + 2 sum_{l=1}^{L} (1 - l/L) rho(l)).

    Raises:
        ZeroVariance: the series is constant
    """
    series = np.asarray(series, dtype=float).ravel()
    return float(ess_bartlett_columns(series[:, None], cutoff)[0])


def ess_multichain(chains: np.ndarray) -> Union[float, np.ndarray]:
    """
    ESS = n W / B from m chains of length n.

    Args:
        chains: Shape (m, n) for one coordinate or (m, n, k) for k coordinates

    Raises:
        DegenerateBetween: the chain means coincide
    """
    chains = np.asarray(chains, dtype=float)
    if chains.ndim not in (2, 3):
        raise InvalidParams(f"expected (m, n) or (m, n, k) chains, got shape {chains.shape}")
    m, n = chains.shape[:2]
    if m < 2 or n < 2:
        raise InvalidParams("need at least two chains of at least two draws")
    means = chains.mean(axis=1)
    within = np.sum((chains - means[:, None]) ** 2, axis=(0, 1)) / (m * (n - 1))
    between = n * np.sum((means - means.mean(axis=0)) ** 2, axis=0) / (m - 1)
    if np.any(between < BETWEEN_TOL):
        raise DegenerateBetween("between-chain variance vanishes")
    result = n * within / between
    return float(result) if np.ndim(result) == 0 else result
