"""
Theory and matching tables built from the analytic oracles.
"""

import logging
from typing import Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from hamslab.context.analytic import (
    expected_acceptance,
    expected_delta_g,
    optimal_a3,
    spectral_radius,
    stationary_covariance,
    stationary_variance_closed,
    var_kernel,
)
from hamslab.context.hams import default_phi, hams_k_coeffs
from hamslab.context.matching import HAMS_MATCHED, SHIFTED_MATCHED, verify_match
from hamslab.errors import HamsError
from hamslab.models import HamsCoeffs, IntegratorKind, Variant

logger = logging.getLogger(__name__)

THEORY_COLUMNS = ['epsilon', 'k', 'gamma', 'a1', 'a2', 'a3', 'phi', 'var_x', 'var_x_lyapunov',
                  'expected_delta_g', 'expected_acceptance', 'rho_min']


def _lyapunov_variance(coeffs: HamsCoeffs, gamma: float) -> float:
    try:
        return float(stationary_covariance(var_kernel(coeffs, gamma))[0, 0])
    except HamsError as exc:
        logger.debug("no stationary law for %s at gamma=%s: %s", coeffs, gamma, exc)
        return float('nan')


def theory_row(coeffs: HamsCoeffs, gamma: float, epsilon: float = float('nan'),
               k: float = float('nan')) -> dict:
    return {
        'epsilon': epsilon,
        'k': k,
        'gamma': gamma,
        'a1': coeffs.a1,
        'a2': coeffs.a2,
        'a3': coeffs.a3,
        'phi': coeffs.phi,
        'var_x': stationary_variance_closed(coeffs.a1, gamma),
        'var_x_lyapunov': _lyapunov_variance(coeffs, gamma),
        'expected_delta_g': expected_delta_g(coeffs.a1, gamma),
        'expected_acceptance': expected_acceptance(coeffs.a1, gamma),
        'rho_min': spectral_radius(coeffs),
    }


def theory_table(epsilons: Sequence[float] = (0.1, 0.2, 0.4), ks: Sequence[float] = (0, 1, 2, 3),
                 gammas: Sequence[float] = (0.5, 2.0), a1: Optional[float] = None) -> pd.DataFrame:
    """
    Analytic quantities over a grid of (eps, k, gamma).

    With ``a1`` given the grid is replaced by a single HAMS-A coefficient set
    per gamma: a3 and a2 at the spectral optimum for nu = a1.
    """
    rows: List[dict] = []
    if a1 is not None:
        a3, a2, _ = optimal_a3(a1, a1)
        coeffs = HamsCoeffs(a1, a2, a3, default_phi(a1, a2))
        rows = [theory_row(coeffs, gamma) for gamma in gammas]
    else:
        for eps in epsilons:
            for k in ks:
                coeffs = hams_k_coeffs(eps, k)
                rows.extend(theory_row(coeffs, gamma, eps, k) for gamma in gammas)
    return pd.DataFrame(rows, columns=THEORY_COLUMNS)


def match_table(kinds: Optional[Iterable[str]] = None, variant: str = 'modified',
                epsilons: Sequence[float] = (0.3,), eta: float = 1.0,
                gamma: float = 1.5) -> pd.DataFrame:
    """One MatchReport row per (kind, eps)."""
    if kinds is None:
        kinds = [k.value for k in HAMS_MATCHED + SHIFTED_MATCHED]
    rows = [
        verify_match(IntegratorKind(kind), Variant(variant), eps, eta, gamma).to_dict()
        for kind in kinds
        for eps in epsilons
    ]
    return pd.DataFrame(rows)


def acceptance_slope(eps_grid: Sequence[float], deficits: Sequence[float]) -> float:
    """Least-squares slope of log(1 - E[alpha]) against log(eps)."""
    slope, _ = np.polyfit(np.log(eps_grid), np.log(deficits), 1)
    return float(slope)
