"""
HAMS coefficient algebra and the SDE-based parametrizations.

Two tuning protocols are provided: the Langevin protocol derives every
coefficient from friction values through c = exp(-eta*eps/2), the spectral
protocol picks the carryover that minimises the spectral radius of the
proposal-only chain under a standard Gaussian.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from hamslab.errors import Degenerate, InvalidParams
from hamslab.models import COEFF_TOL, Cov2x2, HamsCoeffs, SdeParams

logger = logging.getLogger(__name__)

SQRT2 = float(np.sqrt(2.0))


def _check_epsilon(epsilon: float, closed: bool = True) -> float:
    epsilon = float(epsilon)
    upper_ok = epsilon <= 1 if closed else epsilon < 1
    if not (0 < epsilon and upper_ok):
        bound = "(0, 1]" if closed else "(0, 1)"
        raise InvalidParams(f"epsilon={epsilon} outside {bound}")
    return epsilon


def default_phi(a1: float, a2: float) -> float:
    """
    phi = a2 / (2 - a1), the choice that minimises the leading acceptance loss.

    Raises:
        Degenerate: a1 is within 1e-12 of 2
    """
    if a1 >= 2 - COEFF_TOL:
        raise Degenerate(f"a1={a1} too close to 2 for the default phi")
    return a2 / (2 - a1)


def is_default_phi(coeffs: HamsCoeffs) -> bool:
    if coeffs.a1 >= 2 - COEFF_TOL:
        return False
    return abs(coeffs.phi - default_phi(coeffs.a1, coeffs.a2)) <= COEFF_TOL


def coeffs_from_sde(p: SdeParams, phi: Optional[float] = None) -> HamsCoeffs:
    """
    Map (epsilon, c1, c2) to (a1, a2, a3).

    a1 = 2 - c1(1 + s), a3 = c2(1 + s), a2 = eps*sqrt(c1*c2) with
    s = sqrt(1 - eps^2). phi defaults to a2 / (2 - a1).
    """
    s = np.sqrt(1 - p.epsilon ** 2)
    a1 = 2 - p.c1 * (1 + s)
    a3 = p.c2 * (1 + s)
    a2 = p.epsilon * np.sqrt(p.c1 * p.c2)
    if phi is None:
        phi = default_phi(a1, a2)
    return HamsCoeffs(float(a1), float(a2), float(a3), float(phi))


def hams_a_coeffs(epsilon: float, eta2: float = 0.0) -> HamsCoeffs:
    """HAMS-A: eta1 = 0, so A is singular (a1*a3 = a2^2)."""
    return coeffs_from_sde(SdeParams.from_friction(_check_epsilon(epsilon), 0.0, eta2))


def hams_b_coeffs(epsilon: float, eta1: float = 0.0) -> HamsCoeffs:
    """HAMS-B: eta2 = 0, so 2I - A is singular."""
    return coeffs_from_sde(SdeParams.from_friction(_check_epsilon(epsilon), eta1, 0.0))


def spectral_carryover(epsilon: float) -> float:
    """
    Carryover (sqrt(2) - sqrt(1 - s))^2 / (1 + s) of the spectral optimum.

    Equals (3 - s)/(1 + s) - 2*sqrt(2)*eps*(1 + s)^(-3/2).
    """
    epsilon = _check_epsilon(epsilon)
    s = np.sqrt(1 - epsilon ** 2)
    return float((SQRT2 - np.sqrt(1 - s)) ** 2 / (1 + s))


def hams_a_spectral(epsilon: float) -> HamsCoeffs:
    """HAMS-A with a1 = 1 - s and a3 = (sqrt(2) - sqrt(a1))^2."""
    return coeffs_from_sde(SdeParams(_check_epsilon(epsilon), 1.0, spectral_carryover(epsilon)))


def hams_b_spectral(epsilon: float) -> HamsCoeffs:
    """HAMS-B with a3 = 1 + s and 2 - a1 = (sqrt(2) - sqrt(1 - s))^2."""
    return coeffs_from_sde(SdeParams(_check_epsilon(epsilon), spectral_carryover(epsilon), 1.0))


def hams_k_coeffs(epsilon: float, k: float, eta2: Optional[float] = None) -> HamsCoeffs:
    """
    HAMS-k: eta1 = k*eps, i.e. c1 = exp(-k*eps^2/2).

    Without ``eta2`` the second carryover is the spectral optimum given c1,
    floored at 1/2; with ``eta2`` it is exp(-eta2*eps/2).

    Raises:
        InvalidParams: eps outside (0, 1) or k < 0
    """
    epsilon = _check_epsilon(epsilon, closed=False)
    if k < 0:
        raise InvalidParams(f"k={k} must be >= 0")
    s = np.sqrt(1 - epsilon ** 2)
    c1 = float(np.exp(-k * epsilon ** 2 / 2))
    if eta2 is None:
        bracket = 3 - s - 2 * SQRT2 * epsilon / np.sqrt(1 + s)
        c2 = max(0.5, float(bracket * c1 / (1 + s)))
    else:
        if eta2 < 0:
            raise InvalidParams("eta2 must be >= 0")
        c2 = float(np.exp(-eta2 * epsilon / 2))
    return coeffs_from_sde(SdeParams(epsilon, c1, min(c2, 1.0)))


def ma_carryover(epsilon: float, eta: Optional[float] = None) -> float:
    """
    Carryover c for the Metropolized integrators.

    exp(-eta*eps) under the Langevin protocol, otherwise the value matched
    to spectrally tuned HAMS-A.
    """
    if eta is not None:
        if eta < 0:
            raise InvalidParams("eta must be >= 0")
        return float(np.exp(-eta * epsilon))
    return spectral_carryover(epsilon)


def implied_eta(epsilon: float) -> float:
    """Friction implied by the spectral optimum; 2 + 5 eps^2 / 12 + O(eps^4)."""
    epsilon = _check_epsilon(epsilon, closed=False)
    return float(-2.0 / epsilon * np.log(spectral_carryover(epsilon)))


def sde_moments(p: SdeParams) -> Tuple[np.ndarray, Cov2x2]:
    """
    One-step moments of the phi = 0 update.

    Returns:
        (D, cov) where E[(x*, u*) - (x0, u0)] = D @ (grad U(x0), u0) and cov
        is the per-coordinate noise covariance. As eps -> 0,
        D ~ eps * [[-eta1, 1], [-1, -eta2]] and cov ~ 2 eps diag(eta1, eta2).
    """
    coeffs = coeffs_from_sde(p, phi=0.0)
    drift = np.array([
        [-coeffs.a1, coeffs.a2],
        [-coeffs.a2, coeffs.a3 - 2],
    ])
    return drift, coeffs.noise_cov()
