"""
Closed-form oracles under univariate Gaussian targets.

Covers the VAR form of the HAMS proposal, its stationary variance, the
expected Delta G and acceptance rate (HAMS and the Metropolized
integrators), spectral-radius tuning and the bivariate-normal quadrant law.
"""

from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.linalg import solve_discrete_lyapunov

from hamslab.context.hams.kernel import propose
from hamslab.context.metropolized.kernels import MA_KINDS, carryover, ma_propose
from hamslab.context.targets.gaussian import GaussianTarget
from hamslab.errors import ConstraintViolation, Degenerate, InvalidParams
from hamslab.models import COEFF_TOL, HamsCoeffs, IntegratorKind, LinearKernel, PhaseState

BRANCH_TOL = 1e-12
# above this spectral radius the VAR process has no stationary law
STABLE_TOL = 1e-12


def var_kernel(coeffs: HamsCoeffs, gamma: float) -> LinearKernel:
    """
    VAR(1) form of the HAMS proposal under N(0, 1/gamma).

    Returns:
        LinearKernel with M = Phi and S = T (2A - A^2) T^T, where
        T = [[1, 0], [phi (1 - gamma), 1]] maps (Z1, Z2) to the noise of (x*, u*)
    """
    if gamma <= 0:
        raise InvalidParams(f"gamma={gamma} must be > 0")
    a1, a2, a3, phi = coeffs.a1, coeffs.a2, coeffs.a3, coeffs.phi
    phi_mat = np.array([
        [1 - a1 * gamma, a2],
        [a1 * phi * gamma * (gamma - 1) - a2 * gamma, a3 - 1 + phi * a2 * (1 - gamma)],
    ])
    T = np.array([[1.0, 0.0], [phi * (1 - gamma), 1.0]])
    noise = T @ coeffs.noise_cov().as_matrix() @ T.T
    return LinearKernel(phi_mat, noise)


def stationary_covariance(kernel: LinearKernel) -> np.ndarray:
    """
    Solve V = M V M^T + S.

    Raises:
        Degenerate: M has an eigenvalue on or outside the unit circle
    """
    radius = float(np.max(np.abs(np.linalg.eigvals(kernel.M))))
    if radius >= 1 - STABLE_TOL:
        raise Degenerate(f"drift matrix has spectral radius {radius:.6g}; no stationary law")
    V = solve_discrete_lyapunov(kernel.M, kernel.S)
    return 0.5 * (V + V.T)


def stationary_variance_closed(a1: float, gamma: float) -> float:
    """Var(x) = (a1 - 2) / (gamma (a1 gamma - 2)) of the proposal-only chain."""
    if abs(a1 * gamma - 2) < COEFF_TOL:
        raise Degenerate(f"a1*gamma = {a1 * gamma} equals 2")
    return float((a1 - 2) / (gamma * (a1 * gamma - 2)))


def _check_a1(a1: float):
    if not 0 < a1 < 2:
        raise InvalidParams(f"a1={a1} outside (0, 2)")


def acceptance_from_delta_g(mean_delta_g: float) -> float:
    """1 - (2/pi) arctan(sqrt(E[dG] / 2))."""
    return float(1 - 2 / np.pi * np.arctan(np.sqrt(max(mean_delta_g, 0.0) / 2)))


def expected_delta_g(a1: float, gamma: float) -> float:
    """E[dG] = a1^3 gamma (gamma - 1)^2 / (2 (2 - a1)) for HAMS with the default phi."""
    _check_a1(a1)
    if gamma <= 0:
        raise InvalidParams(f"gamma={gamma} must be > 0")
    return float(a1 ** 3 * gamma * (gamma - 1) ** 2 / (2 * (2 - a1)))


def expected_acceptance(a1: float, gamma: float) -> float:
    return acceptance_from_delta_g(expected_delta_g(a1, gamma))


def expected_delta_g_ma(kind: Union[IntegratorKind, str], epsilon: float,
                        eta: Optional[float], gamma: float, c: Optional[float] = None) -> float:
    kind = IntegratorKind(kind)
    if kind not in MA_KINDS:
        raise InvalidParams(f"{kind.value} has no Metropolis-adjusted form")
    if gamma <= 0:
        raise InvalidParams(f"gamma={gamma} must be > 0")
    eps = float(epsilon)
    if kind is IntegratorKind.BP:
        if not eps > 0:
            raise InvalidParams(f"epsilon={epsilon} must be > 0")
        return float(gamma ** 3 * eps ** 6 / 32)
    c = carryover(eps, eta, c)
    return float(gamma ** 2 * eps ** 4 * (1 + c) * (4 - 4 * c + (1 + c) * gamma * eps ** 2) / 128)


def expected_acceptance_ma(kind: Union[IntegratorKind, str], epsilon: float,
                           eta: Optional[float], gamma: float, c: Optional[float] = None) -> float:
    """Stationary acceptance of Metropolized BAOAB, ABOBA or BP under N(0, 1/gamma)."""
    return acceptance_from_delta_g(expected_delta_g_ma(kind, epsilon, eta, gamma, c))


def spectral_radius(coeffs: HamsCoeffs) -> float:
    """
    Largest eigenvalue modulus of Phi = [[1 - a1, a2], [-a2, a3 - 1]].

    Real eigenvalues (a3 - a1 +- sqrt(disc)) / 2 when
    disc = (a1 + a3 - 2)^2 - 4 a2^2 >= 0, otherwise modulus sqrt(det Phi).
    """
    a1, a2, a3 = coeffs.a1, coeffs.a2, coeffs.a3
    disc = (a1 + a3 - 2) ** 2 - 4 * a2 ** 2
    if disc >= -BRANCH_TOL:
        root = np.sqrt(max(disc, 0.0))
        return float(max(abs(a3 - a1 + root), abs(a3 - a1 - root)) / 2)
    det = (1 - a1) * (a3 - 1) + a2 ** 2
    return float(np.sqrt(max(det, 0.0)))


def optimal_a3(a1: float, nu: float) -> Tuple[float, float, float]:
    """
    Minimise the spectral radius over (a2, a3) with a1 and nu = a2^2 / a3 fixed.

    Returns:
        (a3*, a2* >= 0, minimum radius |a3* - a1| / 2)

    Raises:
        ConstraintViolation: unless 0 < a1 < 2, nu >= 0 and nu <= a1 <= 1 + nu
    """
    if not (0 < a1 < 2 and nu >= 0 and nu - COEFF_TOL <= a1 <= 1 + nu + COEFF_TOL):
        raise ConstraintViolation(f"need 0 < a1 < 2 and nu <= a1 <= 1 + nu (a1={a1}, nu={nu})")
    a3 = (np.sqrt(nu + 2 - a1) - np.sqrt(nu)) ** 2
    return float(a3), float(np.sqrt(nu * a3)), float(abs(a3 - a1) / 2)


def optimal_a1(a3: float, nu_tilde: float) -> Tuple[float, float, float]:
    """
    Minimise the spectral radius over (a1, a2) with a3 and nu~ = a2^2 / (2 - a1) fixed.

    Returns:
        (a1*, a2* >= 0, minimum radius |a3 - a1*| / 2)

    Raises:
        ConstraintViolation: unless 0 < a3 < 2, nu~ >= 0 and nu~ <= 2 - a3 <= 1 + nu~
    """
    gap = 2 - a3
    if not (0 < a3 < 2 and nu_tilde >= 0
            and nu_tilde - COEFF_TOL <= gap <= 1 + nu_tilde + COEFF_TOL):
        raise ConstraintViolation(
            f"need 0 < a3 < 2 and nu~ <= 2 - a3 <= 1 + nu~ (a3={a3}, nu~={nu_tilde})"
        )
    two_minus_a1 = (np.sqrt(nu_tilde + a3) - np.sqrt(nu_tilde)) ** 2
    a1 = 2 - two_minus_a1
    return float(a1), float(np.sqrt(nu_tilde * two_minus_a1)), float(abs(a3 - a1) / 2)


def quadrant_probability(tau: float) -> float:
    """P[X > 0, Y > 0] = 1/4 + arcsin(tau) / (2 pi) for standard bivariate normals with correlation tau."""
    if not -1 <= tau <= 1:
        raise InvalidParams(f"correlation tau={tau} outside [-1, 1]")
    return float(0.25 + np.arcsin(tau) / (2 * np.pi))


def stationary_acceptance_mc(sampler: Union[HamsCoeffs, IntegratorKind, str], gamma: float,
                             n_draws: int, rng: np.random.Generator,
                             epsilon: Optional[float] = None, eta: Optional[float] = None,
                             c: Optional[float] = None) -> Dict[str, float]:
    """
    Monte Carlo acceptance of one step from the stationary law of N(0, 1/gamma).

    Draws (x0, u0) ~ N(0, 1/gamma) x N(0, 1), proposes once per draw and
    averages min(1, exp(-dG)) as well as the quadrant form 2 P[dG < 0] + P[dG = 0].

    Returns:
        Dict with mean_alpha, quadrant_alpha, mean_delta_g and their standard errors
    """
    if n_draws < 2:
        raise InvalidParams("need at least two draws")
    target = GaussianTarget(gamma)
    x0 = rng.standard_normal((n_draws, 1)) / np.sqrt(gamma)
    u0 = rng.standard_normal((n_draws, 1))
    state = PhaseState(x0, u0)
    if isinstance(sampler, HamsCoeffs):
        delta_g = propose(target, state, sampler, rng).delta_g
    else:
        if epsilon is None:
            raise InvalidParams("Metropolized kernels need epsilon")
        delta_g = ma_propose(sampler, target, state, epsilon, eta, rng, c=c).delta_g
    delta_g = np.asarray(delta_g, dtype=float)
    alpha = np.exp(np.minimum(-delta_g, 0.0))
    zero = np.abs(delta_g) <= COEFF_TOL
    quadrant = 2.0 * ((delta_g < 0) & ~zero) + 1.0 * zero
    scale = np.sqrt(n_draws)
    return {
        'mean_alpha': float(np.mean(alpha)),
        'mean_alpha_se': float(np.std(alpha, ddof=1) / scale),
        'quadrant_alpha': float(np.mean(quadrant)),
        'quadrant_alpha_se': float(np.std(quadrant, ddof=1) / scale),
        'mean_delta_g': float(np.mean(delta_g)),
        'mean_delta_g_se': float(np.std(delta_g, ddof=1) / scale),
    }
