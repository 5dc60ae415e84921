"""
Exact one-step moments under a univariate Gaussian target.

With grad U(x) = gamma * x every update is affine in (x0, u0, noise), so
pushing unit inputs through the update gives the drift matrix M and the
noise covariance S with no sampling.
"""

from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from hamslab.context.hams.kernel import forward_map, proposal_factor, shifted_propose
from hamslab.context.langevin.integrators import NOISE_COUNT, apply_rule, check_step_params
from hamslab.context.targets.gaussian import GaussianTarget
from hamslab.errors import InvalidParams
from hamslab.models import (
    HamsCoeffs,
    IntegratorKind,
    LinearKernel,
    NoisePair,
    PhaseState,
    ShiftedHamsCoeffs,
    Variant,
)

Subject = Union[IntegratorKind, str, HamsCoeffs, ShiftedHamsCoeffs]
AffineMap = Callable[[np.ndarray, np.ndarray, int], Tuple[np.ndarray, np.ndarray]]


def _moments(update: AffineMap, noise_basis: Sequence[int]) -> LinearKernel:
    """update(x0, u0, j) returns (x*, u*) with noise basis vector j switched on (-1: none)."""
    one, zero = np.ones(1), np.zeros(1)
    cols = [update(one, zero, -1), update(zero, one, -1)]
    M = np.array([[cols[0][0][0], cols[1][0][0]],
                  [cols[0][1][0], cols[1][1][0]]])
    S = np.zeros((2, 2))
    for j in noise_basis:
        x, u = update(zero, zero, j)
        v = np.array([x[0], u[0]])
        S += np.outer(v, v)
    return LinearKernel(M, S)


def _integrator_update(kind: IntegratorKind, variant: Variant, epsilon: float, eta: float,
                       gamma: float) -> AffineMap:
    count = NOISE_COUNT[kind]

    def grad(x):
        return gamma * x

    def update(x0, u0, j):
        noise = np.zeros((count, 1))
        if j >= 0:
            noise[j, 0] = 1.0
        return apply_rule(kind, variant, grad, x0, u0, noise, epsilon, eta)

    return update


def _hams_update(coeffs: HamsCoeffs, gamma: float) -> AffineMap:
    target = GaussianTarget(gamma)
    factor = proposal_factor(coeffs)

    def update(x0, u0, j):
        z = factor[:, j] if j >= 0 else np.zeros(2)
        proposed, _ = forward_map(target, PhaseState(x0, u0), coeffs,
                                  NoisePair(z[:1], z[1:]))
        return proposed.x, proposed.u

    return update


def _shifted_update(coeffs: ShiftedHamsCoeffs, gamma: float) -> AffineMap:
    target = GaussianTarget(gamma)
    factor = proposal_factor(coeffs.base)

    def update(x0, u0, j):
        z = factor[:, j] if j >= 0 else np.zeros(2)
        proposed = shifted_propose(target, PhaseState(x0, u0), coeffs,
                                   noise=NoisePair(z[:1], z[1:]))
        return proposed.x, proposed.u

    return update


def linearize(subject: Subject, variant: Union[Variant, str] = Variant.MODIFIED,
              epsilon: Optional[float] = None, eta: Optional[float] = None,
              gamma: float = 1.0) -> LinearKernel:
    """
    Conditional drift M and covariance S of one step given (x0, u0).

    Args:
        subject: An IntegratorKind, or HAMS / shifted HAMS coefficients
        variant: Integrator variant (ignored for coefficients)
        epsilon: Step size (integrators only)
        eta: Friction (integrators only)
        gamma: Precision of the Gaussian target

    Returns:
        LinearKernel with E[(x*, u*)] = M (x0, u0) and Cov[(x*, u*)] = S
    """
    if gamma <= 0:
        raise InvalidParams(f"gamma={gamma} must be > 0")
    if isinstance(subject, HamsCoeffs):
        return _moments(_hams_update(subject, gamma), range(2))
    if isinstance(subject, ShiftedHamsCoeffs):
        return _moments(_shifted_update(subject, gamma), range(2))

    kind, variant = IntegratorKind(subject), Variant(variant)
    if epsilon is None or eta is None:
        raise InvalidParams("integrators need epsilon and eta")
    check_step_params(kind, variant, epsilon, eta)
    update = _integrator_update(kind, variant, epsilon, eta, gamma)
    return _moments(update, range(NOISE_COUNT[kind]))
