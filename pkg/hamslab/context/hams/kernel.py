"""
HAMS proposal, backward-noise reconstruction, Delta G and the
accept/reject kernel, plus the shifted variant.

Every function works on batched states: arrays of shape (..., k) hold
independent chains and Delta G has shape (...).
"""

from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from hamslab.context.core.acceptance import metropolis_accept, select_state
from hamslab.context.core.noise import factor_cov2, sample_noise_pair
from hamslab.context.hams.coefficients import is_default_phi
from hamslab.context.targets.evaluation import evaluate
from hamslab.errors import Degenerate, SingularCovariance
from hamslab.models import (
    COEFF_TOL,
    HamsCoeffs,
    NoisePair,
    PhaseState,
    ProposalOutcome,
    ShiftedHamsCoeffs,
    StepResult,
)
from hamslab.protocols import Kernel, TargetModel

PIVOT_TOL = 1e-10


@lru_cache(maxsize=256)
def proposal_factor(coeffs: HamsCoeffs) -> np.ndarray:
    """Cached 2x2 factor of 2A - A^2 (phi does not enter)."""
    base = HamsCoeffs(coeffs.a1, coeffs.a2, coeffs.a3, 0.0)
    factor = factor_cov2(base.noise_cov())
    factor.setflags(write=False)
    return factor


def with_cache(target: TargetModel, state: PhaseState) -> PhaseState:
    if state.has_cache():
        return state
    potential, grad = evaluate(target, state.x)
    return PhaseState(state.x, state.u, potential, grad)


def forward_map(target: TargetModel, state: PhaseState, coeffs: HamsCoeffs,
                noise: NoisePair) -> Tuple[PhaseState, NoisePair]:
    """
    Deterministic part of a proposal given the forward noise.

    Returns:
        (proposed state with its cache filled, backward noise Z*)
    """
    state = with_cache(target, state)
    x0, u0, g0 = state.x, state.u, state.grad
    a1, a2, a3, phi = coeffs.a1, coeffs.a2, coeffs.a3, coeffs.phi

    xi = a2 * u0 + noise.z1
    z_tilde1 = xi - a1 * g0
    z_tilde2 = noise.z2 - a2 * g0 + a3 * u0
    x_star = x0 - a1 * g0 + xi
    pot_star, g_star = evaluate(target, x_star)
    u_star = -u0 + z_tilde2 + phi * (z_tilde1 + g0 - g_star)

    backward = NoisePair(z_tilde1 - a1 * g_star - a2 * u_star,
                         z_tilde2 - a2 * g_star - a3 * u_star)
    return PhaseState(x_star, u_star, pot_star, g_star), backward


def propose(target: TargetModel, state: PhaseState, coeffs: HamsCoeffs,
            rng: Optional[np.random.Generator] = None,
            noise: Optional[NoisePair] = None) -> ProposalOutcome:
    """
    One HAMS proposal from (x0, u0).

    Args:
        target: Target density
        state: Current state; a missing potential/gradient cache is filled
        coeffs: HAMS coefficients
        rng: Generator for the noise; unused when ``noise`` is given
        noise: Explicit forward noise (Z1, Z2)

    Returns:
        ProposalOutcome with the proposed state (its cache filled), both
        noise pairs and Delta G
    """
    state = with_cache(target, state)
    if noise is None:
        noise = sample_noise_pair(proposal_factor(coeffs), state.x.shape, rng)
    proposed, backward = forward_map(target, state, coeffs, noise)
    a1, a2 = coeffs.a1, coeffs.a2
    x0, u0, g0 = state.x, state.u, state.grad
    x_star, pot_star, g_star = proposed.x, proposed.potential, proposed.grad

    if is_default_phi(coeffs):
        delta_g = delta_g_default(target, x0, u0, noise.z1, g0, x_star, g_star, a1, a2,
                                  potential0=state.potential, potential_star=pot_star)
    else:
        delta_g = delta_g_general(target, state, proposed, noise, backward, coeffs)
    return ProposalOutcome(proposed, noise, backward, delta_g)


def delta_g_default(target: TargetModel, x0, u0, z1, grad0, xstar, gradstar,
                    a1: float, a2: float,
                    potential0: Optional[np.ndarray] = None,
                    potential_star: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Delta G for phi = a2 / (2 - a1):

        U(x*) - U(x0) + (g0 + g*)^T [a1 (g0 + g*) - 2 (a2 u0 + Z1)] / (2 (2 - a1))

    Raises:
        Degenerate: a1 is within 1e-12 of 2
    """
    if a1 >= 2 - COEFF_TOL:
        raise Degenerate(f"a1={a1} too close to 2")
    if potential0 is None:
        potential0 = target.potential(np.asarray(x0, dtype=float))
    if potential_star is None:
        potential_star = target.potential(np.asarray(xstar, dtype=float))
    gsum = np.asarray(grad0) + np.asarray(gradstar)
    inner = a1 * gsum - 2 * (a2 * np.asarray(u0) + np.asarray(z1))
    return potential_star - potential0 + np.sum(gsum * inner, axis=-1) / (2 * (2 - a1))


def _generalized_energy(potential, u, noise: NoisePair, v11, v12, v22, det):
    quad = (v22 * noise.z1 ** 2 - 2 * v12 * noise.z1 * noise.z2 + v11 * noise.z2 ** 2) / det
    return potential + 0.5 * np.sum(u ** 2, axis=-1) + 0.5 * np.sum(quad, axis=-1)


def delta_g_general(target: TargetModel, state: PhaseState, proposed: PhaseState,
                    z_forward: NoisePair, z_backward: NoisePair,
                    coeffs: HamsCoeffs) -> np.ndarray:
    """
    G(x*, u*, Z*) - G(x0, u0, Z0) with G = H + Z^T (2A - A^2)^{-1} Z / 2.

    Raises:
        SingularCovariance: a pivot of 2A - A^2 is below 1e-10
    """
    cov = coeffs.noise_cov()
    if cov.v11 < PIVOT_TOL or cov.det / cov.v11 < PIVOT_TOL:
        raise SingularCovariance(
            f"2A - A^2 is singular for {coeffs}; use the default phi"
        )
    pot0 = state.potential if state.potential is not None else target.potential(state.x)
    pot1 = proposed.potential if proposed.potential is not None else target.potential(proposed.x)
    args = (cov.v11, cov.v12, cov.v22, cov.det)
    return (_generalized_energy(pot1, proposed.u, z_backward, *args)
            - _generalized_energy(pot0, state.u, z_forward, *args))


def step(target: TargetModel, state: PhaseState, coeffs: HamsCoeffs,
         rng: np.random.Generator, uniform: Optional[np.ndarray] = None) -> StepResult:
    """Propose, then accept with probability min(1, exp(-Delta G)) or negate the momentum."""
    state = with_cache(target, state)
    outcome = propose(target, state, coeffs, rng)
    accepted, prob = metropolis_accept(outcome.delta_g, rng, uniform)
    return StepResult(select_state(accepted, outcome.proposed, state), accepted,
                      np.asarray(outcome.delta_g, dtype=float), prob)


def shifted_propose(target: TargetModel, state: PhaseState, sc: ShiftedHamsCoeffs,
                    rng: Optional[np.random.Generator] = None,
                    noise: Optional[NoisePair] = None) -> PhaseState:
    """
    Shifted HAMS update with the gradient taken at x0 + b*u0:

        (x*, u*) = (x0, -u0) - A~ (grad U(x~), -u0) + Z0
    """
    x0, u0 = state.x, state.u
    _, g_shift = evaluate(target, x0 + sc.b * u0)
    if noise is None:
        noise = sample_noise_pair(proposal_factor(sc.base), x0.shape, rng)
    at = sc.a_tilde
    x_star = x0 - at[0, 0] * g_shift + at[0, 1] * u0 + noise.z1
    u_star = -u0 - at[1, 0] * g_shift + at[1, 1] * u0 + noise.z2
    return PhaseState(x_star, u_star)


class HamsKernel(Kernel):
    """HAMS as a Kernel; ``metropolize=False`` keeps every proposal."""

    def __init__(self, target: TargetModel, coeffs: HamsCoeffs, metropolize: bool = True):
        self._target = target
        self.coeffs = coeffs
        self.metropolize = metropolize

    @property
    def target(self) -> TargetModel:
        return self._target

    def step(self, state: PhaseState, rng: np.random.Generator) -> StepResult:
        if self.metropolize:
            return step(self._target, state, self.coeffs, rng)
        outcome = propose(self._target, with_cache(self._target, state), self.coeffs, rng)
        delta_g = np.asarray(outcome.delta_g, dtype=float)
        return StepResult(outcome.proposed, np.ones(delta_g.shape, dtype=bool), delta_g)

    def __repr__(self):
        c = self.coeffs
        return f"HamsKernel(a1={c.a1:.4g}, a2={c.a2:.4g}, a3={c.a3:.4g}, phi={c.phi:.4g})"


class ShiftedHamsKernel(Kernel):
    """Un-Metropolized shifted HAMS chain."""

    def __init__(self, target: TargetModel, coeffs: ShiftedHamsCoeffs):
        self._target = target
        self.coeffs = coeffs

    @property
    def target(self) -> TargetModel:
        return self._target

    def prepare(self, state: PhaseState) -> PhaseState:
        return state

    def step(self, state: PhaseState, rng: np.random.Generator) -> StepResult:
        proposed = shifted_propose(self._target, state, self.coeffs, rng)
        shape = proposed.batch_shape
        return StepResult(proposed, np.ones(shape, dtype=bool), np.zeros(shape))
