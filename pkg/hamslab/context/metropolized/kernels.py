"""
Metropolis-adjusted BAOAB, ABOBA and BP.

Each integrator step is used as a proposal in generalized Metropolis-Hastings:
accept with probability min(1, exp(-Delta G)), otherwise keep x0 and negate
u0. Delta G has a closed form per integrator; ``ma_delta_g_crosscheck``
recomputes it from the reconstructed backward noise.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from hamslab.context.core.acceptance import metropolis_accept, select_state
from hamslab.context.targets.evaluation import evaluate
from hamslab.errors import InvalidParams, NonFinite
from hamslab.models import IntegratorKind, NoisePair, PhaseState, ProposalOutcome, StepResult
from hamslab.protocols import Kernel, TargetModel

logger = logging.getLogger(__name__)

MA_KINDS = (IntegratorKind.BAOAB, IntegratorKind.ABOBA, IntegratorKind.BP)


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum(a * b, axis=-1)


def _check_kind(kind) -> IntegratorKind:
    kind = IntegratorKind(kind)
    if kind not in MA_KINDS:
        raise InvalidParams(f"{kind.value} has no Metropolis-adjusted form")
    return kind


def carryover(epsilon: float, eta: Optional[float] = None, c: Optional[float] = None) -> float:
    """c = exp(-eta*eps) unless given explicitly."""
    if not epsilon > 0:
        raise InvalidParams(f"epsilon={epsilon} must be > 0")
    if c is None:
        if eta is None or eta < 0:
            raise InvalidParams("need eta >= 0 or an explicit carryover")
        c = float(np.exp(-eta * epsilon))
    if not 0 < c <= 1:
        raise InvalidParams(f"carryover c={c} outside (0, 1]")
    return float(c)


def _potential(target: TargetModel, x: np.ndarray) -> np.ndarray:
    with np.errstate(over='ignore', invalid='ignore'):
        value = target.potential(x)
    if not np.all(np.isfinite(value)):
        raise NonFinite(f"{target!r} produced a non-finite potential")
    return value


def _start(target: TargetModel, state: PhaseState, need_grad: bool) -> PhaseState:
    if state.potential is not None and (state.grad is not None or not need_grad):
        return state
    if need_grad:
        potential, grad = evaluate(target, state.x)
        return PhaseState(state.x, state.u, potential, grad)
    return PhaseState(state.x, state.u, _potential(target, state.x), state.grad)


def _reverse_scale(value: float) -> float:
    # c = 1 leaves the noise out of the update entirely
    return 1.0 / np.sqrt(value) if value > 0 else 0.0


def _baoab(target, state, eps, c, w) -> Tuple[PhaseState, np.ndarray, NoisePair, NoisePair]:
    x0, u0, g0 = state.x, state.u, state.grad
    root = np.sqrt(1 - c ** 2)
    x = x0 - (1 + c) * eps ** 2 / 4 * g0 + (1 + c) * eps / 2 * u0 + eps / 2 * root * w[0]
    pot, g = evaluate(target, x)
    u = c * u0 - eps / 2 * c * g0 - eps / 2 * g + root * w[0]
    delta_g = (pot - state.potential
               - _dot(eps / 2 * u + eps ** 2 / 8 * g, g)
               - _dot(eps / 2 * u0 - eps ** 2 / 8 * g0, g0))
    zeros = np.zeros_like(x0)
    if c < 1:
        back = -(c * u - u0 + eps / 2 * g0 + c * eps / 2 * g) * _reverse_scale(1 - c ** 2)
    else:
        back = -w[0]
    return (PhaseState(x, u, pot, g), delta_g,
            NoisePair(w[0], zeros), NoisePair(back, zeros))


def _aboba(target, state, eps, c, w) -> Tuple[PhaseState, np.ndarray, NoisePair, NoisePair]:
    x0, u0 = state.x, state.u
    root = np.sqrt(1 - c ** 2)
    _, g_mid = evaluate(target, x0 + eps / 2 * u0)
    x = x0 - (1 + c) * eps ** 2 / 4 * g_mid + (1 + c) * eps / 2 * u0 + eps / 2 * root * w[0]
    u = c * u0 - (1 + c) * eps / 2 * g_mid + root * w[0]
    pot = _potential(target, x)
    delta_g = pot - state.potential - eps / 2 * _dot(u + u0, g_mid)
    zeros = np.zeros_like(x0)
    if c < 1:
        back = -(c * u - u0 + (1 + c) * eps / 2 * g_mid) * _reverse_scale(1 - c ** 2)
    else:
        back = -w[0]
    return (PhaseState(x, u, pot, None), delta_g,
            NoisePair(w[0], zeros), NoisePair(back, zeros))


def _bp(target, state, eps, c, w) -> Tuple[PhaseState, np.ndarray, NoisePair, NoisePair]:
    x0, u0, g0 = state.x, state.u, state.grad
    sc = np.sqrt(c)
    x = x0 - eps ** 2 / 2 * g0 + eps * sc * u0 + eps * np.sqrt(1 - c) * w[0]
    pot, g = evaluate(target, x)
    u = c * u0 - eps * sc / 2 * (g0 + g) + np.sqrt(c * (1 - c)) * w[0] + np.sqrt(1 - c) * w[1]
    delta_g = (pot - state.potential - _dot(x - x0, g + g0) / 2
               + eps ** 2 / 8 * (_dot(g, g) - _dot(g0, g0)))
    if c < 1:
        scale = _reverse_scale(1 - c)
        back1 = -((x0 - x) / eps + eps / 2 * g + sc * u) * scale
        back2 = (u0 - sc * ((x - x0) / eps + eps / 2 * g0)) * scale
        backward = NoisePair(back1, back2)
    else:
        backward = NoisePair(-w[0], -w[1])
    return PhaseState(x, u, pot, g), delta_g, NoisePair(w[0], w[1]), backward


_PROPOSALS = {
    IntegratorKind.BAOAB: (_baoab, 1, True),
    IntegratorKind.ABOBA: (_aboba, 1, False),
    IntegratorKind.BP: (_bp, 2, True),
}


def ma_propose(kind: IntegratorKind, target: TargetModel, state: PhaseState,
               epsilon: float, eta: Optional[float] = None,
               rng: Optional[np.random.Generator] = None,
               noise: Optional[np.ndarray] = None,
               c: Optional[float] = None) -> ProposalOutcome:
    """
    Integrator proposal with its closed-form Delta G and reconstructed backward noise.

    Args:
        kind: BAOAB, ABOBA or BP
        target: Target density
        state: Current state; its potential (and gradient for BAOAB/BP) cache is filled if missing
        epsilon: Step size
        eta: Friction, giving c = exp(-eta*eps)
        rng: Generator for the noise; unused when ``noise`` is given
        noise: Standard normals of shape (n_noise, *state.x.shape)
        c: Explicit carryover, overriding ``eta``

    Returns:
        ProposalOutcome; single-noise kinds carry a zero second noise component
    """
    kind = _check_kind(kind)
    c = carryover(epsilon, eta, c)
    rule, count, need_grad = _PROPOSALS[kind]
    state = _start(target, state, need_grad)
    if noise is None:
        noise = rng.standard_normal((count,) + state.x.shape)
    noise = np.asarray(noise, dtype=float)
    if noise.shape[0] != count:
        raise InvalidParams(f"{kind.value} consumes {count} noise vectors, got {noise.shape[0]}")
    proposed, delta_g, forward, backward = rule(target, state, float(epsilon), c, noise)
    return ProposalOutcome(proposed, forward, backward, np.asarray(delta_g, dtype=float))


def ma_step(kind: IntegratorKind, target: TargetModel, state: PhaseState,
            epsilon: float, eta: Optional[float], rng: np.random.Generator,
            uniform: Optional[np.ndarray] = None, c: Optional[float] = None) -> StepResult:
    """One Metropolis-adjusted step; rejection returns (x0, -u0)."""
    kind = _check_kind(kind)
    state = _start(target, state, _PROPOSALS[kind][2])
    outcome = ma_propose(kind, target, state, epsilon, eta, rng, c=c)
    accepted, prob = metropolis_accept(outcome.delta_g, rng, uniform)
    return StepResult(select_state(accepted, outcome.proposed, state), accepted,
                      outcome.delta_g, prob)


def ma_delta_g_crosscheck(kind: IntegratorKind, target: TargetModel,
                          x0: np.ndarray, u0: np.ndarray, noise: np.ndarray,
                          epsilon: float, eta: Optional[float] = None,
                          c: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Closed-form Delta G against H(x*, u*) - H(x0, u0) + |Z*|^2/2 - |Z0|^2/2.

    Returns:
        (closed_form, direct)
    """
    state = PhaseState(x0, u0)
    outcome = ma_propose(kind, target, state, epsilon, eta, noise=noise, c=c)
    proposed = outcome.proposed
    h0 = _potential(target, state.x) + 0.5 * _dot(state.u, state.u)
    h1 = proposed.potential + 0.5 * _dot(proposed.u, proposed.u)
    direct = (h1 - h0 + 0.5 * outcome.z_backward.squared_norm()
              - 0.5 * outcome.z_forward.squared_norm())
    return outcome.delta_g, np.asarray(direct, dtype=float)


class MetropolizedKernel(Kernel):
    """Metropolis-adjusted BAOAB, ABOBA or BP with a fixed step size and carryover."""

    def __init__(self, target: TargetModel, kind: IntegratorKind, epsilon: float,
                 eta: Optional[float] = None, c: Optional[float] = None):
        self._target = target
        self.kind = _check_kind(kind)
        self.epsilon = float(epsilon)
        self.c = carryover(epsilon, eta, c)

    @property
    def target(self) -> TargetModel:
        return self._target

    def prepare(self, state: PhaseState) -> PhaseState:
        return _start(self._target, state, _PROPOSALS[self.kind][2])

    def step(self, state: PhaseState, rng: np.random.Generator) -> StepResult:
        return ma_step(self.kind, self._target, state, self.epsilon, None, rng, c=self.c)

    def __repr__(self):
        return f"MetropolizedKernel({self.kind.value}, epsilon={self.epsilon}, c={self.c:.4g})"
