"""
One-step underdamped Langevin integrators.

Each update takes explicit standard-normal inputs of shape
(n_noise, ..., k), so a step is an affine map of (x0, u0, noise) whenever
the gradient is linear. ``Variant.MODIFIED`` selects the rescaled or
modified form that lines up with (shifted) HAMS.
"""

import logging
from typing import Callable, Optional

import numpy as np

from hamslab.context.targets.evaluation import evaluate
from hamslab.errors import ConstraintViolation, InvalidParams
from hamslab.models import IntegratorKind, PhaseState, StepResult, Variant
from hamslab.protocols import Kernel, TargetModel

logger = logging.getLogger(__name__)

RADICAND_TOL = 1e-12

NOISE_COUNT = {
    IntegratorKind.GJF: 1,
    IntegratorKind.BAOAB: 1,
    IntegratorKind.ABOBA: 1,
    IntegratorKind.IL: 1,
    IntegratorKind.BP: 2,
    IntegratorKind.VEC: 2,
    IntegratorKind.SPV: 1,
    IntegratorKind.MANNELLA: 1,
}


def friction_kick(epsilon: float, eta: float) -> float:
    """(1 - exp(-eta*eps)) / eta, which tends to eps as eta -> 0."""
    if eta == 0:
        return epsilon
    return float(-np.expm1(-eta * epsilon) / eta)


def half_shift(epsilon: float) -> float:
    """eps / (1 + sqrt(1 - eps^2)), the modified half-step coefficient."""
    return float(epsilon / (1 + np.sqrt(1 - epsilon ** 2)))


def spv_radicand(epsilon: float, eta: float) -> float:
    c = np.exp(-eta * epsilon)
    kappa = friction_kick(epsilon, eta)
    radicand = (1 + c) ** 2 - 4 * kappa ** 2
    if radicand < -RADICAND_TOL:
        raise ConstraintViolation(
            f"modified SPV is undefined at eps={epsilon}, eta={eta} (radicand {radicand:.3g})"
        )
    return float(max(radicand, 0.0))


def spv_shift(epsilon: float, eta: float) -> float:
    """Shift b of the modified SPV update; eps/2 + O(eps^3)."""
    c = np.exp(-eta * epsilon)
    kappa = friction_kick(epsilon, eta)
    return float(2 * kappa / (1 + c + np.sqrt(spv_radicand(epsilon, eta))))


def check_step_params(kind: IntegratorKind, variant: Variant, epsilon: float, eta: float):
    """
    Raises:
        InvalidParams: eps <= 0, eta < 0, or eps >= 1 for a modified form that needs sqrt(1 - eps^2)
    """
    if not epsilon > 0:
        raise InvalidParams(f"epsilon={epsilon} must be > 0")
    if eta < 0:
        raise InvalidParams(f"eta={eta} must be >= 0")
    if variant is Variant.MODIFIED:
        if kind in (IntegratorKind.BP, IntegratorKind.ABOBA, IntegratorKind.MANNELLA,
                    IntegratorKind.SPV) and epsilon >= 1:
            raise InvalidParams(f"modified {kind.value} needs epsilon < 1")
        if kind in (IntegratorKind.GJF, IntegratorKind.BAOAB, IntegratorKind.IL) and epsilon >= 2:
            raise InvalidParams(f"modified {kind.value} needs epsilon < 2")


Gradient = Callable[[np.ndarray], np.ndarray]


def _gjf(grad: Gradient, x0, u0, w, eps, eta, modified):
    d = 2 + eta * eps
    noise = np.sqrt(2 * eta * eps) * w[0]
    g0 = grad(x0)
    if modified:
        r = np.sqrt(4 - eps ** 2)
        x = x0 - eps ** 2 / d * g0 + eps * r / d * u0 + eps / d * noise
        u = ((2 - eta * eps) / d * u0 + (eta * eps ** 2 - 2 * eps) / (r * d) * g0
             - eps / r * grad(x) + 4 / (r * d) * noise)
        return x, u
    x = x0 - eps ** 2 / d * g0 + 2 * eps / d * u0 + eps / d * noise
    u = ((2 - eta * eps) / d * u0 + (eta * eps ** 2 - 2 * eps) / (2 * d) * g0
         - eps / 2 * grad(x) + 2 / d * noise)
    return x, u


def _baoab(grad: Gradient, x0, u0, w, eps, eta, modified):
    c = np.exp(-eta * eps)
    if modified:
        r = np.sqrt(4 - eps ** 2)
        kick, drift, sigma = eps / r, eps * r / 4, 2 * np.sqrt((1 - c ** 2) / (4 - eps ** 2))
    else:
        kick, drift, sigma = eps / 2, eps / 2, np.sqrt(1 - c ** 2)
    u_half = u0 - kick * grad(x0)
    x_mid = x0 + drift * u_half
    u_ou = c * u_half + sigma * w[0]
    x = x_mid + drift * u_ou
    return x, u_ou - kick * grad(x)


def _il(grad: Gradient, x0, u0, w, eps, eta, modified):
    loss = -np.expm1(-eta * eps)
    g0 = grad(x0)
    scale = np.sqrt(4 - eps ** 2) / 2 if modified else 1.0
    u_back = scale * u0 + eps / 2 * g0
    u_tilde = u_back - eps * g0
    u_tt = -loss * u_tilde + np.sqrt(loss * (2 - loss)) * w[0]
    x = x0 + eps * (u_tilde + 0.5 * u_tt)
    u_fwd = u_tilde + u_tt
    return x, (u_fwd - eps / 2 * grad(x)) / scale


def _bp(grad: Gradient, x0, u0, w, eps, eta, modified):
    c = np.exp(-eta * eps)
    kick = half_shift(eps) if modified else eps / 2
    u_plus = np.sqrt(c) * u0 + np.sqrt(1 - c) * w[0]
    u_tilde = u_plus - kick * grad(x0)
    x = x0 + eps * u_tilde
    u_minus = u_tilde - kick * grad(x)
    return x, np.sqrt(c) * u_minus + np.sqrt(1 - c) * w[1]


def _vec(grad: Gradient, x0, u0, w, eps, eta, modified):
    g0 = grad(x0)
    w1, w2 = w[0], w[1]
    x = (x0 - eps ** 2 / 2 * g0 + (2 * eps - eta * eps ** 2) / 2 * u0
         + np.sqrt(2 * eta) * eps ** 1.5 / 2 * w1 + np.sqrt(6 * eta) * eps ** 1.5 / 6 * w2)
    g0_coeff = (eta * eps ** 2 - eps) / 2
    if modified:
        g0_coeff -= eps ** 3 / 4
    u = ((1 - eta * eps + eta ** 2 * eps ** 2 / 2) * u0 + g0_coeff * g0 - eps / 2 * grad(x)
         + np.sqrt(2 * eta * eps) / 2 * (2 - eta * eps) * w1
         - np.sqrt(6) / 6 * (eta * eps) ** 1.5 * w2)
    return x, u


def _aboba(grad: Gradient, x0, u0, w, eps, eta, modified):
    c = np.exp(-eta * eps)
    b = half_shift(eps) if modified else eps / 2
    x_mid = x0 + b * u0
    g_mid = grad(x_mid)
    u_tilde = u0 - eps / 2 * g_mid
    u = c * u_tilde + np.sqrt(1 - c ** 2) * w[0] - eps / 2 * g_mid
    return x_mid + b * u, u


def _spv(grad: Gradient, x0, u0, w, eps, eta, modified):
    c = np.exp(-eta * eps)
    b = spv_shift(eps, eta) if modified else eps / 2
    x_mid = x0 + b * u0
    u = c * u0 - friction_kick(eps, eta) * grad(x_mid) + np.sqrt(1 - c ** 2) * w[0]
    return x_mid + b * u, u


def _mannella(grad: Gradient, x0, u0, w, eps, eta, modified):
    c1 = (2 - eta * eps) / 2
    c2 = 2 / (2 + eta * eps)
    b = half_shift(eps) if modified else eps / 2
    x_mid = x0 + b * u0
    u = c2 * (c1 * u0 - eps * grad(x_mid) + np.sqrt(2 * eta) * np.sqrt(eps) * w[0])
    return x_mid + b * u, u


_RULES = {
    IntegratorKind.GJF: _gjf,
    IntegratorKind.BAOAB: _baoab,
    IntegratorKind.IL: _il,
    IntegratorKind.BP: _bp,
    IntegratorKind.VEC: _vec,
    IntegratorKind.ABOBA: _aboba,
    IntegratorKind.SPV: _spv,
    IntegratorKind.MANNELLA: _mannella,
}


def apply_rule(kind: IntegratorKind, variant: Variant, grad: Gradient,
               x0: np.ndarray, u0: np.ndarray, noise: np.ndarray,
               epsilon: float, eta: float):
    """Evaluate one update with an arbitrary gradient callable; returns (x*, u*)."""
    return _RULES[kind](grad, x0, u0, noise, epsilon, eta, variant is Variant.MODIFIED)


def integrator_step(kind: IntegratorKind, variant: Variant, target: TargetModel,
                    state: PhaseState, epsilon: float, eta: float,
                    rng: Optional[np.random.Generator] = None,
                    noise: Optional[np.ndarray] = None) -> PhaseState:
    """
    Advance (x, u) by one un-Metropolized integrator step.

    Args:
        kind: Integrator
        variant: RAW for the published rule, MODIFIED for its matched form
        target: Target density
        state: Current full-step state (IL converts to half-step internally)
        epsilon: Step size
        eta: Friction
        rng: Generator for the noise; unused when ``noise`` is given
        noise: Standard normals of shape (n_noise, *state.x.shape); BP and
            VEC read W1 from row 0 and W2 from row 1

    Returns:
        The next PhaseState
    """
    kind, variant = IntegratorKind(kind), Variant(variant)
    check_step_params(kind, variant, epsilon, eta)
    count = NOISE_COUNT[kind]
    if noise is None:
        noise = rng.standard_normal((count,) + state.x.shape)
    noise = np.asarray(noise, dtype=float)
    if noise.shape[0] != count:
        raise InvalidParams(f"{kind.value} consumes {count} noise vectors, got {noise.shape[0]}")

    def grad(x):
        return evaluate(target, x)[1]

    x, u = apply_rule(kind, variant, grad, state.x, state.u, noise, epsilon, eta)
    return PhaseState(x, u)


class IntegratorKernel(Kernel):
    """An integrator run without accept/reject; every step counts as accepted."""

    def __init__(self, target: TargetModel, kind: IntegratorKind, variant: Variant,
                 epsilon: float, eta: float):
        check_step_params(IntegratorKind(kind), Variant(variant), epsilon, eta)
        self._target = target
        self.kind = IntegratorKind(kind)
        self.variant = Variant(variant)
        self.epsilon = float(epsilon)
        self.eta = float(eta)

    @property
    def target(self) -> TargetModel:
        return self._target

    def prepare(self, state: PhaseState) -> PhaseState:
        return state

    def step(self, state: PhaseState, rng: np.random.Generator) -> StepResult:
        nxt = integrator_step(self.kind, self.variant, self._target, state,
                              self.epsilon, self.eta, rng)
        shape = nxt.batch_shape
        return StepResult(nxt, np.ones(shape, dtype=bool), np.zeros(shape))

    def __repr__(self):
        return (f"IntegratorKernel({self.kind.value}, {self.variant.value}, "
                f"epsilon={self.epsilon}, eta={self.eta})")
