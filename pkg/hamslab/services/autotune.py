"""
Step-size autotuning towards a target acceptance rate.

Robbins-Monro on log(eps) with gain t^-0.7, followed by a validation run at
the tuned step size whose trailing 20% must land near the target.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from hamslab.errors import InvalidParams, TuningFailed
from hamslab.models import PhaseState
from hamslab.protocols import Kernel

logger = logging.getLogger(__name__)

EPS_MIN = 1e-3
EPS_MAX = 0.999
GAIN_DECAY = 0.7
TRAILING_FRACTION = 0.2
WARN_GAP = 0.05
FAIL_GAP = 0.15

KernelFactory = Callable[[float], Kernel]


@dataclass
class TuneResult:
    """Tuned step size, validation acceptance and the state reached."""
    epsilon: float
    acceptance: float
    state: PhaseState
    at_clamp: bool = False


class StepSizeAdapter:
    """Robbins-Monro iterate on log(eps)."""

    def __init__(self, target_rate: float, epsilon0: float = 0.5):
        if not 0 < target_rate < 1:
            raise InvalidParams(f"target_rate={target_rate} outside (0, 1)")
        self.target_rate = target_rate
        self.log_eps = float(np.log(np.clip(epsilon0, EPS_MIN, EPS_MAX)))
        self.t = 0

    @property
    def epsilon(self) -> float:
        return float(np.exp(self.log_eps))

    def update(self, alpha: float):
        self.t += 1
        self.log_eps += self.t ** -GAIN_DECAY * (alpha - self.target_rate)
        self.log_eps = float(np.clip(self.log_eps, np.log(EPS_MIN), np.log(EPS_MAX)))


def _step_alpha(result) -> float:
    if result.accept_prob is not None:
        return float(np.mean(result.accept_prob))
    return float(np.mean(result.accepted))


def autotune_epsilon(make_kernel: KernelFactory, initial: PhaseState, rng: np.random.Generator,
                     target_rate: float = 0.7, n_adapt: int = 4000, n_validate: int = 1000,
                     epsilon0: float = 0.5) -> TuneResult:
    """
    Adapt eps during burn-in, then validate it.

    Args:
        make_kernel: Builds the kernel for a given step size
        initial: Starting state (batched chains share one step size)
        rng: Generator of the chain
        target_rate: Desired acceptance rate
        n_adapt: Adaptation steps
        n_validate: Steps at the tuned eps; the trailing 20% is scored
        epsilon0: Starting step size

    Raises:
        TuningFailed: trailing acceptance misses the target by more than 0.15
            although eps is not at a clamp
    """
    if n_adapt < 1 or n_validate < 5:
        raise InvalidParams("need n_adapt >= 1 and n_validate >= 5")
    adapter = StepSizeAdapter(target_rate, epsilon0)
    state = initial
    for _ in range(n_adapt):
        kernel = make_kernel(adapter.epsilon)
        result = kernel.step(kernel.prepare(state), rng)
        state = result.state
        adapter.update(_step_alpha(result))

    epsilon = adapter.epsilon
    kernel = make_kernel(epsilon)
    state = kernel.prepare(state)
    tail = max(1, int(round(TRAILING_FRACTION * n_validate)))
    accepted = []
    for t in range(n_validate):
        result = kernel.step(state, rng)
        state = result.state
        if t >= n_validate - tail:
            accepted.append(np.mean(result.accepted))
    rate = float(np.mean(accepted))

    at_clamp = epsilon <= EPS_MIN * (1 + 1e-9) or epsilon >= EPS_MAX * (1 - 1e-9)
    gap = abs(rate - target_rate)
    if at_clamp:
        logger.warning("step size reached the clamp at %.4g (acceptance %.3f)", epsilon, rate)
    elif gap > FAIL_GAP:
        raise TuningFailed(f"acceptance {rate:.3f} at eps={epsilon:.4g} misses target {target_rate}")
    elif gap > WARN_GAP:
        logger.warning("acceptance %.3f at eps=%.4g is %.3f away from target %.2f",
                       rate, epsilon, gap, target_rate)
    logger.debug("tuned eps=%.4g, trailing acceptance %.3f", epsilon, rate)
    return TuneResult(epsilon, rate, state, at_clamp)
