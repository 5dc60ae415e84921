"""
Generalized Metropolis-Hastings acceptance with momentum negation on rejection.
"""

from typing import Optional, Tuple

import numpy as np

from hamslab.models import PhaseState


def accept_probability(delta_g: np.ndarray) -> np.ndarray:
    """min(1, exp(-delta_g))."""
    return np.exp(np.minimum(-np.asarray(delta_g, dtype=float), 0.0))


def metropolis_accept(delta_g: np.ndarray, rng: np.random.Generator,
                      uniform: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Accept when the uniform draw is strictly below min(1, exp(-delta_g)).

    Returns:
        (accepted flags, acceptance probabilities), both shaped like delta_g
    """
    prob = accept_probability(delta_g)
    if uniform is None:
        uniform = rng.random(prob.shape)
    accepted = np.asarray(uniform) < prob
    return accepted, prob


def _pick(flags: np.ndarray, a: Optional[np.ndarray], b: Optional[np.ndarray], trailing: bool):
    if a is None or b is None:
        return None
    mask = flags[..., None] if trailing else flags
    return np.where(mask, a, b)


def select_state(accepted: np.ndarray, proposed: PhaseState, current: PhaseState) -> PhaseState:
    """Proposed state where accepted, (x0, -u0) elsewhere; caches follow the choice."""
    rejected = current.flipped()
    flags = np.asarray(accepted, dtype=bool)
    if flags.ndim == 0:
        return proposed if bool(flags) else rejected
    return PhaseState(
        _pick(flags, proposed.x, rejected.x, True),
        _pick(flags, proposed.u, rejected.u, True),
        _pick(flags, proposed.potential, rejected.potential, False),
        _pick(flags, proposed.grad, rejected.grad, True),
    )
