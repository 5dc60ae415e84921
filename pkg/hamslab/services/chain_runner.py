"""
Chain runner: burn-in plus recorded draws for one kernel.

States may be batched; a state with x of shape (R, k) advances R chains in
lockstep and yields R ChainRecords.
"""

import logging
import time
from typing import Callable, List, Optional

import numpy as np

from hamslab.errors import InvalidParams
from hamslab.models import ChainRecord, PhaseState
from hamslab.protocols import Kernel

logger = logging.getLogger(__name__)

Emit = Callable[[np.ndarray], np.ndarray]


def advance(kernel: Kernel, state: PhaseState, n_steps: int,
            rng: np.random.Generator) -> PhaseState:
    """Run ``n_steps`` without recording anything."""
    state = kernel.prepare(state)
    for _ in range(n_steps):
        state = kernel.step(state, rng).state
    return state


def run_chains(kernel: Kernel, initial: PhaseState, n_burn: int, n_draws: int,
               rng: np.random.Generator, emit: Optional[Emit] = None,
               keep_momenta: bool = True, epsilon: float = float('nan')) -> List[ChainRecord]:
    """
    Burn in, then record ``n_draws`` steps of every chain in the batch.

    Args:
        kernel: Transition to iterate
        initial: Starting state, shape (k,) or (R, k)
        n_burn: Unrecorded steps
        n_draws: Recorded steps
        rng: Generator shared by the batch
        emit: Maps recorded positions to output coordinates (e.g. un-whitening)
        keep_momenta: Also record momenta
        epsilon: Step size stored on the records

    Returns:
        One ChainRecord per chain; ``elapsed`` is the wall time of the whole batch
    """
    if n_burn < 0 or n_draws < 1:
        raise InvalidParams("need n_burn >= 0 and n_draws >= 1")
    if initial.x.ndim > 2:
        raise InvalidParams("at most one batch axis is supported")
    start = time.perf_counter()
    state = advance(kernel, initial, n_burn, rng)

    shape = state.x.shape
    draws = np.empty((n_draws,) + shape)
    momenta = np.empty((n_draws,) + shape) if keep_momenta else None
    accepted = np.empty((n_draws,) + shape[:-1], dtype=bool)
    delta_g = np.empty((n_draws,) + shape[:-1])
    for t in range(n_draws):
        result = kernel.step(state, rng)
        state = result.state
        draws[t] = state.x
        if keep_momenta:
            momenta[t] = state.u
        accepted[t] = result.accepted
        delta_g[t] = result.delta_g
    if emit is not None:
        draws = emit(draws)
    elapsed = time.perf_counter() - start

    if draws.ndim == 2:
        return [ChainRecord(draws, accepted, delta_g, momenta, epsilon, elapsed)]
    logger.debug("ran %d chains x %d draws in %.2fs", shape[0], n_draws, elapsed)
    return [
        ChainRecord(draws[:, r], accepted[:, r], delta_g[:, r],
                    None if momenta is None else momenta[:, r], epsilon, elapsed)
        for r in range(shape[0])
    ]


def run_chain(kernel: Kernel, initial: PhaseState, n_burn: int, n_draws: int,
              rng: np.random.Generator, emit: Optional[Emit] = None,
              keep_momenta: bool = True, epsilon: float = float('nan')) -> ChainRecord:
    if initial.batch_shape:
        raise InvalidParams("run_chain takes an unbatched state; use run_chains")
    return run_chains(kernel, initial, n_burn, n_draws, rng, emit, keep_momenta, epsilon)[0]
