"""
High-level public API for hamslab users

This module provides a simplified interface for common use cases.
For advanced control, use the kernels and services directly.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from hamslab.context.core import make_rng
from hamslab.context.diagnostics import ess_bartlett_columns
from hamslab.models import ChainRecord, PhaseState, Protocol, RunConfig
from hamslab.protocols import Kernel, TargetModel
from hamslab.services import (
    SuiteResult,
    autotune_epsilon,
    build_kernel,
    match_table,
    run_chain,
    run_experiment,
    run_suites,
    theory_table,
)

SAMPLE_STREAM = 0


class HamsLab:
    """
    High-level entry point for sampling, analytic tables and experiments

    Example:
        >>> lab = HamsLab(seed=3)
        >>> record = lab.sample(GaussianTarget(2.0, dim=3), 'hams-a', epsilon=0.5, n_draws=2000)
        >>> print(record.acceptance_rate)

        >>> table = lab.theory(gammas=[2.0], a1=0.2)
        >>> rows = lab.run(target='sv', n_reps=2, workers=1)

    Attributes:
        seed: Master seed; every call derives its own stream from it
        eta: Default friction
        protocol: Default coefficient protocol
    """

    def __init__(self, seed: int = 0, eta: float = 1.0,
                 protocol: Union[Protocol, str] = Protocol.LANGEVIN):
        self.seed = seed
        self.eta = eta
        self.protocol = Protocol(protocol)

    def kernel(self, target: TargetModel, sampler: str, epsilon: float,
               eta: Optional[float] = None) -> Kernel:
        """Kernel for one named sampler ('hams-a', 'hams-2', 'ma-bp', ...)."""
        return build_kernel(sampler, target, epsilon, self.eta if eta is None else eta, self.protocol)

    def sample(
        self,
        target: TargetModel,
        sampler: str = 'hams-a',
        epsilon: Optional[float] = None,
        n_draws: int = 5000,
        n_burn: int = 1000,
        x0: Optional[np.ndarray] = None,
        target_rate: float = 0.7,
        stream: int = SAMPLE_STREAM,
    ) -> ChainRecord:
        """
        Draw one chain from ``target``

        Args:
            target: Model exposing potential and gradient
            sampler: Sampler name
            epsilon: Step size; None autotunes it during burn-in
            n_draws: Retained draws
            n_burn: Burn-in steps (also the adaptation length when tuning)
            x0: Starting position (default: standard normal)
            target_rate: Acceptance rate the autotuner aims for
            stream: Random stream index under ``seed``

        Returns:
            ChainRecord with draws, momenta, accept flags and Delta G
        """
        rng = make_rng(self.seed, stream)
        k = target.dim
        x = rng.standard_normal(k) if x0 is None else np.asarray(x0, dtype=float)
        state = PhaseState(x, rng.standard_normal(k))
        if epsilon is None:
            n_adapt = max(1, int(0.8 * n_burn))
            tuned = autotune_epsilon(lambda eps: self.kernel(target, sampler, eps), state, rng,
                                     target_rate, n_adapt, max(5, n_burn - n_adapt))
            epsilon, state, n_burn = tuned.epsilon, tuned.state, 0
        return run_chain(self.kernel(target, sampler, epsilon), state, n_burn, n_draws, rng,
                         epsilon=epsilon)

    def ess(self, record: ChainRecord, cutoff: int = 3000) -> np.ndarray:
        """Per-coordinate Bartlett-window ESS of a chain."""
        return ess_bartlett_columns(record.draws, cutoff)

    def theory(self, epsilons: Sequence[float] = (0.1, 0.2, 0.4), ks: Sequence[float] = (0, 1, 2, 3),
               gammas: Sequence[float] = (0.5, 2.0), a1: Optional[float] = None) -> pd.DataFrame:
        return theory_table(epsilons, ks, gammas, a1)

    def match(self, kinds: Optional[Sequence[str]] = None, variant: str = 'modified',
              epsilons: Sequence[float] = (0.3,), gamma: float = 1.5) -> pd.DataFrame:
        return match_table(kinds, variant, epsilons, self.eta, gamma)

    def validate(self, suites: Optional[List[str]] = None, quick: bool = True) -> List[SuiteResult]:
        """Run the Gaussian validation suites; reduced sizes unless ``quick=False``."""
        return run_suites(self.seed, suites, quick)

    def run(self, out: Union[str, Path] = 'results', **settings: Any) -> List[Dict[str, Any]]:
        """
        Run an experiment; ``settings`` are RunConfig fields

        Example:
            >>> HamsLab(seed=1).run(target='double-well', n_reps=20, epsilon=0.2)
        """
        settings.setdefault('seed', self.seed)
        settings.setdefault('eta', self.eta)
        config = RunConfig(out=str(out), **settings)
        return run_experiment(config)


def sample(target: TargetModel, sampler: str = 'hams-a', epsilon: Optional[float] = None,
           n_draws: int = 5000, seed: int = 0, **kwargs) -> ChainRecord:
    """
    Quick sampling function

    Example:
        >>> from hamslab import sample, GaussianTarget
        >>> record = sample(GaussianTarget(2.0), 'hams-1', epsilon=0.3, n_draws=1000)
    """
    return HamsLab(seed=seed).sample(target, sampler, epsilon, n_draws, **kwargs)


def theory(gammas: Sequence[float] = (0.5, 2.0), a1: Optional[float] = None, **kwargs) -> pd.DataFrame:
    """
    Quick analytic table

    Example:
        >>> from hamslab import theory
        >>> theory(gammas=[2.0], a1=0.2)['var_x'].iloc[0]
        0.5625
    """
    return HamsLab().theory(gammas=gammas, a1=a1, **kwargs)


def validate(seed: int = 0, quick: bool = True) -> bool:
    """True when every Gaussian validation suite passes."""
    return all(r.passed for r in HamsLab(seed=seed).validate(quick=quick))
