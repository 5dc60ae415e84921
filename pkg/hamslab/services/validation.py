"""
Gaussian validation suites behind ``hams-lab gaussian-validate``.

Each suite checks one exact property of HAMS under Gaussian targets and
reports pass/fail with the measured numbers.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from hamslab.context.analytic import expected_acceptance, stationary_variance_closed
from hamslab.context.core import make_rng
from hamslab.context.hams import (
    HamsKernel,
    forward_map,
    hams_a_coeffs,
    hams_a_spectral,
    hams_b_coeffs,
    hams_k_coeffs,
    propose,
)
from hamslab.context.targets import DoubleWellTarget, GaussianTarget
from hamslab.models import HamsCoeffs, NoisePair, PhaseState

logger = logging.getLogger(__name__)

REJECTION_FREE_TOL = 1e-9
INVOLUTION_TOL = 1e-12
ACCEPTANCE_TOL = 0.005
SE_MULTIPLE = 4.0


@dataclass
class SuiteResult:
    """Outcome of one validation suite."""
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _presets(epsilon: float) -> Dict[str, HamsCoeffs]:
    presets = {'hams-a': hams_a_coeffs(epsilon, eta2=1.0), 'hams-b': hams_b_coeffs(epsilon, eta1=1.0)}
    for k in (1, 2, 3):
        presets[f'hams-{k}'] = hams_k_coeffs(epsilon, k, eta2=1.0)
    return presets


def rejection_free(seed: int, n_steps: int = 10_000, dim: int = 5, n_chains: int = 10) -> SuiteResult:
    """Delta G vanishes for every preset under N(0, I)."""
    target = GaussianTarget(1.0, dim)
    rng = make_rng(seed, 1)
    worst = 0.0
    steps = max(1, n_steps // n_chains)
    for epsilon in (0.1, 0.5, 0.9):
        for coeffs in _presets(epsilon).values():
            kernel = HamsKernel(target, coeffs)
            state = kernel.prepare(PhaseState(rng.standard_normal((n_chains, dim)),
                                              rng.standard_normal((n_chains, dim))))
            for _ in range(steps):
                result = kernel.step(state, rng)
                worst = max(worst, float(np.max(np.abs(result.delta_g))))
                state = result.state
    return SuiteResult('rejection-free', worst <= REJECTION_FREE_TOL, {'max_abs_delta_g': worst})


def involution(seed: int, n_cases: int = 1000) -> SuiteResult:
    """Mapping (x*, -u*) with noise -Z* returns (x0, -u0)."""
    rng = make_rng(seed, 2)
    target = DoubleWellTarget()
    worst = 0.0
    for case in range(n_cases):
        epsilon = rng.uniform(0.05, 0.95)
        coeffs = hams_k_coeffs(epsilon, rng.uniform(0, 3), eta2=rng.uniform(0, 2))
        if case % 2:
            coeffs = HamsCoeffs(coeffs.a1, coeffs.a2, coeffs.a3, rng.uniform(0, 1))
        state = PhaseState(rng.uniform(-1.5, 1.5, 1), rng.standard_normal(1))
        noise = NoisePair(rng.standard_normal(1), rng.standard_normal(1))
        proposed, backward = forward_map(target, state, coeffs, noise)
        back, _ = forward_map(target, proposed.flipped(), coeffs, -backward)
        scale = 1.0 + float(np.max(np.abs(np.concatenate([state.x, state.u]))))
        gap = max(float(np.max(np.abs(back.x - state.x))), float(np.max(np.abs(back.u + state.u))))
        worst = max(worst, gap / scale)
    return SuiteResult('involution', worst <= INVOLUTION_TOL, {'max_relative_gap': worst})


def stationary_variance(seed: int, n_steps: int = 1_000_000, n_chains: int = 200,
                        gamma: float = 2.0) -> SuiteResult:
    """The proposal-only chain with a1 = 0.2 has Var(x) = (a1 - 2)/(gamma (a1 gamma - 2))."""
    coeffs = hams_a_spectral(0.6)
    target = GaussianTarget(gamma)
    kernel = HamsKernel(target, coeffs, metropolize=False)
    rng = make_rng(seed, 3)
    truth = stationary_variance_closed(coeffs.a1, gamma)
    state = kernel.prepare(PhaseState(rng.standard_normal((n_chains, 1)) * np.sqrt(truth),
                                      rng.standard_normal((n_chains, 1))))
    steps = max(2, n_steps // n_chains)
    sq = np.empty((steps, n_chains))
    for t in range(steps):
        state = kernel.step(state, rng).state
        sq[t] = state.x[:, 0] ** 2
    per_chain = sq.mean(axis=0)
    estimate = float(per_chain.mean())
    se = float(per_chain.std(ddof=1) / np.sqrt(n_chains))
    passed = abs(estimate - truth) <= SE_MULTIPLE * se
    return SuiteResult('stationary-variance', passed,
                       {'a1': coeffs.a1, 'estimate': estimate, 'truth': truth, 'se': se})


def acceptance_identity(seed: int, n_steps: int = 1_000_000, n_chains: int = 500,
                        gamma: float = 2.0) -> SuiteResult:
    """Stationary Metropolized HAMS accepts at 1 - (2/pi) arctan(sqrt(E[dG]/2))."""
    target = GaussianTarget(gamma)
    rng = make_rng(seed, 4)
    rows = []
    passed = True
    for a1 in (0.2, 0.5, 1.0):
        epsilon = float(np.sqrt(1 - (1 - a1) ** 2))
        kernel = HamsKernel(target, hams_a_spectral(epsilon))
        state = kernel.prepare(PhaseState(rng.standard_normal((n_chains, 1)) / np.sqrt(gamma),
                                          rng.standard_normal((n_chains, 1))))
        steps = max(1, n_steps // n_chains)
        total = 0.0
        for _ in range(steps):
            result = kernel.step(state, rng)
            total += float(np.mean(result.accepted))
            state = result.state
        empirical = total / steps
        expected = expected_acceptance(a1, gamma)
        ok = abs(empirical - expected) <= ACCEPTANCE_TOL
        passed = passed and ok
        rows.append({'a1': a1, 'empirical': empirical, 'expected': expected, 'passed': ok})
    return SuiteResult('acceptance-identity', passed, {'cases': rows})


def one_step_acceptance(seed: int, n_draws: int = 200_000, gamma: float = 2.0) -> SuiteResult:
    """Single proposals from the stationary law average min(1, exp(-dG)) to the closed form."""
    rng = make_rng(seed, 5)
    coeffs = hams_a_spectral(0.6)
    target = GaussianTarget(gamma)
    state = PhaseState(rng.standard_normal((n_draws, 1)) / np.sqrt(gamma),
                       rng.standard_normal((n_draws, 1)))
    delta_g = propose(target, state, coeffs, rng).delta_g
    alpha = np.exp(np.minimum(-delta_g, 0.0))
    estimate = float(alpha.mean())
    se = float(alpha.std(ddof=1) / np.sqrt(n_draws))
    expected = expected_acceptance(coeffs.a1, gamma)
    return SuiteResult('one-step-acceptance', abs(estimate - expected) <= max(SE_MULTIPLE * se, 1e-3),
                       {'estimate': estimate, 'expected': expected, 'se': se})


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    'rejection-free': rejection_free,
    'involution': involution,
    'stationary-variance': stationary_variance,
    'acceptance-identity': acceptance_identity,
    'one-step-acceptance': one_step_acceptance,
}

# reduced sizes for --quick runs
QUICK = {
    'rejection-free': {'n_steps': 1000},
    'involution': {'n_cases': 200},
    'stationary-variance': {'n_steps': 200_000},
    'acceptance-identity': {'n_steps': 300_000},
    'one-step-acceptance': {'n_draws': 50_000},
}


def run_suites(seed: int = 0, names: Optional[List[str]] = None, quick: bool = False) -> List[SuiteResult]:
    """Run the named suites (all by default) and log each outcome."""
    results = []
    for name in names or list(SUITES):
        kwargs = QUICK.get(name, {}) if quick else {}
        result = SUITES[name](seed, **kwargs)
        logger.info("suite %s: %s", name, "passed" if result.passed else "FAILED")
        results.append(result)
    return results
