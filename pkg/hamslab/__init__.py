"""
hamslab - Hamiltonian-assisted Metropolis sampling

Irreversible HAMS kernels with generalized Metropolis acceptance, the
Metropolis-adjusted Langevin integrators they generalize, closed-form
Gaussian oracles, preconditioning, ESS and thermometry diagnostics, and
the `hams-lab` benchmark CLI.

Quick Start (High-level API):
    >>> from hamslab import HamsLab, GaussianTarget
    >>> lab = HamsLab(seed=1)
    >>> record = lab.sample(GaussianTarget(2.0, dim=3), 'hams-a', epsilon=0.5)
    >>> ess = lab.ess(record)

Advanced Usage (Low-level components):
    >>> from hamslab import HamsKernel, hams_a_coeffs, make_rng
    >>> kernel = HamsKernel(target, hams_a_coeffs(0.2, 1.0))
    >>> result = kernel.step(state, make_rng(0, 0))

MCP Architecture:
- Models: Pure data structures (PhaseState, HamsCoeffs, ChainRecord, RunConfig)
- Protocols: Interface contracts (TargetModel, Kernel)
- Context: Algorithms (HAMS, Langevin integrators, oracles, diagnostics)
- Services: Orchestration (sampler factory, autotune, ExperimentRunner)
- CLI: User interface (run, theory, match, gaussian-validate, simulate)
"""

__version__ = "0.3.0"
__author__ = "Adam Bouafia"
__license__ = "MIT"

# High-level API
from hamslab.api import HamsLab, sample, theory, validate

# Core MCP layers
from hamslab import models, protocols
from hamslab.context import (
    CoxModel,
    DoubleWellTarget,
    GaussianTarget,
    HamsKernel,
    IntegratorKernel,
    MetropolizedKernel,
    ShiftedHamsKernel,
    SvModel,
    WhitenedTarget,
)
from hamslab.context.core import make_rng
from hamslab.context.hams import hams_a_coeffs, hams_b_coeffs, hams_k_coeffs
from hamslab.errors import HamsError
from hamslab.models import ChainRecord, HamsCoeffs, PhaseState, RunConfig
from hamslab.services import ExperimentRunner, build_kernel, run_chain, run_chains

__all__ = [
    # High-level API
    'HamsLab',
    'sample',
    'theory',
    'validate',

    # Kernels and targets
    'HamsKernel',
    'ShiftedHamsKernel',
    'MetropolizedKernel',
    'IntegratorKernel',
    'GaussianTarget',
    'DoubleWellTarget',
    'SvModel',
    'CoxModel',
    'WhitenedTarget',
    'hams_a_coeffs',
    'hams_b_coeffs',
    'hams_k_coeffs',
    'make_rng',

    # Services
    'ExperimentRunner',
    'build_kernel',
    'run_chain',
    'run_chains',

    # Data structures
    'PhaseState',
    'HamsCoeffs',
    'ChainRecord',
    'RunConfig',
    'HamsError',

    # MCP Architecture
    'models',
    'protocols',
]
