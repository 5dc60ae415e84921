"""
Services layer - experiment orchestration.
"""

from hamslab.services.samplers import build_kernel, hams_coeffs, roster, resolve_samplers
from hamslab.services.chain_runner import advance, run_chain, run_chains
from hamslab.services.autotune import StepSizeAdapter, TuneResult, autotune_epsilon
from hamslab.services.chain_store import ChainStore, chain_frame, read_chain_csv, write_chain_csv
from hamslab.services.config import epsilon_grid, load_config, merge_config, resolve
from hamslab.services.experiment import (
    ExperimentRunner,
    build_target,
    run_experiment,
    simulate_dataset,
)
from hamslab.services.theory import match_table, theory_table
from hamslab.services.validation import SuiteResult, run_suites

__all__ = [
    'build_kernel',
    'hams_coeffs',
    'roster',
    'resolve_samplers',
    'advance',
    'run_chain',
    'run_chains',
    'StepSizeAdapter',
    'TuneResult',
    'autotune_epsilon',
    'ChainStore',
    'chain_frame',
    'read_chain_csv',
    'write_chain_csv',
    'epsilon_grid',
    'load_config',
    'merge_config',
    'resolve',
    'ExperimentRunner',
    'build_target',
    'run_experiment',
    'simulate_dataset',
    'match_table',
    'theory_table',
    'SuiteResult',
    'run_suites',
]
