"""
Target densities and synthetic-data simulators.
"""

from hamslab.context.targets.gaussian import GaussianTarget, DoubleWellTarget
from hamslab.context.targets.stochastic_volatility import SvModel, simulate_sv, ar1_precision_bands
from hamslab.context.targets.cox import CoxModel, simulate_cox, grid_covariance
from hamslab.context.targets.evaluation import (
    evaluate,
    preconditioner_matrix,
    preconditioner_precision,
    save_dataset,
    load_dataset,
)

__all__ = [
    'GaussianTarget',
    'DoubleWellTarget',
    'SvModel',
    'CoxModel',
    'simulate_sv',
    'simulate_cox',
    'ar1_precision_bands',
    'grid_covariance',
    'evaluate',
    'preconditioner_matrix',
    'preconditioner_precision',
    'save_dataset',
    'load_dataset',
]
