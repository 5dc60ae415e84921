"""
Model-agnostic evaluation, preconditioners and dataset files.
"""

from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from hamslab.context.core.linalg import spd_inverse
from hamslab.context.targets.cox import CoxModel
from hamslab.context.targets.stochastic_volatility import SvModel
from hamslab.errors import InvalidParams, NonFinite, Unsupported
from hamslab.protocols import TargetModel


def evaluate(model: TargetModel, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Potential and gradient at x with dimension and finiteness checks.

    Raises:
        InvalidParams: trailing dimension differs from model.dim
        NonFinite: U or its gradient overflowed
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.dim:
        raise InvalidParams(f"x has {x.shape[-1]} coordinates, model expects {model.dim}")
    with np.errstate(over='ignore', invalid='ignore'):
        potential, grad = model.evaluate(x)
    if not (np.all(np.isfinite(potential)) and np.all(np.isfinite(grad))):
        raise NonFinite(f"{model!r} produced a non-finite potential or gradient")
    return potential, grad


def preconditioner_precision(model: TargetModel) -> np.ndarray:
    """
    Inverse of the preconditioning matrix, i.e. the expected Hessian of U.

    SV: C^{-1} + I/2 built from the tridiagonal bands.
    Cox: C^{-1} + diag(exp(sigma2/2 + mu)) / n.
    """
    if isinstance(model, SvModel):
        return model.dense_precision() + 0.5 * np.eye(model.dim)
    if isinstance(model, CoxModel):
        expected = np.exp(model.sigma2 / 2 + model.mu) / model.n
        return model.precision + expected * np.eye(model.dim)
    raise Unsupported(f"no preconditioner defined for {type(model).__name__}; use the identity")


def preconditioner_matrix(model: TargetModel) -> np.ndarray:
    """The symmetric positive-definite preconditioner Sigma-hat."""
    return spd_inverse(preconditioner_precision(model))


def save_dataset(path: Union[str, Path], x_true: np.ndarray, y: np.ndarray) -> Path:
    """Write a simulated dataset as CSV with columns index, x_true, y."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({'index': np.arange(len(y)), 'x_true': x_true, 'y': y})
    frame.to_csv(path, index=False, float_format='%.17g')
    return path


def load_dataset(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    frame = pd.read_csv(path)
    missing = {'index', 'x_true', 'y'} - set(frame.columns)
    if missing:
        raise InvalidParams(f"dataset {path} lacks columns {sorted(missing)}")
    frame = frame.sort_values('index')
    return frame['x_true'].to_numpy(dtype=float), frame['y'].to_numpy(dtype=float)
