"""
Run configuration: TOML files, flag overrides and desk-scale defaults.
"""

import logging
import os
import tomllib
from dataclasses import fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from hamslab.errors import InvalidParams
from hamslab.models import RunConfig

logger = logging.getLogger(__name__)

DOUBLE_WELL_GRID = tuple(round(0.04 * i, 2) for i in range(1, 9))

# (n_reps, n_burn, n_draws) at desk scale and with --full
SCALE = {
    'double-well': {'desk': (200, 0, 10_000), 'full': (3000, 0, 10_000)},
    'sv': {'desk': (20, 5000, 5000), 'full': (50, 5000, 5000)},
    'cox': {'desk': (20, 5000, 5000), 'full': (50, 5000, 5000)},
    'gaussian': {'desk': (20, 1000, 5000), 'full': (50, 5000, 5000)},
}
SV_T_LEN = {'desk': 200, 'full': 1000}
COX_GRID_M = {'desk': 16, 'full': 64}


def config_keys() -> List[str]:
    return [f.name for f in fields(RunConfig)]


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read flat ``key = value`` pairs from a TOML file.

    The special value ``epsilon = "auto"`` turns on autotuning.

    Raises:
        InvalidParams: unreadable file, nested tables or unknown keys
    """
    path = Path(path)
    try:
        with open(path, 'rb') as f:
            data = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise InvalidParams(f"cannot read config {path}: {exc}") from exc

    known = set(config_keys())
    unknown = sorted(set(data) - known)
    if unknown:
        raise InvalidParams(f"unknown config keys {unknown} in {path}")
    for key, value in data.items():
        if isinstance(value, dict):
            raise InvalidParams(f"config key '{key}' must be a plain value, not a table")
    if data.get('epsilon') == 'auto':
        data['epsilon'] = None
        data['auto_epsilon'] = True
    logger.debug("loaded %d keys from %s", len(data), path)
    return data


def merge_config(file_values: Dict[str, Any], flags: Dict[str, Any]) -> RunConfig:
    """File values first, then every flag that was actually given."""
    merged = dict(file_values)
    merged.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig(**merged)


def resolve(config: RunConfig) -> RunConfig:
    """Fill every ``None`` size field with the target's default scale."""
    scale = 'full' if config.full else 'desk'
    n_reps, n_burn, n_draws = SCALE[config.target][scale]
    updates: Dict[str, Any] = {}
    for name, default in (('n_reps', n_reps), ('n_burn', n_burn), ('n_draws', n_draws)):
        if getattr(config, name) is None:
            updates[name] = default
    if config.target == 'sv' and config.t_len is None:
        updates['t_len'] = SV_T_LEN[scale]
    if config.target == 'cox' and config.grid_m is None:
        updates['grid_m'] = COX_GRID_M[scale]
    if config.workers is None:
        updates['workers'] = os.cpu_count() or 1
    return replace(config, **updates)


def epsilon_grid(config: RunConfig) -> Optional[List[float]]:
    """
    Step sizes to sweep, or None when eps is autotuned.

    The double well sweeps 0.04..0.32 unless eps is fixed; the other
    targets tune eps unless it is fixed.
    """
    if config.epsilon is not None:
        return [config.epsilon]
    if config.target == 'double-well' and not config.auto_epsilon:
        return list(DOUBLE_WELL_GRID)
    return None
