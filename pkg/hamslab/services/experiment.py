"""
ExperimentRunner: repetitions, worker pool and summaries.

Double-well runs batch all repetitions of one (sampler, eps) cell into a
single lockstep chain array; latent-model and Gaussian runs execute one
repetition per task with its own random stream.
"""

import json
import logging
import time
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from hamslab.context.core import make_rng
from hamslab.context.diagnostics.thermometry import MIN_SAMPLES
from hamslab.context.diagnostics import (
    density_bin_error,
    ess_bartlett_columns,
    ess_multichain,
    rmse_over_reps,
    supports_temperatures,
    temperatures,
)
from hamslab.context.precondition import WhitenedTarget, build_whitener_from_precision, whiten
from hamslab.context.targets import (
    CoxModel,
    DoubleWellTarget,
    GaussianTarget,
    SvModel,
    preconditioner_precision,
    simulate_cox,
    simulate_sv,
)
from hamslab.errors import DegenerateBetween, InvalidParams, ZeroVariance
from hamslab.models import ChainRecord, PhaseState, Protocol, RunConfig, SamplerSpec
from hamslab.protocols import TargetModel
from hamslab.services.autotune import autotune_epsilon
from hamslab.services.chain_runner import run_chain, run_chains
from hamslab.services.chain_store import ChainStore
from hamslab.services.config import epsilon_grid, resolve
from hamslab.services.samplers import DEFAULT_PROTOCOL, build_kernel, resolve_samplers

logger = logging.getLogger(__name__)

# stream id reserved for simulated datasets; chain streams are sampler indices
DATA_STREAM = 2 ** 32 + 1
CELL_STREAM_BASE = 1000

SV_PARAMS = {'beta': 0.65, 'sigma': 0.15, 'varphi': 0.98}
COX_PARAMS = {'sigma2': 1.91, 'beta': 1 / 33, 'mu': float(np.log(126) - 0.955)}
ADAPT_FRACTION = 0.8

Progress = Callable[[int], None]


def simulate_dataset(target: str, size: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Synthetic (x_true, y) for 'sv' (size = T_len) or 'cox' (size = grid side m)."""
    rng = make_rng(seed, DATA_STREAM)
    if target == 'sv':
        return simulate_sv(size, SV_PARAMS['beta'], SV_PARAMS['sigma'], SV_PARAMS['varphi'], rng)
    if target == 'cox':
        return simulate_cox(size, COX_PARAMS['sigma2'], COX_PARAMS['beta'], COX_PARAMS['mu'], rng)
    raise InvalidParams(f"no simulator for target '{target}'")


def build_target(config: RunConfig) -> Tuple[TargetModel, Optional[np.ndarray]]:
    """
    Target model of a resolved config and the precision used for whitening.

    Returns:
        (model, precision) where precision is None when the run is not preconditioned
    """
    if config.target == 'double-well':
        return DoubleWellTarget(), None
    if config.target == 'gaussian':
        model = GaussianTarget(config.gamma, config.dim)
        precision = config.gamma * np.eye(config.dim)
    elif config.target == 'sv':
        _, y = simulate_dataset('sv', config.t_len, config.seed)
        model = SvModel(y, **SV_PARAMS)
        precision = preconditioner_precision(model)
    else:
        _, y = simulate_dataset('cox', config.grid_m, config.seed)
        model = CoxModel(y, config.grid_m, **COX_PARAMS)
        precision = preconditioner_precision(model)
    return model, precision if config.precondition else None


def _safe(fn, *args):
    try:
        return fn(*args)
    except (ZeroVariance, DegenerateBetween) as exc:
        logger.warning("diagnostic unavailable: %s", exc)
        return None


def ess_summary(records: List[ChainRecord], cutoff: int, seconds: float) -> Dict[str, float]:
    """ESS1 averaged over repetitions per coordinate, then min/median/max across coordinates."""
    per_rep = [_safe(ess_bartlett_columns, r.draws, cutoff) for r in records]
    row: Dict[str, float] = {}
    if all(e is not None for e in per_rep):
        ess1 = np.mean(np.stack(per_rep), axis=0)
        row.update(ess1_min=float(np.min(ess1)), ess1_med=float(np.median(ess1)),
                   ess1_max=float(np.max(ess1)))
        row['ess1_min_per_second'] = row['ess1_min'] / seconds if seconds > 0 else float('nan')
    else:
        row.update(ess1_min=float('nan'), ess1_med=float('nan'), ess1_max=float('nan'),
                   ess1_min_per_second=float('nan'))
    if len(records) >= 2:
        ess2 = _safe(ess_multichain, np.stack([r.draws for r in records]))
        row['ess2_min'] = float(np.min(ess2)) if ess2 is not None else float('nan')
    return row


def chain_temperatures(records: List[ChainRecord], model: TargetModel) -> Dict[str, float]:
    """Repetition means of T_C1, T_C2 and T_K on a univariate target."""
    xs = np.stack([r.draws[:, 0] for r in records])
    us = np.stack([r.momenta[:, 0] for r in records])
    t_c1, t_c2, t_k = temperatures(xs, us, model)
    return {'t_c1': float(np.mean(t_c1)), 't_c2': float(np.mean(t_c2)), 't_k': float(np.mean(t_k))}


# Worker side

_WORKER: Dict[str, Any] = {}


def _init_worker(model: TargetModel, precision: Optional[np.ndarray]):
    _WORKER['model'] = model
    _WORKER['L'] = None if precision is None else build_whitener_from_precision(precision)


@dataclass
class RepTask:
    """One repetition of one sampler on the worker's model."""
    label: str
    stream: int
    rep: int
    seed: int
    epsilon: Optional[float]
    eta: float
    protocol: str
    n_burn: int
    n_draws: int
    target_rate: float
    out_dir: Optional[str] = None


def run_rep(task: RepTask) -> ChainRecord:
    """Tune (if asked), burn in and sample one repetition; draws come back in original coordinates."""
    model, L = _WORKER['model'], _WORKER['L']
    rng = make_rng(task.seed + task.rep, task.stream)
    target = whiten(model, L) if L is not None else model
    x0 = rng.standard_normal(model.dim)
    u0 = rng.standard_normal(model.dim)
    if isinstance(target, WhitenedTarget):
        x0 = target.to_whitened(x0)
    state = PhaseState(x0, u0)
    spec = SamplerSpec.parse(task.label)

    def make(eps: float):
        return build_kernel(spec, target, eps, task.eta, task.protocol)

    start = time.perf_counter()
    burn = task.n_burn
    epsilon = task.epsilon
    if epsilon is None:
        if task.n_burn < 10:
            raise InvalidParams("autotuning needs n_burn >= 10")
        n_adapt = int(ADAPT_FRACTION * task.n_burn)
        tuned = autotune_epsilon(make, state, rng, task.target_rate, n_adapt, task.n_burn - n_adapt)
        epsilon, state, burn = tuned.epsilon, tuned.state, 0
    emit = target.to_original if isinstance(target, WhitenedTarget) else None
    record = run_chain(make(epsilon), state, burn, task.n_draws, rng, emit, epsilon=epsilon)
    record.elapsed = time.perf_counter() - start
    if task.out_dir:
        ChainStore(task.out_dir).save_csv(task.label, task.rep, record)
    return record


@dataclass
class CellTask:
    """All repetitions of one (sampler, eps) double-well cell."""
    label: str
    stream: int
    seed: int
    epsilon: float
    eta: float
    n_reps: int
    n_burn: int
    n_draws: int
    ess_cutoff: int
    archive_path: Optional[str] = None
    csv_root: Optional[str] = None


def run_cell(task: CellTask) -> Dict[str, Any]:
    """Run a batched double-well cell and reduce it to a summary row."""
    target = DoubleWellTarget()
    rng = make_rng(task.seed, task.stream)
    initial = PhaseState(rng.uniform(-1, 1, (task.n_reps, 1)), rng.uniform(-1, 1, (task.n_reps, 1)))
    kernel = build_kernel(task.label, target, task.epsilon, task.eta, Protocol.LANGEVIN)
    records = run_chains(kernel, initial, task.n_burn, task.n_draws, rng, epsilon=task.epsilon)
    if task.archive_path:
        ChainStore(Path(task.archive_path).parent).save_archive(
            task.archive_path, records, {'sampler': task.label, 'epsilon': task.epsilon, 'seed': task.seed})
    if task.csv_root:
        store = ChainStore(task.csv_root)
        for rep, record in enumerate(records):
            store.save_csv(task.label, rep, record, group=f"eps_{task.epsilon:g}")

    xs = np.stack([r.draws[:, 0] for r in records])
    us = np.stack([r.momenta[:, 0] for r in records])
    t_c1, t_c2, t_k = temperatures(xs, us, target)
    if task.n_draws >= MIN_SAMPLES:
        density = density_bin_error(xs, target)
    else:
        density = np.full(task.n_reps, np.nan)
    seconds = records[0].elapsed / task.n_reps
    row = {
        'sampler': task.label,
        'epsilon': task.epsilon,
        'acceptance': float(np.mean([r.acceptance_rate for r in records])),
        't_c1': float(np.mean(t_c1)),
        't_c2': float(np.mean(t_c2)),
        't_k': float(np.mean(t_k)),
        'density_error': float(np.mean(density)),
        't_c1_rmse': rmse_over_reps(t_c1, 1.0),
        't_c2_rmse': rmse_over_reps(t_c2, 1.0),
        't_k_rmse': rmse_over_reps(t_k, 1.0),
        'density_error_rmse': rmse_over_reps(density, 0.0),
        'time_seconds': seconds,
    }
    row.update(ess_summary(records, task.ess_cutoff, seconds))
    return row


class ExperimentRunner:
    """
    Runs every sampler of a config and writes chains plus summaries under ``out``.

    Example:
        >>> runner = ExperimentRunner(RunConfig(target='sv', n_reps=2))
        >>> rows = runner.run()
    """

    def __init__(self, config: RunConfig, progress: Optional[Progress] = None):
        self.config = resolve(config)
        self.progress = progress
        self.out = Path(self.config.out)
        self.store = ChainStore(self.out)
        self.specs = resolve_samplers(self.config.sampler, self.config.k)
        protocol = self.config.protocol
        self.protocol = Protocol(protocol) if protocol else DEFAULT_PROTOCOL[self.config.target]

    @property
    def chain_format(self) -> str:
        if self.config.chains != 'auto':
            return self.config.chains
        return 'archive' if self.config.target == 'double-well' else 'csv'

    def total_tasks(self) -> int:
        if self.config.target == 'double-well':
            return len(self.specs) * len(epsilon_grid(self.config) or [None])
        return len(self.specs) * self.config.n_reps

    def _map(self, fn, tasks: List[Any], initargs: Tuple = ()) -> List[Any]:
        workers = min(self.config.workers, max(len(tasks), 1))
        results = []
        if workers <= 1:
            if initargs:
                _init_worker(*initargs)
            for task in tasks:
                results.append(fn(task))
                self._tick()
            return results
        with Pool(workers, initializer=_init_worker if initargs else None,
                  initargs=initargs) as pool:
            for result in pool.imap(fn, tasks):
                results.append(result)
                self._tick()
        return results

    def _tick(self):
        if self.progress is not None:
            self.progress(1)

    def run(self) -> List[Dict[str, Any]]:
        """Run the experiment; returns the summary rows also written to summary.json."""
        self.out.mkdir(parents=True, exist_ok=True)
        logger.info("running %s with %d samplers into %s", self.config.target,
                    len(self.specs), self.out)
        if self.config.target == 'double-well':
            rows = self._run_double_well()
        else:
            rows = self._run_latent()
        self._write_summary(rows)
        return rows

    def _run_double_well(self) -> List[Dict[str, Any]]:
        cfg = self.config
        grid = epsilon_grid(cfg)
        if grid is None:
            raise InvalidParams("the double well sweeps fixed step sizes; autotuning is not supported")
        tasks = []
        for i, spec in enumerate(self.specs):
            for j, eps in enumerate(grid):
                archive = csv_root = None
                if self.chain_format == 'archive':
                    archive = str(self.out / spec.label / f"eps_{eps:g}.hamz")
                elif self.chain_format == 'csv':
                    csv_root = str(self.out)
                tasks.append(CellTask(spec.label, CELL_STREAM_BASE * i + j, cfg.seed, eps, cfg.eta,
                                      cfg.n_reps, cfg.n_burn, cfg.n_draws, cfg.ess_cutoff,
                                      archive, csv_root))
        return self._map(run_cell, tasks)

    def _run_latent(self) -> List[Dict[str, Any]]:
        cfg = self.config
        model, precision = build_target(cfg)
        grid = epsilon_grid(cfg)
        epsilon = grid[0] if grid else None
        tasks = []
        for i, spec in enumerate(self.specs):
            for rep in range(cfg.n_reps):
                out_dir = str(self.out) if self.chain_format == 'csv' else None
                tasks.append(RepTask(spec.label, i, rep, cfg.seed, epsilon, cfg.eta,
                                     self.protocol.value, cfg.n_burn, cfg.n_draws,
                                     cfg.target_rate, out_dir))
        records = self._map(run_rep, tasks, (model, precision))

        rows, means = [], []
        for i, spec in enumerate(self.specs):
            chunk = records[i * cfg.n_reps:(i + 1) * cfg.n_reps]
            if self.chain_format == 'archive':
                self.store.save_archive(self.out / f"{spec.label}.hamz", chunk,
                                        {'sampler': spec.label, 'seed': cfg.seed})
            seconds = float(np.mean([r.elapsed for r in chunk]))
            row = {
                'sampler': spec.label,
                'epsilon': float(np.mean([r.epsilon for r in chunk])),
                'acceptance': float(np.mean([r.acceptance_rate for r in chunk])),
                'time_seconds': seconds,
            }
            row.update(ess_summary(chunk, cfg.ess_cutoff, seconds))
            if supports_temperatures(model):
                row.update(chain_temperatures(chunk, model))
            rows.append(row)
            means.append(sample_means(spec.label, chunk))
        pd.concat(means).to_csv(self.out / 'means.csv', index=False, float_format='%.10g')
        return rows

    def _write_summary(self, rows: List[Dict[str, Any]]):
        payload = {'target': self.config.target, 'seed': self.config.seed,
                   'protocol': self.protocol.value, 'rows': rows}
        with open(self.out / 'summary.json', 'w') as f:
            json.dump(payload, f, indent=2, sort_keys=True)
        pd.DataFrame(rows).to_csv(self.out / 'summary.csv', index=False, float_format='%.10g')
        logger.info("wrote %d summary rows to %s", len(rows), self.out / 'summary.json')


def sample_means(label: str, records: List[ChainRecord]) -> pd.DataFrame:
    """Per-coordinate mean of the repetition means and their variance across repetitions."""
    rep_means = np.stack([r.draws.mean(axis=0) for r in records])
    spread = rep_means.var(axis=0, ddof=1) if len(records) >= 2 else np.full(rep_means.shape[1], np.nan)
    return pd.DataFrame({
        'sampler': label,
        'coordinate': np.arange(1, rep_means.shape[1] + 1),
        'mean': rep_means.mean(axis=0),
        'var_across_reps': spread,
    })


def run_experiment(config: RunConfig, progress: Optional[Progress] = None) -> List[Dict[str, Any]]:
    """Convenience wrapper around ExperimentRunner."""
    return ExperimentRunner(config, progress).run()
