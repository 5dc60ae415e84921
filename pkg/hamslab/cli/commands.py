"""
CLI commands for hamslab.
"""

import json
import logging
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional

import click
import pandas as pd

from hamslab.cli.console import console, fail, progress_bar, render_frame, setup_logging
from hamslab.context.targets import save_dataset
from hamslab.errors import HamsError
from hamslab.models import CHAIN_FORMATS, TARGETS, IntegratorKind, Variant
from hamslab.services import (
    ExperimentRunner,
    load_config,
    match_table,
    merge_config,
    run_suites,
    simulate_dataset,
    theory_table,
)
from hamslab.services.config import COX_GRID_M, SV_T_LEN
from hamslab.services.validation import SUITES

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ['sampler', 'epsilon', 'acceptance', 'ess1_min', 'ess1_med', 'ess2_min',
                   'time_seconds', 't_c1_rmse', 't_c2_rmse', 't_k_rmse', 'density_error_rmse']


def verbosity(fn):
    """Add --verbose/--quiet and set up logging before the command runs."""
    @click.option('--verbose', '-v', is_flag=True, help='Debug logging')
    @click.option('--quiet', '-q', is_flag=True, help='No progress bar, errors only')
    @wraps(fn)
    def wrapper(*args, verbose: bool = False, quiet: bool = False, **kwargs):
        setup_logging(verbose, quiet)
        try:
            return fn(*args, quiet=quiet, **kwargs)
        except HamsError as exc:
            logger.debug("command failed", exc_info=True)
            fail(str(exc))
    return wrapper


def parse_epsilon(value: Optional[str]) -> Dict[str, Any]:
    """``auto`` turns on autotuning; anything else is a fixed step size."""
    if value is None:
        return {}
    if value.strip().lower() == 'auto':
        return {'epsilon': None, 'auto_epsilon': True}
    try:
        return {'epsilon': float(value), 'auto_epsilon': False}
    except ValueError:
        raise click.BadParameter(f"expected a number or 'auto', got '{value}'", param_hint='--epsilon')


def _write_table(frame: pd.DataFrame, out: Optional[str], title: str, quiet: bool):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format='%.17g')
        click.echo(f"✓ Wrote {len(frame)} rows to {path}")
    if not quiet:
        render_frame(frame, title)


@click.command()
@click.argument('target', required=False, type=click.Choice(TARGETS))
@click.option('--config', '-c', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='TOML file of run settings; flags override it')
@click.option('--seed', type=int, help='Master seed')
@click.option('--epsilon', help="Step size, or 'auto' to tune toward --target-rate")
@click.option('--eta', type=float, help='Friction')
@click.option('--k', type=int, help='HAMS-k order (restricts --sampler hams to one k)')
@click.option('--sampler', help='Sampler name (hams-a, hams-b, hams-k, hams-<k>, ma-baoab, ma-aboba, ma-bp)')
@click.option('--reps', 'n_reps', type=int, help='Independent repetitions')
@click.option('--draws', 'n_draws', type=int, help='Retained draws per repetition')
@click.option('--burnin', 'n_burn', type=int, help='Burn-in steps per repetition')
@click.option('--out', '-o', help='Output directory (default: results)')
@click.option('--full', is_flag=True, help='Full-scale sizes instead of desk scale')
@click.option('--workers', type=int, help='Worker processes (default: CPU count)')
@click.option('--chains', type=click.Choice(CHAIN_FORMATS), help='Chain output format')
@click.option('--archive', is_flag=True, help='Shorthand for --chains archive')
@click.option('--protocol', type=click.Choice(['langevin', 'spectral']), help='Coefficient protocol')
@click.option('--gamma', type=float, help='Gaussian target precision')
@click.option('--dim', type=int, help='Gaussian target dimension')
@click.option('--t-len', 't_len', type=int, help='SV series length')
@click.option('--grid-m', 'grid_m', type=int, help='Cox grid side')
@click.option('--no-precondition', is_flag=True, help='Sample latent targets without whitening')
@click.option('--target-rate', type=float, help='Autotune acceptance target')
@click.option('--ess-cutoff', type=int, help='Bartlett window cutoff')
@verbosity
def run(target, config_path, epsilon, archive, no_precondition, full, quiet, **flags):
    """
    Run an experiment and write chains plus summary.json under --out.

    Example:
        hams-lab run double-well --reps 50 --draws 5000 --out results/dw
        hams-lab run sv --epsilon auto --sampler hams-a
    """
    file_values = load_config(config_path) if config_path else {}
    flags.update(parse_epsilon(epsilon))
    flags['target'] = target
    if archive:
        flags['chains'] = 'archive'
    if full:
        flags['full'] = True
    if no_precondition:
        flags['precondition'] = False
    config = merge_config(file_values, flags)

    runner = ExperimentRunner(config)
    cfg = runner.config
    click.echo(f"Running {cfg.target}: {len(runner.specs)} samplers, {cfg.n_reps} reps, "
               f"{cfg.n_draws} draws, {cfg.workers} workers")
    with progress_bar(runner.total_tasks(), f"{cfg.target}", quiet) as tick:
        runner.progress = tick
        rows = runner.run()

    if not quiet:
        render_frame(pd.DataFrame(rows), f"{cfg.target} summary", SUMMARY_COLUMNS)
    click.echo(f"✓ Summary written to {runner.out / 'summary.json'}")


@click.command()
@click.option('--epsilon', '-e', 'epsilons', type=float, multiple=True, help='Step sizes (repeatable)')
@click.option('--k', 'ks', type=float, multiple=True, help='HAMS-k orders (repeatable)')
@click.option('--gamma', '-g', 'gammas', type=float, multiple=True, help='Target precisions (repeatable)')
@click.option('--a1', type=float, help='Single HAMS-A row at the spectral optimum for this a1')
@click.option('--out', '-o', help='CSV output path')
@verbosity
def theory(epsilons, ks, gammas, a1, out, quiet):
    """
    Analytic variance, acceptance and spectral radius under N(0, 1/gamma).

    Example:
        hams-lab theory --gamma 2 --a1 0.2
    """
    kwargs: Dict[str, Any] = {'a1': a1}
    if epsilons:
        kwargs['epsilons'] = epsilons
    if ks:
        kwargs['ks'] = ks
    if gammas:
        kwargs['gammas'] = gammas
    _write_table(theory_table(**kwargs), out, "theory", quiet)


@click.command()
@click.option('--kind', 'kinds', type=click.Choice([k.value for k in IntegratorKind]),
              multiple=True, help='Integrators to match (default: all)')
@click.option('--variant', type=click.Choice([v.value for v in Variant]), default='modified',
              show_default=True)
@click.option('--epsilon', '-e', 'epsilons', type=float, multiple=True, help='Step sizes (default: 0.3)')
@click.option('--eta', type=float, default=1.0, show_default=True)
@click.option('--gamma', '-g', type=float, default=1.5, show_default=True)
@click.option('--out', '-o', help='CSV output path')
@verbosity
def match(kinds, variant, epsilons, eta, gamma, out, quiet):
    """
    Check that Langevin integrators coincide with their HAMS counterparts.

    Example:
        hams-lab match --kind bp --epsilon 0.3
    """
    frame = match_table(kinds or None, variant, epsilons or (0.3,), eta, gamma)
    _write_table(frame, out, f"matching ({variant})", quiet)


@click.command(name='gaussian-validate')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--suite', 'suites', type=click.Choice(list(SUITES)), multiple=True,
              help='Suites to run (default: all)')
@click.option('--quick', is_flag=True, help='Reduced sample sizes')
@click.option('--out', '-o', help='JSON report path')
@verbosity
def gaussian_validate(seed, suites, quick, out, quiet):
    """
    Monte Carlo checks against the Gaussian closed forms; exits 1 on failure.

    Example:
        hams-lab gaussian-validate --seed 7 --quick
    """
    results = run_suites(seed, list(suites) or None, quick)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as f:
            json.dump([r.to_dict() for r in results], f, indent=2, default=float)
    for result in results:
        status = "[green]PASS[/green]" if result.passed else "[bold red]FAIL[/bold red]"
        if not quiet:
            console.print(f"{status} {result.name}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        fail(f"suites failed: {', '.join(failed)}")
    click.echo(f"✓ {len(results)} suites passed")


@click.command()
@click.argument('target', type=click.Choice(['sv', 'cox']))
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--size', type=int, help='T_len for sv, grid side m for cox')
@click.option('--full', is_flag=True, help='Full-scale size when --size is omitted')
@click.option('--out', '-o', help='CSV path (default: data/<target>.csv)')
@verbosity
def simulate(target, seed, size, full, out, quiet):
    """
    Write a synthetic dataset as CSV with columns index, x_true, y.

    Example:
        hams-lab simulate sv --size 1000 -o data/sv.csv
    """
    if size is None:
        size = (SV_T_LEN if target == 'sv' else COX_GRID_M)['full' if full else 'desk']
    x_true, y = simulate_dataset(target, size, seed)
    path = save_dataset(out or Path('data') / f"{target}.csv", x_true, y)
    click.echo(f"✓ Wrote {len(y)} observations to {path}")
