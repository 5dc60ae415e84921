"""
Entry point for python -m hamslab
"""

import click
from hamslab import __version__
from hamslab.cli import gaussian_validate, match, run, simulate, theory

@click.group()
@click.version_option(version=__version__)
def cli():
    """hams-lab - Hamiltonian-assisted Metropolis sampling toolkit"""
    pass

cli.add_command(run)
cli.add_command(theory)
cli.add_command(match)
cli.add_command(gaussian_validate)
cli.add_command(simulate)

if __name__ == '__main__':
    cli()
