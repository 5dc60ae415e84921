"""
CLI interface for hamslab.
"""

from hamslab.cli.commands import gaussian_validate, match, run, simulate, theory

__all__ = ['run', 'theory', 'match', 'gaussian_validate', 'simulate']
