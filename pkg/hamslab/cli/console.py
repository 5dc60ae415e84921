"""
Rich console helpers: logging handler, tables, progress and error exit.
"""

import logging
import math
import sys
from contextlib import contextmanager
from typing import Callable, Iterator, List, Optional

import pandas as pd
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

console = Console()
err_console = Console(stderr=True)


def setup_logging(verbose: bool = False, quiet: bool = False):
    """Attach a RichHandler to the ``hamslab`` logger."""
    logger = logging.getLogger('hamslab')
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    handler = RichHandler(console=err_console, show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    if verbose:
        logger.setLevel(logging.DEBUG)
    elif quiet:
        logger.setLevel(logging.ERROR)
    else:
        logger.setLevel(logging.WARNING)
    logger.propagate = False


def fail(message: str, code: int = 1):
    err_console.print(f"[bold red]Error:[/bold red] {message}")
    sys.exit(code)


def _cell(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "-"
        return f"{value:.6g}"
    if value is None:
        return "-"
    return str(value)


def render_frame(frame: pd.DataFrame, title: str, columns: Optional[List[str]] = None):
    """Print a DataFrame as a rich table."""
    columns = [c for c in (columns or list(frame.columns)) if c in frame.columns]
    table = Table(title=title, show_header=True, header_style="bold cyan")
    for name in columns:
        table.add_column(name, justify="left" if frame[name].dtype == object else "right")
    for _, row in frame[columns].iterrows():
        table.add_row(*(_cell(row[name]) for name in columns))
    console.print(table)


@contextmanager
def progress_bar(total: int, description: str, quiet: bool = False) -> Iterator[Optional[Callable[[int], None]]]:
    """Yield an ``advance(n)`` callback, or None when quiet."""
    if quiet:
        yield None
        return
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(complete_style="green", finished_style="bold green"),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        console=err_console,
    ) as progress:
        task = progress.add_task(f"[cyan]{description}", total=total)
        yield lambda n=1: progress.update(task, advance=n)
