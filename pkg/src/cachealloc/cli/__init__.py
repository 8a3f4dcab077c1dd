"""cachealloc CLI powered by Typer."""

import logging

import typer
from rich.logging import RichHandler

from cachealloc.cli import ui
from cachealloc.cli.allocate import allocate
from cachealloc.cli.init import init
from cachealloc.cli.sweep import sweep
from cachealloc.cli.tradeoff import tradeoff
from cachealloc.cli.usp import usp
from cachealloc.cli.validate import validate

app = typer.Typer(
    name="cachealloc",
    help="User success probability and cache allocation for backhaul-limited cached cells.",
    add_completion=False,
    no_args_is_help=True,
)


@app.callback()
def main(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="More logging (-v info, -vv debug)"),
) -> None:
    """User success probability and cache allocation for backhaul-limited cached cells."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=ui.console, show_path=False)],
        force=True,
    )


app.command()(usp)
app.command()(tradeoff)
app.command()(sweep)
app.command()(allocate)
app.command()(validate)
app.command()(init)
