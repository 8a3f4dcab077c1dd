"""cachealloc init: write the built-in scenario to a file."""

from __future__ import annotations

from pathlib import Path

import typer

from cachealloc.cli import ui
from cachealloc.cli.common import EXIT_FAILURE
from cachealloc.core.config import ScenarioConfig


def init(
    path: Path = typer.Argument(Path("scenario.json"), help="Where to write the scenario"),
) -> None:
    """Write the default scenario (reference radio, six cells, all study grids) as JSON."""
    if path.exists():
        ui.error(f"{path} already exists")
        raise typer.Exit(EXIT_FAILURE)

    ScenarioConfig().save(path)
    ui.success(f"Scenario written to {path}")
    ui.plain()
    ui.info(f"Edit it, then run: cachealloc usp --config {path}")
