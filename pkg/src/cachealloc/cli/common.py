"""Options, scenario loading, CSV output and exit codes shared by the commands."""

from __future__ import annotations

import csv
import logging
import math
import sys
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, Optional, TypeVar

import typer

from cachealloc.cli import ui
from cachealloc.core.config import ScenarioConfig
from cachealloc.errors import CacheAllocError, InvalidParameterError, ScenarioError

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION = 4

INFEASIBLE = "infeasible"

T = TypeVar("T")
R = TypeVar("R")

ConfigOption = Annotated[
    Optional[Path],
    typer.Option("--config", "-c", help="Scenario file (JSON or YAML); defaults to the built-in scenario"),
]
OutputOption = Annotated[
    Optional[Path],
    typer.Option("--output", "-o", help="CSV destination (default: stdout)"),
]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Monte Carlo seed (u64)", min=0)]
TrialsOption = Annotated[Optional[int], typer.Option("--trials", help="Monte Carlo trials", min=1)]
EpsilonOption = Annotated[Optional[float], typer.Option("--epsilon", help="Bisection tolerance on rho")]
WorkersOption = Annotated[Optional[int], typer.Option("--workers", help="Worker threads", min=1)]


def load_scenario(
    config: Path | None,
    *,
    seed: int | None = None,
    trials: int | None = None,
    epsilon: float | None = None,
    workers: int | None = None,
) -> ScenarioConfig:
    """Load the scenario and apply flag overrides, exiting with code 2 on errors."""
    try:
        scenario = ScenarioConfig.load(config).with_overrides(
            seed=seed, trials=trials, epsilon=epsilon, workers=workers,
        )
    except ScenarioError as exc:
        ui.error(f"Invalid scenario {exc.source}")
        for location, message in exc.problems:
            ui.error(f"{location}: {message}")
        raise typer.Exit(EXIT_CONFIG)
    logger.info("loaded scenario %s", config or "<built-in>")
    return scenario


@contextmanager
def guard() -> Iterator[None]:
    """Turn library errors into diagnostics and exit codes."""
    try:
        yield
    except InvalidParameterError as exc:
        ui.error(str(exc))
        raise typer.Exit(EXIT_CONFIG)
    except CacheAllocError as exc:
        ui.error(str(exc))
        raise typer.Exit(EXIT_FAILURE)


def fmt(value: Any) -> str:
    """Locale-independent CSV cell; None and inf become the infeasible marker."""
    if value is None:
        return INFEASIBLE
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return INFEASIBLE
        return format(value, ".12g")
    return str(value)


@contextmanager
def csv_output(path: Path | None) -> Iterator[Callable[[Iterable[Any]], None]]:
    """Yield a row writer targeting ``path`` or stdout."""
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        yield lambda row: writer.writerow([fmt(v) for v in row])
        sys.stdout.flush()
        return
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        yield lambda row: writer.writerow([fmt(v) for v in row])
    logger.info("wrote %s", path)


def grid_map(fn: Callable[[T], R], points: Iterable[T], workers: int = 1) -> list[R]:
    """Evaluate grid points, possibly in parallel, keeping grid order."""
    points = list(points)
    if workers <= 1 or len(points) <= 1:
        return [fn(point) for point in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))
