"""cachealloc allocate: max-min cache budget allocation against the uniform split."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Annotated, Optional

import typer

from cachealloc.cli import ui
from cachealloc.cli.common import (
    ConfigOption,
    EpsilonOption,
    OutputOption,
    SeedOption,
    TrialsOption,
    WorkersOption,
    csv_output,
    grid_map,
    guard,
    load_scenario,
)
from cachealloc.core.model import AllocationResult, PopularityModel
from cachealloc.core.optimizer import AllocationProblem, allocate as allocate_maxmin, uniform_allocate

logger = logging.getLogger(__name__)

HEADER = ["zipf_exp", "library_size", "budget", "scheme", "min_usp", "total_used", "saturated"]
CELLS_HEADER = ["zipf_exp", "library_size", "budget", "cell", "backhaul_mbps", "cache_files"]

SCHEMES = {"maxmin": allocate_maxmin, "uniform": uniform_allocate}


def _cells_path(output: Path | None, cells_output: Path | None) -> Path | None:
    if cells_output is not None:
        return cells_output
    if output is not None:
        return output.with_name(f"{output.stem}.cells.csv")
    return None


def allocate(
    config: ConfigOption = None,
    output: OutputOption = None,
    cells_output: Annotated[
        Optional[Path],
        typer.Option("--cells-output", help="Per-cell allocation CSV (default: <output>.cells.csv)"),
    ] = None,
    seed: SeedOption = None,
    trials: TrialsOption = None,
    epsilon: EpsilonOption = None,
    workers: WorkersOption = None,
) -> None:
    """Minimum USP of max-min and uniform allocations over the budget grid."""
    scenario = load_scenario(config, seed=seed, trials=trials, epsilon=epsilon, workers=workers)
    study = scenario.allocate
    budgets = sorted(study.budgets)
    pairs = [(g, f) for g in study.zipf_exps for f in study.library_sizes]

    with guard():
        cells = tuple(scenario.build_cells())

        def solve(point: tuple[float, int, int]) -> dict[str, AllocationResult]:
            zipf_exp, library_size, budget = point
            problem = AllocationProblem(
                cells=cells,
                pop=PopularityModel(library_size=library_size, zipf_exp=zipf_exp),
                budget_files=budget,
                epsilon=study.epsilon,
            )
            return {name: scheme(problem) for name, scheme in SCHEMES.items()}

        points = [(g, f, c0) for g, f in pairs for c0 in budgets]
        with ui.working(f"Allocating {len(points)} budgets over {len(cells)} cells"):
            results = grid_map(solve, points, scenario.simulation.workers)

    with csv_output(output) as write:
        write(HEADER)
        for (zipf_exp, library_size, budget), by_scheme in zip(points, results):
            for name, result in by_scheme.items():
                write([
                    zipf_exp, library_size, budget, name,
                    result.achieved_rho, result.total_used, result.saturated,
                ])

    cell_rows = [
        [zipf_exp, library_size, budget, index, scenario.cells[index].backhaul_mbps, size]
        for (zipf_exp, library_size, budget), by_scheme in zip(points, results)
        for index, size in enumerate(by_scheme["maxmin"].cache_files)
    ]
    target = _cells_path(output, cells_output)
    if target is not None:
        with csv_output(target) as write:
            write(CELLS_HEADER)
            for row in cell_rows:
                write(row)
        ui.info(f"Per-cell allocations written to {target}")

    for zipf_exp, library_size in pairs:
        ui.heading("Max-min allocation", zipf=zipf_exp, F=library_size, cells=len(cells))
        rows = []
        for (g, f, budget), by_scheme in zip(points, results):
            if (g, f) != (zipf_exp, library_size):
                continue
            maxmin = by_scheme["maxmin"]
            row = [budget, maxmin.achieved_rho, by_scheme["uniform"].achieved_rho]
            if target is None:
                row.append(" ".join(str(s) for s in maxmin.cache_files))
            rows.append(row)
        headers = ["C0", "max-min", "uniform"] + ([] if target is not None else ["cache per cell"])
        ui.grid(headers, rows)
    logger.info("allocate: %d budgets x %d popularity settings", len(budgets), len(pairs))
