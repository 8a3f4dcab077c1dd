"""cachealloc sweep: required cache size versus library size or Zipf exponent."""

from __future__ import annotations

import logging
from enum import Enum

import typer

from cachealloc.cli import ui
from cachealloc.cli.common import (
    EXIT_INFEASIBLE,
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
from cachealloc.core.analytic import min_cache_asymptotic, min_cache_closed_form
from cachealloc.core.model import CellSpec, PopularityModel
from cachealloc.core.optimizer import UspCurve

logger = logging.getLogger(__name__)

HEADER = [
    "zipf_exp", "library_size", "theta",
    "min_cache", "min_cache_closed_form", "min_cache_asymptotic", "continuity",
]


class SweepAxis(str, Enum):
    files = "files"
    gamma = "gamma"


def sweep(
    axis: SweepAxis = typer.Argument(..., help="Sweep the library size (files) or the Zipf exponent (gamma)"),
    config: ConfigOption = None,
    output: OutputOption = None,
    seed: SeedOption = None,
    trials: TrialsOption = None,
    epsilon: EpsilonOption = None,
    workers: WorkersOption = None,
) -> None:
    """Minimum cache reaching the sweep theta along one popularity axis."""
    scenario = load_scenario(config, seed=seed, trials=trials, epsilon=epsilon, workers=workers)
    study = scenario.sweep

    if axis is SweepAxis.files:
        points = [(g, f) for g in study.zipf_exps for f in sorted(study.library_sizes)]
    else:
        points = [(g, scenario.popularity.library_size) for g in sorted(study.zipf_grid)]

    with guard():
        cell = CellSpec(
            radio=scenario.build_radio(),
            users=study.users,
            backhaul_bps=study.backhaul_mbps * 1e6,
        )

        def solve(point: tuple[float, int]) -> list:
            zipf_exp, library_size = point
            pop = PopularityModel(library_size=library_size, zipf_exp=zipf_exp)
            curve = UspCurve(cell, pop)
            args = (study.theta, curve.p_wireless, cell.slots, cell.users, pop)
            approx = min_cache_closed_form(*args)
            asymptotic = "n/a" if approx.continuity else min_cache_asymptotic(*args).size
            return [
                zipf_exp, library_size, study.theta, curve.min_cache(study.theta),
                approx.size, asymptotic, approx.continuity,
            ]

        with ui.working(f"Sweeping {len(points)} points along {axis.value}"):
            rows = grid_map(solve, points, scenario.simulation.workers)

    with csv_output(output) as write:
        write(HEADER)
        for row in rows:
            write(row)

    ui.heading(f"Minimum cache along {axis.value}", theta=study.theta, U=study.users, backhaul_mbps=study.backhaul_mbps)
    ui.grid(["zipf", "F", "s exact", "s closed form"], [[f"{r[0]:g}", r[1], r[3], r[4]] for r in rows])
    if rows and all(row[3] is None for row in rows):
        ui.warning(f"theta={study.theta} is not reachable at any sweep point.")
        raise typer.Exit(EXIT_INFEASIBLE)
    logger.info("sweep %s: %d points", axis.value, len(rows))
