"""cachealloc tradeoff: minimum cache size versus backhaul capacity."""

from __future__ import annotations

import logging

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
from cachealloc.core.analytic import min_cache_closed_form
from cachealloc.core.model import CellSpec
from cachealloc.core.optimizer import UspCurve

logger = logging.getLogger(__name__)

HEADER = [
    "theta", "backhaul_mbps", "slots", "min_cache_exact", "min_cache_closed_form", "continuity",
]


def tradeoff(
    config: ConfigOption = None,
    output: OutputOption = None,
    seed: SeedOption = None,
    trials: TrialsOption = None,
    epsilon: EpsilonOption = None,
    workers: WorkersOption = None,
) -> None:
    """Exact and closed-form minimum cache for each (theta, backhaul) pair."""
    scenario = load_scenario(config, seed=seed, trials=trials, epsilon=epsilon, workers=workers)
    study = scenario.tradeoff
    thetas = sorted(study.thetas)
    backhauls = sorted(study.backhaul_mbps)

    with guard():
        pop = scenario.build_popularity()
        radio = scenario.build_radio()

        def column(mbps: float) -> list[list]:
            curve = UspCurve(CellSpec(radio=radio, users=study.users, backhaul_bps=mbps * 1e6), pop)
            slots = curve.cell.slots
            rows = []
            for theta in thetas:
                approx = min_cache_closed_form(theta, curve.p_wireless, slots, study.users, pop)
                rows.append([theta, mbps, slots, curve.min_cache(theta), approx.size, approx.continuity])
            return rows

        with ui.working(f"Solving {len(thetas) * len(backhauls)} grid points"):
            columns = grid_map(column, backhauls, scenario.simulation.workers)

    rows = [columns[j][i] for i in range(len(thetas)) for j in range(len(backhauls))]
    with csv_output(output) as write:
        write(HEADER)
        for row in rows:
            write(row)

    feasible = [row for row in rows if row[3] is not None]
    ui.heading("Minimum cache versus backhaul", U=study.users, F=pop.library_size, zipf=pop.zipf_exp)
    ui.grid(
        ["theta"] + [f"{b:g} Mbps" for b in backhauls],
        [[f"{theta:g}"] + [columns[j][i][3] for j in range(len(backhauls))] for i, theta in enumerate(thetas)],
    )
    logger.info("tradeoff: %d of %d points feasible", len(feasible), len(rows))
    if rows and not feasible:
        ui.warning("No theta in the grid is reachable.")
        raise typer.Exit(EXIT_INFEASIBLE)
