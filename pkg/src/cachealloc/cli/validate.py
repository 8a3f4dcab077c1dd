"""cachealloc validate: analytic probabilities against the Monte Carlo oracle."""

from __future__ import annotations

import logging
import math

import typer

from cachealloc.cli import ui
from cachealloc.cli.common import (
    EXIT_VALIDATION,
    ConfigOption,
    EpsilonOption,
    OutputOption,
    SeedOption,
    TrialsOption,
    WorkersOption,
    csv_output,
    guard,
    load_scenario,
)
from cachealloc.core.analytic import backhaul_success, hit_ratio_exact, usp_exact
from cachealloc.core.model import TrialEstimate
from cachealloc.core.simulator import SimConfig, simulate_backhaul, simulate_usp, simulate_wireless

logger = logging.getLogger(__name__)

HEADER = ["quantity", "analytic", "empirical", "std_err", "z"]

Z_LIMIT = 4.0

# Two users, one slot, even hit ratio: 0.25 * 1 + 0.5 * 1 + 0.25 * 0.5.
REFERENCE_BACKHAUL = (2, 1, 0.5)


def validate(
    config: ConfigOption = None,
    output: OutputOption = None,
    seed: SeedOption = None,
    trials: TrialsOption = None,
    epsilon: EpsilonOption = None,
    workers: WorkersOption = None,
) -> None:
    """Compare every cell's analytic USP factors with seeded simulations."""
    scenario = load_scenario(config, seed=seed, trials=trials, epsilon=epsilon, workers=workers)
    settings = scenario.simulation
    rows: list[tuple[str, float, TrialEstimate]] = []

    with guard():
        sim = SimConfig(trials=settings.trials, seed=settings.seed, workers=settings.workers)
        pop = scenario.build_popularity()
        cells = scenario.build_cells()
        with ui.working(f"Simulating {len(cells)} cells, {sim.trials} trials each"):
            for index, cell in enumerate(cells):
                exact = usp_exact(cell, pop)
                h = hit_ratio_exact(pop, cell.cache_files)
                rows.append((f"cell{index}.wireless", exact.p_wireless,
                             simulate_wireless(cell.radio, cell.users, sim)))
                rows.append((f"cell{index}.backhaul", exact.p_backhaul,
                             simulate_backhaul(cell.users, cell.slots, h, sim)))
                rows.append((f"cell{index}.usp", exact.p_user, simulate_usp(cell, pop, sim)))
            users, slots, h = REFERENCE_BACKHAUL
            rows.append((f"backhaul.U{users}.B{slots}.h{h:g}", backhaul_success(users, slots, h),
                         simulate_backhaul(users, slots, h, sim)))

    table = [
        (name, analytic, estimate.mean, estimate.std_err, estimate.z_score(analytic))
        for name, analytic, estimate in rows
    ]
    with csv_output(output) as write:
        write(HEADER)
        for name, analytic, mean, std_err, z in table:
            write([name, analytic, mean, std_err, z if math.isfinite(z) else str(z)])

    ui.heading("Analytic versus Monte Carlo", trials=sim.trials, seed=sim.seed)
    ui.grid(
        ["Quantity", "Analytic", "Empirical", "Std err", "z"],
        [[name, a, e, f"{s:.1e}", ui.zscore(z, Z_LIMIT)] for name, a, e, s, z in table],
    )
    failures = [name for name, *_, z in table if abs(z) > Z_LIMIT]
    if failures:
        for name in failures:
            ui.error(f"{name} deviates by more than {Z_LIMIT:g} standard errors")
        raise typer.Exit(EXIT_VALIDATION)
    ui.success(f"All {len(table)} quantities within {Z_LIMIT:g} standard errors")
    logger.info("validate: %d quantities checked", len(table))
