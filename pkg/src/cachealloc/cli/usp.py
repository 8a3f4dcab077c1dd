"""cachealloc usp: USP breakdown of every configured cell."""

from __future__ import annotations

from cachealloc.cli import ui
from cachealloc.cli.common import (
    ConfigOption,
    EpsilonOption,
    OutputOption,
    SeedOption,
    TrialsOption,
    csv_output,
    guard,
    load_scenario,
)
from cachealloc.core.analytic import hit_ratio_approx, usp_approx, usp_exact

HEADER = [
    "cell", "users", "backhaul_mbps", "slots", "cache_files",
    "hit_ratio", "hit_ratio_approx", "p_wireless", "p_backhaul",
    "p_network", "p_user", "p_user_approx",
]


def usp(
    config: ConfigOption = None,
    output: OutputOption = None,
    seed: SeedOption = None,
    trials: TrialsOption = None,
    epsilon: EpsilonOption = None,
) -> None:
    """Exact and approximate user success probability for the configured caches."""
    scenario = load_scenario(config, seed=seed, trials=trials, epsilon=epsilon)
    rows = []
    with guard():
        pop = scenario.build_popularity()
        for index, (cell, cell_cfg) in enumerate(zip(scenario.build_cells(), scenario.cells)):
            exact = usp_exact(cell, pop)
            rows.append([
                index, cell.users, cell_cfg.backhaul_mbps, cell.slots, cell.cache_files,
                exact.hit_ratio, hit_ratio_approx(pop, cell.cache_files), exact.p_wireless,
                exact.p_backhaul, exact.p_network, exact.p_user,
                usp_approx(cell, pop, exact.p_wireless),
            ])

    with csv_output(output) as write:
        write(HEADER)
        for row in rows:
            write(row)

    ui.heading("User success probability", F=pop.library_size, zipf=pop.zipf_exp)
    ui.grid(
        ["Cell", "B", "s", "h", "P^W", "P^N", "P^U", "P^U approx"],
        [[r[0], r[3], r[4], r[5], r[7], r[9], r[10], r[11]] for r in rows],
    )
