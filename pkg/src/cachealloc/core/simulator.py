"""Seeded Monte Carlo oracle for the analytic probabilities.

Trials are split into fixed-size blocks; block ``i`` draws from its own
Philox stream keyed by ``(seed, i)``. Block boundaries do not depend on the
worker count, so serial and threaded runs produce identical estimates.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from cachealloc.core.analytic import hit_ratio_exact
from cachealloc.core.model import CellSpec, PopularityModel, RadioParams, TrialEstimate
from cachealloc.errors import InvalidParameterError

logger = logging.getLogger(__name__)

BLOCK_TRIALS = 8192
# Upper bound on contention keys materialized at once (rows x users).
CONTENTION_CHUNK = 1 << 20
_LN2 = math.log(2.0)

Kernel = Callable[[np.random.Generator, int], int]


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidParameterError(f"trials must be an integer >= 1, got {self.trials!r}")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.workers < 1:
            raise InvalidParameterError(f"workers must be >= 1, got {self.workers!r}")


def block_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, BLOCK_TRIALS)
    return [BLOCK_TRIALS] * full + ([rest] if rest else [])


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Independent generator for one block of trials."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(sequence))


def _run(sim: SimConfig, kernel: Kernel, label: str) -> TrialEstimate:
    sizes = block_sizes(sim.trials)

    def task(block: int) -> int:
        return int(kernel(block_rng(sim.seed, block), sizes[block]))

    if sim.workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=sim.workers) as pool:
            counts = list(pool.map(task, range(len(sizes))))
    else:
        counts = [task(block) for block in range(len(sizes))]

    estimate = TrialEstimate.from_counts(sum(counts), sim.trials, sim.seed)
    logger.debug(
        "%s: %d trials in %d blocks (workers=%d) -> %.6f +/- %.2e",
        label, sim.trials, len(sizes), sim.workers, estimate.mean, estimate.std_err,
    )
    return estimate


# ── Samplers ─────────────────────────────────────────────────────────────────

def sample_distances(rng: np.random.Generator, radius: float, n: int) -> np.ndarray:
    """Distances with density 2x/R^2 on [0, R] by inverse CDF."""
    return radius * np.sqrt(rng.random(n))


def sample_channel_gains(rng: np.random.Generator, n: int) -> np.ndarray:
    """Unit-mean exponential channel power (Rayleigh amplitude)."""
    return rng.standard_exponential(n)


def sample_ranks(rng: np.random.Generator, pop: PopularityModel, n: int) -> np.ndarray:
    """Requested file ranks (1-based) drawn from the Zipf popularity."""
    return np.searchsorted(pop.cumulative, rng.random(n), side="right")


def wireless_outcomes(rng: np.random.Generator, radio: RadioParams, users: int, n: int) -> np.ndarray:
    """Whether the downlink rate of each trial's user reaches r0."""
    x = sample_distances(rng, radio.radius_m, n)
    g = sample_channel_gains(rng, n)
    share = radio.bandwidth_hz / users
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        snr = radio.tx_power_w * g * x ** (-radio.pathloss_exp) / (share * radio.noise_w)
        rate = share * np.log1p(snr) / _LN2
    return rate >= radio.rate_target_bps


def contention_outcomes(
    rng: np.random.Generator, users: int, slots: int, competitors: np.ndarray,
) -> np.ndarray:
    """Whether the tagged user is among the ``slots`` winners.

    Each contender gets a uniform random key and the ``slots`` smallest keys
    win, i.e. winners are drawn uniformly without replacement. Column 0 is
    the tagged user; columns 1..m its competitors in that trial.
    """
    n = competitors.shape[0]
    if slots == 0:
        return np.zeros(n, dtype=bool)
    if slots >= users:
        return np.ones(n, dtype=bool)
    granted = np.empty(n, dtype=bool)
    rows = max(1, CONTENTION_CHUNK // users)
    column = np.arange(users)
    for start in range(0, n, rows):
        m = competitors[start:start + rows]
        keys = rng.random((m.shape[0], users))
        keys = np.where(column[None, :] <= m[:, None], keys, np.inf)
        ahead = (keys[:, 1:] < keys[:, :1]).sum(axis=1)
        granted[start:start + rows] = ahead < slots
    return granted


# ── Estimators ───────────────────────────────────────────────────────────────

def simulate_wireless(radio: RadioParams, users: int, sim: SimConfig) -> TrialEstimate:
    """Monte Carlo estimate of the wireless success probability."""
    if users < 1:
        raise InvalidParameterError(f"users must be >= 1, got {users!r}")

    def kernel(rng: np.random.Generator, n: int) -> int:
        return np.count_nonzero(wireless_outcomes(rng, radio, users, n))

    return _run(sim, kernel, "wireless")


def simulate_backhaul(users: int, slots: int, hit_ratio: float, sim: SimConfig) -> TrialEstimate:
    """Monte Carlo estimate of the backhaul success probability."""
    if users < 1 or slots < 0:
        raise InvalidParameterError(f"need users >= 1 and slots >= 0, got {users!r}, {slots!r}")
    if not (0.0 <= hit_ratio <= 1.0):
        raise InvalidParameterError(f"hit_ratio must be in [0, 1], got {hit_ratio!r}")

    def kernel(rng: np.random.Generator, n: int) -> int:
        competitors = rng.binomial(users - 1, 1.0 - hit_ratio, n)
        return np.count_nonzero(contention_outcomes(rng, users, slots, competitors))

    return _run(sim, kernel, "backhaul")


def simulate_usp(cell: CellSpec, pop: PopularityModel, sim: SimConfig) -> TrialEstimate:
    """Monte Carlo estimate of the user success probability.

    Position and fading are drawn first, exactly as in
    :func:`simulate_wireless`, so both estimators share their wireless
    outcomes for the same seed.
    """
    h = hit_ratio_exact(pop, cell.cache_files)
    slots = cell.slots

    def kernel(rng: np.random.Generator, n: int) -> int:
        wireless = wireless_outcomes(rng, cell.radio, cell.users, n)
        hit = sample_ranks(rng, pop, n) <= cell.cache_files
        competitors = rng.binomial(cell.users - 1, 1.0 - h, n)
        granted = contention_outcomes(rng, cell.users, slots, competitors)
        return np.count_nonzero(wireless & (hit | granted))

    return _run(sim, kernel, "usp")
