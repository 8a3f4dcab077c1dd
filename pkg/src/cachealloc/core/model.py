"""Domain types and unit conversions shared by every other module.

All quantities are SI internally: noise is configured in dBm and converted
to watts once, cache sizes are counted in whole files and backhaul capacity
in r0-rate slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from cachealloc.errors import InvalidParameterError


def dbm_to_watts(p: float) -> float:
    """Convert a power level in dBm to watts."""
    if not math.isfinite(p):
        raise InvalidParameterError(f"power must be finite, got {p!r} dBm")
    return 10.0 ** ((p - 30.0) / 10.0)


def normalized_backhaul(c_b: float, r0: float) -> int:
    """Number of r0-rate users the backhaul can carry at once, floor(c_B / r0)."""
    if not r0 > 0:
        raise InvalidParameterError(f"rate_target_bps must be > 0, got {r0!r}")
    if not c_b >= 0:
        raise InvalidParameterError(f"backhaul_bps must be >= 0, got {c_b!r}")
    return math.floor(c_b / r0)


def normalized_cache(cache_bits: float, file_length_bits: float) -> int:
    """Number of whole files a cache of ``cache_bits`` can hold."""
    if not file_length_bits > 0:
        raise InvalidParameterError(f"file_length_bits must be > 0, got {file_length_bits!r}")
    if not cache_bits >= 0:
        raise InvalidParameterError(f"cache_bits must be >= 0, got {cache_bits!r}")
    return math.floor(cache_bits / file_length_bits)


@dataclass(frozen=True)
class RadioParams:
    """Physical-layer constants of one cell."""

    radius_m: float = 20.0
    pathloss_exp: float = 4.0
    noise_dbm: float = -102.0
    bandwidth_hz: float = 10e6
    tx_power_w: float = 1.0
    rate_target_bps: float = 2e6
    noise_w: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name in ("radius_m", "bandwidth_hz", "tx_power_w", "rate_target_bps"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be a finite value > 0, got {value!r}")
        if not (math.isfinite(self.pathloss_exp) and self.pathloss_exp >= 2):
            raise InvalidParameterError(f"pathloss_exp must be >= 2, got {self.pathloss_exp!r}")
        noise_w = dbm_to_watts(self.noise_dbm)
        if not noise_w > 0:
            raise InvalidParameterError(f"noise_dbm={self.noise_dbm!r} underflows to zero watts")
        object.__setattr__(self, "noise_w", noise_w)

    def threshold_coefficient(self, users: int) -> float:
        """c = B0 * sigma^2 * (2^(r0 U / B0) - 1) / (P_t U).

        P[rate >= r0 | distance x] = exp(-c x^alpha) under unit-mean
        exponential channel power.
        """
        if users < 1:
            raise InvalidParameterError(f"users must be >= 1, got {users!r}")
        snr_target = math.expm1(self.rate_target_bps * users / self.bandwidth_hz * math.log(2.0))
        return self.bandwidth_hz * self.noise_w * snr_target / (self.tx_power_w * users)


@dataclass(frozen=True)
class PopularityModel:
    """Zipf popularity over a library of ``library_size`` equal-length files."""

    library_size: int
    zipf_exp: float

    def __post_init__(self) -> None:
        if isinstance(self.library_size, bool) or int(self.library_size) != self.library_size:
            raise InvalidParameterError(f"library_size must be an integer, got {self.library_size!r}")
        if self.library_size < 1:
            raise InvalidParameterError(f"library_size must be >= 1, got {self.library_size!r}")
        if not (math.isfinite(self.zipf_exp) and self.zipf_exp >= 0):
            raise InvalidParameterError(f"zipf_exp must be >= 0, got {self.zipf_exp!r}")

    @cached_property
    def weights(self) -> np.ndarray:
        """Unnormalized weights rank^-gamma for ranks 1..F."""
        ranks = np.arange(1, self.library_size + 1, dtype=np.float64)
        return ranks ** (-self.zipf_exp)

    @cached_property
    def normalizer(self) -> float:
        """Sum of rank^-gamma over the whole library."""
        return math.fsum(self.weights)

    @cached_property
    def cumulative(self) -> np.ndarray:
        """Hit ratio for every cache size: ``cumulative[s]`` for s in 0..F."""
        partial = np.concatenate(([0.0], np.cumsum(self.weights))) / self.normalizer
        partial[-1] = 1.0
        return partial

    def pmf(self) -> np.ndarray:
        return self.weights / self.normalizer

    def with_library_size(self, library_size: int) -> PopularityModel:
        return replace(self, library_size=library_size)

    def with_zipf_exp(self, zipf_exp: float) -> PopularityModel:
        return replace(self, zipf_exp=zipf_exp)


@dataclass(frozen=True)
class CellSpec:
    """One cell: radio constants, user count, backhaul and assigned cache."""

    radio: RadioParams
    users: int
    backhaul_bps: float = 0.0
    cache_files: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.users, bool) or int(self.users) != self.users or self.users < 1:
            raise InvalidParameterError(f"users must be an integer >= 1, got {self.users!r}")
        if not (math.isfinite(self.backhaul_bps) and self.backhaul_bps >= 0):
            raise InvalidParameterError(f"backhaul_bps must be >= 0, got {self.backhaul_bps!r}")
        if int(self.cache_files) != self.cache_files or self.cache_files < 0:
            raise InvalidParameterError(
                f"cache_files must be a nonnegative integer, got {self.cache_files!r}"
            )

    @property
    def slots(self) -> int:
        """Normalized backhaul B = floor(c_B / r0)."""
        return normalized_backhaul(self.backhaul_bps, self.radio.rate_target_bps)

    def with_cache(self, cache_files: int) -> CellSpec:
        return replace(self, cache_files=cache_files)

    def with_backhaul(self, backhaul_bps: float) -> CellSpec:
        return replace(self, backhaul_bps=backhaul_bps)


@dataclass(frozen=True)
class AllocationResult:
    """Outcome of a cache budget allocation across cells.

    ``achieved_rho`` is always the exact minimum USP at ``cache_files``,
    never a bisection midpoint.
    """

    cache_files: tuple[int, ...]
    achieved_rho: float
    total_used: int
    saturated: bool
    budget: int
    p_user: tuple[float, ...] = ()
    evaluations: int = 0

    @property
    def leftover(self) -> int:
        return self.budget - self.total_used


@dataclass(frozen=True)
class TrialEstimate:
    """Bernoulli Monte Carlo estimate."""

    mean: float
    std_err: float
    trials: int
    seed: int

    @classmethod
    def from_counts(cls, successes: int, trials: int, seed: int) -> TrialEstimate:
        if trials < 1:
            raise InvalidParameterError(f"trials must be >= 1, got {trials!r}")
        mean = successes / trials
        return cls(
            mean=mean,
            std_err=math.sqrt(mean * (1.0 - mean) / trials),
            trials=trials,
            seed=seed,
        )

    def z_score(self, expected: float) -> float:
        """Standardized error (mean - expected) / std_err.

        Zero when both sides agree exactly; infinite when the estimate is
        degenerate (std_err 0) but disagrees with ``expected``.
        """
        delta = self.mean - expected
        if self.std_err == 0.0:
            return 0.0 if abs(delta) <= 1e-12 else math.copysign(math.inf, delta)
        return delta / self.std_err
