"""cachealloc: user success probability and cache allocation in cached cellular networks."""

from cachealloc.core.analytic import (
    backhaul_success,
    hit_ratio_approx,
    hit_ratio_exact,
    min_cache_closed_form,
    usp_approx,
    usp_exact,
    wireless_success,
)
from cachealloc.core.config import ScenarioConfig
from cachealloc.core.model import AllocationResult, CellSpec, PopularityModel, RadioParams
from cachealloc.core.optimizer import AllocationProblem, allocate, min_cache_bisection, uniform_allocate
from cachealloc.core.simulator import SimConfig, simulate_backhaul, simulate_usp, simulate_wireless
from cachealloc.errors import CacheAllocError, InvalidParameterError

__all__ = [
    "RadioParams",
    "PopularityModel",
    "CellSpec",
    "AllocationResult",
    "AllocationProblem",
    "ScenarioConfig",
    "SimConfig",
    "hit_ratio_exact",
    "hit_ratio_approx",
    "wireless_success",
    "backhaul_success",
    "usp_exact",
    "usp_approx",
    "min_cache_closed_form",
    "min_cache_bisection",
    "allocate",
    "uniform_allocate",
    "simulate_wireless",
    "simulate_backhaul",
    "simulate_usp",
    "CacheAllocError",
    "InvalidParameterError",
]
