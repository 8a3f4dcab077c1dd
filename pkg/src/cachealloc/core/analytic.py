"""Closed-form and quadrature probability computations.

Exact path: Zipf hit ratio, wireless success by adaptive quadrature,
backhaul success as a binomial expectation, and their composition into the
user success probability (USP). Approximate path: the integral form of the
hit ratio, the relaxed network-support bound and the closed-form minimum
cache size derived from them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.stats import binom

from cachealloc.core.model import CellSpec, PopularityModel, RadioParams
from cachealloc.errors import InvalidParameterError, QuadratureError

logger = logging.getLogger(__name__)

QUAD_ABS_TOL = 1e-10
QUAD_REL_TOL = 1e-12
QUAD_LIMIT = 200


@dataclass(frozen=True)
class UspBreakdown:
    p_wireless: float
    p_backhaul: float
    hit_ratio: float
    p_network: float
    p_user: float


@dataclass(frozen=True)
class ClosedFormCache:
    """Approximate minimum cache size.

    ``size`` is clamped into [0, F] when feasible and is ``inf`` when no
    cache can reach the target (theta above the wireless success).
    ``continuity`` marks results that used the logarithmic gamma = 1 form.
    """

    size: float
    feasible: bool
    continuity: bool = False

    def ceil(self) -> int | None:
        if not self.feasible:
            return None
        return math.ceil(self.size - 1e-9)


def _check_probability(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise InvalidParameterError(f"{name} must be in [0, 1], got {value!r}")


def _check_cache(pop: PopularityModel, s: float) -> None:
    if not (0 <= s <= pop.library_size):
        raise InvalidParameterError(
            f"cache size must be in [0, {pop.library_size}], got {s!r}"
        )


def _clamp(value: float, low: float = 0.0, high: float = 1.0) -> float:
    return min(high, max(low, value))


# ── Popularity ───────────────────────────────────────────────────────────────

def zipf_pmf(pop: PopularityModel, rank: int) -> float:
    """Request probability of the file at ``rank`` (1 is most popular)."""
    if not (1 <= rank <= pop.library_size) or int(rank) != rank:
        raise InvalidParameterError(f"rank must be in [1, {pop.library_size}], got {rank!r}")
    return float(pop.weights[int(rank) - 1] / pop.normalizer)


def hit_ratio_exact(pop: PopularityModel, s: int) -> float:
    """Probability a request falls in the ``s`` most popular files."""
    _check_cache(pop, s)
    if int(s) != s:
        raise InvalidParameterError(f"cache size must be an integer, got {s!r}")
    return float(pop.cumulative[int(s)])


def hit_ratio_approx(pop: PopularityModel, s: float) -> float:
    """Integral approximation (s^(1-g) - 1) / (F^(1-g) - 1) of the hit ratio.

    gamma = 1 uses the continuity limit ln(s) / ln(F).
    """
    _check_cache(pop, s)
    if s >= pop.library_size:
        return 1.0
    if s <= 1:
        return 0.0
    exponent = 1.0 - pop.zipf_exp
    log_s, log_f = math.log(s), math.log(pop.library_size)
    if exponent == 0.0:
        return _clamp(log_s / log_f)
    return _clamp(math.expm1(exponent * log_s) / math.expm1(exponent * log_f))


# ── Wireless ─────────────────────────────────────────────────────────────────

def _success_given_distance(t: float, k: float, alpha: float) -> float:
    return math.exp(-k * t**alpha) * t


def wireless_success(radio: RadioParams, users: int) -> float:
    """Probability the downlink rate of a uniformly placed user reaches r0.

    Integrates 2 t exp(-c R^alpha t^alpha) over the normalized radius t in
    [0, 1], which equals (2/R^2) * integral of exp(-c x^alpha) x dx on [0, R].
    """
    c = radio.threshold_coefficient(users)
    if c == 0.0:
        return 1.0
    k = c * radio.radius_m**radio.pathloss_exp
    value, residual, *info = quad(
        _success_given_distance,
        0.0,
        1.0,
        args=(k, radio.pathloss_exp),
        epsabs=QUAD_ABS_TOL,
        epsrel=QUAD_REL_TOL,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    if len(info) > 1 or residual > QUAD_ABS_TOL:
        raise QuadratureError(
            f"wireless success quadrature did not converge for users={users}",
            residual=residual,
            tolerance=QUAD_ABS_TOL,
        )
    logger.debug("wireless quadrature users=%d k=%.6g residual=%.2e", users, k, residual)
    return _clamp(2.0 * value)


def wireless_success_closed_form(radio: RadioParams, users: int) -> float:
    """Exact wireless success for path-loss exponent 2: (1 - e^-k) / k, k = c R^2."""
    if radio.pathloss_exp != 2:
        raise InvalidParameterError(
            f"closed form requires pathloss_exp == 2, got {radio.pathloss_exp!r}"
        )
    k = radio.threshold_coefficient(users) * radio.radius_m**2
    if k == 0.0:
        return 1.0
    return _clamp(-math.expm1(-k) / k)


# ── Backhaul and network support ─────────────────────────────────────────────

def backhaul_success(users: int, slots: int, hit_ratio: float) -> float:
    """Probability the tagged user wins a backhaul slot after a cache miss.

    The other U-1 users miss independently with probability 1-h; with m of
    them contending, the tagged user is served with probability
    min(1, B / (m + 1)).
    """
    if users < 1:
        raise InvalidParameterError(f"users must be >= 1, got {users!r}")
    if slots < 0:
        raise InvalidParameterError(f"slots must be >= 0, got {slots!r}")
    _check_probability("hit_ratio", hit_ratio)
    if slots == 0:
        return 0.0
    if slots >= users:
        return 1.0
    others = users - 1
    if hit_ratio == 1.0:
        return 1.0
    if hit_ratio == 0.0:
        return min(1.0, slots / users)
    m = np.arange(others + 1)
    pmf = binom.pmf(m, others, 1.0 - hit_ratio)
    weight = np.minimum(1.0, slots / (m + 1.0))
    return _clamp(math.fsum(pmf * weight))


def network_support(hit_ratio: float, p_backhaul: float) -> float:
    """P^N = h + (1 - h) P^B."""
    _check_probability("hit_ratio", hit_ratio)
    _check_probability("p_backhaul", p_backhaul)
    return _clamp(hit_ratio + (1.0 - hit_ratio) * p_backhaul)


def network_support_relaxed(hit_ratio: float, slots: int, users: int) -> float:
    """Upper bound min(1, h + (B/U)(1 - h^U)) on the network support."""
    _check_probability("hit_ratio", hit_ratio)
    if users < 1 or slots < 0:
        raise InvalidParameterError(f"need users >= 1 and slots >= 0, got {users!r}, {slots!r}")
    return _clamp(hit_ratio + slots / users * (1.0 - hit_ratio**users))


# ── USP ──────────────────────────────────────────────────────────────────────

def usp_exact(cell: CellSpec, pop: PopularityModel) -> UspBreakdown:
    """Exact user success probability of ``cell`` with its assigned cache."""
    p_wireless = wireless_success(cell.radio, cell.users)
    return compose_usp(cell, pop, p_wireless)


def compose_usp(cell: CellSpec, pop: PopularityModel, p_wireless: float) -> UspBreakdown:
    """USP breakdown for a known wireless success probability."""
    h = hit_ratio_exact(pop, cell.cache_files)
    p_backhaul = backhaul_success(cell.users, cell.slots, h)
    p_network = network_support(h, p_backhaul)
    return UspBreakdown(
        p_wireless=p_wireless,
        p_backhaul=p_backhaul,
        hit_ratio=h,
        p_network=p_network,
        p_user=p_wireless * p_network,
    )


def usp_approx(cell: CellSpec, pop: PopularityModel, p_wireless: float | None = None) -> float:
    """Closed-form USP approximation P^W * min(1, h_approx(s) + B/U).

    Leans towards an upper bound of the exact USP once the cache is large
    enough for the integral hit ratio to overshoot the exact one.
    """
    if p_wireless is None:
        p_wireless = wireless_success(cell.radio, cell.users)
    h = hit_ratio_approx(pop, cell.cache_files)
    return p_wireless * _clamp(h + cell.slots / cell.users)


# ── Minimum cache size ───────────────────────────────────────────────────────

def _target_hit_ratio(
    theta: float, p_wireless: float, slots: int, users: int,
) -> float | None:
    """theta / P^W - B / U, or None when theta exceeds P^W."""
    if not (0.0 <= theta <= 1.0):
        raise InvalidParameterError(f"theta must be in [0, 1], got {theta!r}")
    if not (0.0 < p_wireless <= 1.0):
        raise InvalidParameterError(f"p_wireless must be in (0, 1], got {p_wireless!r}")
    if users < 1 or slots < 0:
        raise InvalidParameterError(f"need users >= 1 and slots >= 0, got {users!r}, {slots!r}")
    if theta > p_wireless:
        return None
    return theta / p_wireless - slots / users


def min_cache_closed_form(
    theta: float,
    p_wireless: float,
    slots: int,
    users: int,
    pop: PopularityModel,
) -> ClosedFormCache:
    """Approximate minimum cache reaching ``theta`` by inverting the closed-form USP.

    s = [y (F^(1-g) - 1) + 1]^(1/(1-g)) with y = theta/P^W - B/U; for
    gamma = 1 the inverse of ln(s)/ln(F), s = F^y.
    """
    y = _target_hit_ratio(theta, p_wireless, slots, users)
    continuity = pop.zipf_exp == 1.0
    if y is None:
        return ClosedFormCache(size=math.inf, feasible=False, continuity=continuity)
    if y <= 0.0:
        return ClosedFormCache(size=0.0, feasible=True, continuity=continuity)
    f = pop.library_size
    log_f = math.log(f)
    exponent = 1.0 - pop.zipf_exp
    if continuity:
        size = math.exp(y * log_f)
    else:
        size = math.exp(math.log1p(y * math.expm1(exponent * log_f)) / exponent)
    clamped = _clamp(size, 0.0, float(f))
    if clamped != size:
        logger.debug("closed-form cache %.6g clamped to %.6g", size, clamped)
    return ClosedFormCache(size=clamped, feasible=True, continuity=continuity)


def min_cache_asymptotic(
    theta: float,
    p_wireless: float,
    slots: int,
    users: int,
    pop: PopularityModel,
) -> ClosedFormCache:
    """Large-library limit of :func:`min_cache_closed_form`.

    gamma > 1: (1 - y)^(1/(1-g)), independent of F.
    gamma < 1: y^(1/(1-g)) * F, linear in F.
    """
    if pop.zipf_exp == 1.0:
        raise InvalidParameterError("no large-library form exists for zipf_exp == 1")
    y = _target_hit_ratio(theta, p_wireless, slots, users)
    if y is None:
        return ClosedFormCache(size=math.inf, feasible=False)
    if y <= 0.0:
        return ClosedFormCache(size=0.0, feasible=True)
    exponent = 1.0 - pop.zipf_exp
    if exponent < 0:
        base = 1.0 - y
        size = math.inf if base <= 0.0 else base ** (1.0 / exponent)
    else:
        size = y ** (1.0 / exponent) * pop.library_size
    return ClosedFormCache(size=_clamp(size, 0.0, float(pop.library_size)), feasible=True)
