"""Tests for the domain types and unit conversions."""

import math

import pytest

from cachealloc.core.model import (
    AllocationResult,
    CellSpec,
    PopularityModel,
    RadioParams,
    TrialEstimate,
    dbm_to_watts,
    normalized_backhaul,
    normalized_cache,
)
from cachealloc.errors import InvalidParameterError


def test_dbm_to_watts():
    assert dbm_to_watts(30) == pytest.approx(1.0)
    assert dbm_to_watts(0) == pytest.approx(1e-3)
    assert dbm_to_watts(-102) == pytest.approx(6.3096e-14, rel=1e-4)


@pytest.mark.parametrize("value", [math.inf, -math.inf, math.nan])
def test_dbm_to_watts_rejects_non_finite(value):
    with pytest.raises(InvalidParameterError):
        dbm_to_watts(value)


@pytest.mark.parametrize(
    "c_b, expected",
    [(0, 0), (2e6, 1), (3e6, 1), (6e6, 3), (10e6, 5), (20e6, 10), (28e6, 14)],
)
def test_normalized_backhaul(c_b, expected):
    assert normalized_backhaul(c_b, 2e6) == expected


def test_normalized_backhaul_rejects_bad_rate():
    with pytest.raises(InvalidParameterError, match="rate_target_bps"):
        normalized_backhaul(1e6, 0)
    with pytest.raises(InvalidParameterError, match="backhaul_bps"):
        normalized_backhaul(-1.0, 2e6)


def test_normalized_cache():
    assert normalized_cache(8e9, 8e8) == 10
    assert normalized_cache(7.9e9, 8e8) == 9
    assert normalized_cache(0, 8e8) == 0
    with pytest.raises(InvalidParameterError):
        normalized_cache(1e9, 0)


def test_radio_defaults():
    radio = RadioParams()
    assert radio.radius_m == 20.0
    assert radio.pathloss_exp == 4.0
    assert radio.bandwidth_hz == 10e6
    assert radio.rate_target_bps == 2e6
    assert radio.noise_w == pytest.approx(6.3096e-14, rel=1e-4)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"radius_m": 0},
        {"pathloss_exp": 1.5},
        {"bandwidth_hz": -1},
        {"tx_power_w": 0},
        {"rate_target_bps": 0},
        {"noise_dbm": -5000},
    ],
)
def test_radio_rejects_invalid(kwargs):
    with pytest.raises(InvalidParameterError):
        RadioParams(**kwargs)


def test_threshold_coefficient():
    radio = RadioParams()
    # 2^(2e6 * 15 / 10e6) - 1 = 7
    expected = 10e6 * radio.noise_w * 7 / 15
    assert radio.threshold_coefficient(15) == pytest.approx(expected, rel=1e-12)
    assert RadioParams(rate_target_bps=1e-12).threshold_coefficient(15) == pytest.approx(0.0, abs=1e-20)


def test_popularity_cumulative():
    pop = PopularityModel(library_size=3, zipf_exp=2.0)
    assert pop.normalizer == pytest.approx(49 / 36)
    assert pop.cumulative[0] == 0.0
    assert pop.cumulative[1] == pytest.approx(36 / 49)
    assert pop.cumulative[-1] == 1.0
    assert pop.pmf().sum() == pytest.approx(1.0)


def test_popularity_copies():
    pop = PopularityModel(library_size=100, zipf_exp=0.5)
    assert pop.with_library_size(200) == PopularityModel(library_size=200, zipf_exp=0.5)
    assert pop.with_zipf_exp(1.5).zipf_exp == 1.5
    assert pop.library_size == 100


@pytest.mark.parametrize("kwargs", [{"library_size": 0, "zipf_exp": 1}, {"library_size": 10, "zipf_exp": -0.1}])
def test_popularity_rejects_invalid(kwargs):
    with pytest.raises(InvalidParameterError):
        PopularityModel(**kwargs)


def test_cell_slots_and_copies():
    cell = CellSpec(radio=RadioParams(), users=15, backhaul_bps=10e6)
    assert cell.slots == 5
    assert cell.with_cache(100).cache_files == 100
    assert cell.with_backhaul(28e6).slots == 14
    assert cell.cache_files == 0


@pytest.mark.parametrize(
    "kwargs",
    [{"users": 0}, {"users": 2.5}, {"users": 5, "backhaul_bps": -1}, {"users": 5, "cache_files": -3}],
)
def test_cell_rejects_invalid(kwargs):
    with pytest.raises(InvalidParameterError):
        CellSpec(radio=RadioParams(), **kwargs)


def test_allocation_leftover():
    result = AllocationResult(cache_files=(2, 2), achieved_rho=0.5, total_used=4, saturated=False, budget=5)
    assert result.leftover == 1


def test_trial_estimate():
    est = TrialEstimate.from_counts(750, 1000, seed=1)
    assert est.mean == 0.75
    assert est.std_err == pytest.approx(math.sqrt(0.75 * 0.25 / 1000))
    assert est.z_score(0.75) == 0.0


def test_trial_estimate_degenerate():
    est = TrialEstimate.from_counts(100, 100, seed=1)
    assert est.std_err == 0.0
    assert est.z_score(1.0) == 0.0
    assert math.isinf(est.z_score(0.9))
