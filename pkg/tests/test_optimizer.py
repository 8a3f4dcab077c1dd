"""Tests for the minimum cache search and the budget allocators."""

import numpy as np
import pytest

from cachealloc.core.analytic import usp_exact, wireless_success
from cachealloc.core.model import CellSpec, PopularityModel, RadioParams
from cachealloc.core.optimizer import (
    AllocationProblem,
    UspCurve,
    allocate,
    allocate_bruteforce,
    evaluation_bound,
    min_cache_bisection,
    uniform_allocate,
)
from cachealloc.errors import InvalidParameterError, SearchSpaceTooLargeError

RADIO = RadioParams()
POP = PopularityModel(library_size=1000, zipf_exp=0.56)


def _cells(*mbps: float, users: int = 15, radio: RadioParams = RADIO) -> tuple[CellSpec, ...]:
    return tuple(CellSpec(radio=radio, users=users, backhaul_bps=b * 1e6) for b in mbps)


def _random_problem(rng: np.random.Generator, epsilon: float = 1e-6) -> AllocationProblem:
    cells = tuple(
        CellSpec(
            radio=RadioParams(radius_m=float(rng.uniform(10, 40))),
            users=int(rng.integers(1, 20)),
            backhaul_bps=float(rng.integers(0, 12)) * 2e6,
        )
        for _ in range(int(rng.integers(1, 4)))
    )
    pop = PopularityModel(library_size=int(rng.integers(1, 21)), zipf_exp=float(rng.uniform(0, 2)))
    return AllocationProblem(cells=cells, pop=pop, budget_files=int(rng.integers(0, 31)), epsilon=epsilon)


# ── Single cell ──────────────────────────────────────────────────────────────

def test_min_cache_trivial_targets():
    cell = CellSpec(radio=RADIO, users=15, backhaul_bps=10e6)
    assert min_cache_bisection(cell, POP, 0.0) == 0
    p_w = wireless_success(RADIO, 15)
    assert min_cache_bisection(cell, POP, min(1.0, p_w + 1e-6)) is None
    # without backhaul only the full library reaches the wireless ceiling
    assert min_cache_bisection(cell.with_backhaul(0), POP, p_w) == POP.library_size


def test_min_cache_matches_linear_scan():
    cell = CellSpec(radio=RADIO, users=15, backhaul_bps=10e6)
    curve = UspCurve(cell, POP)
    scan = next(s for s in range(POP.library_size + 1) if curve.p_user(s) >= 0.8)
    assert min_cache_bisection(cell, POP, 0.8) == scan


def test_min_cache_uses_logarithmic_evaluations():
    curve = UspCurve(CellSpec(radio=RADIO, users=15, backhaul_bps=2e6), POP)
    curve.min_cache(0.6)
    assert curve.evaluations <= 12


def test_min_cache_nonincreasing_in_backhaul():
    for theta in (0.6, 0.7, 0.8, 0.9):
        sizes = [min_cache_bisection(c, POP, theta) for c in _cells(*range(0, 30, 2))]
        assert all(b <= a for a, b in zip(sizes, sizes[1:]))


def test_marginal_cache_reduction_shrinks_with_backhaul():
    sizes = [min_cache_bisection(c, POP, 0.8) for c in _cells(*range(0, 16, 2))]
    assert sizes[0] - sizes[1] > sizes[6] - sizes[7]


def test_min_cache_rejects_theta():
    with pytest.raises(InvalidParameterError, match="theta"):
        min_cache_bisection(CellSpec(radio=RADIO, users=15), POP, 1.5)


# ── Problem validation ───────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "kwargs",
    [
        {"cells": (), "budget_files": 10},
        {"cells": _cells(0), "budget_files": -1},
        {"cells": _cells(0), "budget_files": 2.5},
        {"cells": _cells(0), "budget_files": 10, "epsilon": 0.0},
        {"cells": _cells(0), "budget_files": 10, "epsilon": 1.0},
    ],
)
def test_problem_rejects_invalid(kwargs):
    with pytest.raises(InvalidParameterError):
        AllocationProblem(pop=POP, **kwargs)


# ── Allocation ───────────────────────────────────────────────────────────────

def test_symmetric_cells_split_evenly():
    pop = PopularityModel(library_size=50, zipf_exp=0.8)
    problem = AllocationProblem(cells=_cells(0, 0, 0), pop=pop, budget_files=15)
    result = allocate(problem)
    assert result.cache_files == (5, 5, 5)
    assert result.total_used == 15
    assert result.leftover == 0
    uniform = uniform_allocate(problem)
    assert uniform.achieved_rho == pytest.approx(result.achieved_rho, abs=problem.epsilon)


def test_zero_budget_gives_empty_caches():
    problem = AllocationProblem(cells=_cells(0, 6, 20), pop=PopularityModel(20, 0.6), budget_files=0)
    for allocator in (allocate, allocate_bruteforce, uniform_allocate):
        result = allocator(problem)
        assert result.cache_files == (0, 0, 0)
        assert result.total_used == 0


def test_bruteforce_skips_cell_with_ample_backhaul():
    problem = AllocationProblem(
        cells=_cells(0, 20, users=3), pop=PopularityModel(library_size=5, zipf_exp=1.0), budget_files=4,
    )
    result = allocate_bruteforce(problem)
    assert result.cache_files == (4, 0)


def test_bruteforce_full_caches_when_budget_covers_library():
    pop = PopularityModel(library_size=4, zipf_exp=0.6)
    problem = AllocationProblem(cells=_cells(0, 0, radio=RADIO), pop=pop, budget_files=8)
    result = allocate_bruteforce(problem)
    assert result.cache_files == (4, 4)
    assert result.achieved_rho == pytest.approx(wireless_success(RADIO, 15))
    assert result.saturated


def test_bruteforce_guard():
    problem = AllocationProblem(cells=_cells(0, 0, 0), pop=POP, budget_files=100)
    with pytest.raises(SearchSpaceTooLargeError) as info:
        allocate_bruteforce(problem)
    assert info.value.candidates == 1001**3


def test_allocate_matches_bruteforce():
    rng = np.random.default_rng(2016)
    for _ in range(50):
        problem = _random_problem(rng)
        fast = allocate(problem)
        oracle = allocate_bruteforce(problem)
        assert fast.total_used <= problem.budget_files
        assert abs(fast.achieved_rho - oracle.achieved_rho) <= problem.epsilon


def test_allocate_dominates_uniform():
    rng = np.random.default_rng(7)
    for _ in range(50):
        problem = _random_problem(rng, epsilon=1e-4)
        assert allocate(problem).achieved_rho >= uniform_allocate(problem).achieved_rho - problem.epsilon


def test_achieved_rho_nondecreasing_in_budget():
    rng = np.random.default_rng(23)
    for _ in range(10):
        base = _random_problem(rng)
        rhos = [
            allocate(AllocationProblem(base.cells, base.pop, budget, base.epsilon)).achieved_rho
            for budget in range(0, 31)
        ]
        assert all(b >= a for a, b in zip(rhos, rhos[1:]))


def test_allocation_frozen_after_saturation():
    pop = PopularityModel(library_size=20, zipf_exp=0.6)
    cells = _cells(0, 0) + _cells(40)
    results = [allocate(AllocationProblem(cells, pop, budget)) for budget in range(0, 81)]
    first = next(i for i, r in enumerate(results) if r.saturated)
    assert first == 40
    assert results[first].cache_files == (20, 20, 0)
    assert all(r.cache_files == results[first].cache_files for r in results[first:])
    assert all(r.saturated for r in results[first:])


def test_saturation_requires_full_network_support():
    pop = PopularityModel(library_size=20, zipf_exp=0.6)
    cells = (
        CellSpec(RadioParams(radius_m=40.0), 15, 0.0),
        CellSpec(RadioParams(radius_m=10.0), 15, 0.0),
    )
    for budget in range(0, 46):
        result = allocate(AllocationProblem(cells, pop, budget))
        full = [usp_exact(cell.with_cache(s), pop).p_network >= 1.0 for cell, s in zip(cells, result.cache_files)]
        assert result.saturated == all(full)

    limited = allocate(AllocationProblem(cells, pop, 40))
    assert limited.cache_files[0] == 20
    assert limited.cache_files[1] < 20
    assert not limited.saturated
    assert not uniform_allocate(AllocationProblem(cells, pop, 30)).saturated
    assert uniform_allocate(AllocationProblem(cells, pop, 40)).saturated



def test_evaluation_bound():
    problem = AllocationProblem(cells=_cells(0, 2, 6, 10, 20, 28), pop=POP, budget_files=2000)
    result = allocate(problem)
    assert 0 < result.evaluations <= evaluation_bound(problem)


def test_uniform_split():
    pop = PopularityModel(library_size=20, zipf_exp=0.6)
    cells = _cells(0, 2, 6, 10, 20, 28)
    even = uniform_allocate(AllocationProblem(cells, pop, 12))
    assert even.cache_files == (2,) * 6
    remainder = uniform_allocate(AllocationProblem(cells, pop, 13))
    assert remainder.cache_files == (2,) * 6
    assert remainder.leftover == 1
    capped = uniform_allocate(AllocationProblem(cells, pop, 500))
    assert capped.cache_files == (20,) * 6


def test_achieved_rho_is_exact():
    problem = AllocationProblem(cells=_cells(0, 6, 20), pop=POP, budget_files=700)
    result = allocate(problem)
    curves = problem.curves()
    exact = [curve.p_user(s) for curve, s in zip(curves, result.cache_files)]
    assert result.p_user == pytest.approx(exact)
    assert result.achieved_rho == min(result.p_user)


def test_six_cell_gain_over_uniform():
    cells = _cells(0, 2, 6, 10, 20, 28)
    gaps = {}
    for gamma in (0.6, 1.2):
        pop = PopularityModel(library_size=1000, zipf_exp=gamma)
        gap = []
        for budget in range(0, 6001, 500):
            problem = AllocationProblem(cells, pop, budget)
            optimal, uniform = allocate(problem), uniform_allocate(problem)
            assert optimal.achieved_rho >= uniform.achieved_rho - problem.epsilon
            gap.append(optimal.achieved_rho - uniform.achieved_rho)
        gaps[gamma] = max(gap)
    assert gaps[0.6] > 0.01
    assert gaps[0.6] > gaps[1.2]
