"""Single-cell minimum cache search and multi-cell max-min budget allocation."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

from cachealloc.core.analytic import UspBreakdown, compose_usp, wireless_success
from cachealloc.core.model import AllocationResult, CellSpec, PopularityModel
from cachealloc.errors import InvalidParameterError, SearchSpaceTooLargeError

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-4
BRUTEFORCE_LIMIT = 10**7


class UspCurve:
    """USP of one cell as a function of its cache size.

    The wireless success is computed once; every cache size is evaluated at
    most once and ``evaluations`` counts the distinct evaluations.
    """

    def __init__(self, cell: CellSpec, pop: PopularityModel) -> None:
        self.cell = cell
        self.pop = pop
        self.p_wireless = wireless_success(cell.radio, cell.users)
        self.evaluations = 0
        self._memo: dict[int, UspBreakdown] = {}

    def breakdown(self, s: int) -> UspBreakdown:
        entry = self._memo.get(s)
        if entry is None:
            entry = compose_usp(self.cell.with_cache(s), self.pop, self.p_wireless)
            self._memo[s] = entry
            self.evaluations += 1
        return entry

    def p_user(self, s: int) -> float:
        return self.breakdown(s).p_user

    def min_cache(self, theta: float) -> int | None:
        """Smallest cache size whose USP reaches ``theta``; None if none does.

        A full cache gives P^N = 1, so ``theta`` is reachable exactly when
        it does not exceed the wireless success.
        """
        if not (0.0 <= theta <= 1.0):
            raise InvalidParameterError(f"theta must be in [0, 1], got {theta!r}")
        if theta <= 0.0:
            return 0
        if theta > self.p_wireless:
            return None
        if self.p_user(0) >= theta:
            return 0
        low, high = 0, self.pop.library_size
        while high - low > 1:
            mid = (low + high) // 2
            if self.p_user(mid) >= theta:
                high = mid
            else:
                low = mid
        return high


def min_cache_bisection(cell: CellSpec, pop: PopularityModel, theta: float) -> int | None:
    """Minimum cache size for ``cell`` to reach USP ``theta`` (None when infeasible)."""
    return UspCurve(cell, pop).min_cache(theta)


@dataclass(frozen=True)
class AllocationProblem:
    """Cells sharing a cache budget of ``budget_files`` files.

    The ``cache_files`` of each cell is ignored; allocators assign their own.
    """

    cells: tuple[CellSpec, ...]
    pop: PopularityModel
    budget_files: int
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(self.cells))
        if not self.cells:
            raise InvalidParameterError("an allocation problem needs at least one cell")
        if int(self.budget_files) != self.budget_files or self.budget_files < 0:
            raise InvalidParameterError(
                f"budget_files must be a nonnegative integer, got {self.budget_files!r}"
            )
        if not (0.0 < self.epsilon < 1.0):
            raise InvalidParameterError(f"epsilon must be in (0, 1), got {self.epsilon!r}")

    def curves(self) -> list[UspCurve]:
        return [UspCurve(cell, self.pop) for cell in self.cells]


def _result(curves: list[UspCurve], sizes: tuple[int, ...], budget: int) -> AllocationResult:
    """Evaluate ``sizes`` exactly.

    The allocation is saturated when every cell has full network support,
    P^N = 1, at its cache size.
    """
    breakdowns = [curve.breakdown(s) for curve, s in zip(curves, sizes)]
    p_user = tuple(b.p_user for b in breakdowns)
    achieved = min(p_user)
    saturated = all(b.p_network >= 1.0 for b in breakdowns)
    return AllocationResult(
        cache_files=sizes,
        achieved_rho=achieved,
        total_used=sum(sizes),
        saturated=saturated,
        budget=budget,
        p_user=p_user,
        evaluations=sum(curve.evaluations for curve in curves),
    )


def allocate(problem: AllocationProblem) -> AllocationResult:
    """Max-min USP allocation by bisection on the common target rho.

    Each step solves the per-cell minimum cache problems at the midpoint;
    the midpoint is kept when every cell can reach it and the sizes fit in
    the budget. A cell whose wireless success is below the midpoint makes
    the step infeasible without spending evaluations.
    """
    curves = problem.curves()
    budget = problem.budget_files
    low, up = 0.0, 1.0
    best = tuple(0 for _ in curves)

    while up - low >= problem.epsilon:
        mid = 0.5 * (low + up)
        if any(mid > curve.p_wireless for curve in curves):
            up = mid
            continue
        sizes: list[int] = []
        for curve in curves:
            sizes.append(curve.min_cache(mid))
            if sum(sizes) > budget:
                break
        if len(sizes) == len(curves) and sum(sizes) <= budget:
            low, best = mid, tuple(sizes)
        else:
            up = mid
        logger.debug("bisection rho in [%.6f, %.6f] sizes=%s", low, up, sizes)

    result = _result(curves, best, budget)
    logger.info(
        "allocated %d/%d files, min USP %.6f (%d evaluations)",
        result.total_used, budget, result.achieved_rho, result.evaluations,
    )
    return result


def allocate_bruteforce(problem: AllocationProblem, *, limit: int = BRUTEFORCE_LIMIT) -> AllocationResult:
    """Exhaustive max-min allocation, used as an oracle for :func:`allocate`.

    Ties are broken by smallest total cache, then by the lexicographically
    smallest allocation.
    """
    f = problem.pop.library_size
    candidates = (f + 1) ** len(problem.cells)
    if candidates > limit:
        raise SearchSpaceTooLargeError(candidates, limit)

    curves = problem.curves()
    top = min(f, problem.budget_files)
    table = [[curve.p_user(s) for s in range(top + 1)] for curve in curves]

    best_key: tuple[float, int, tuple[int, ...]] | None = None
    for sizes in itertools.product(range(top + 1), repeat=len(curves)):
        total = sum(sizes)
        if total > problem.budget_files:
            continue
        rho = min(row[s] for row, s in zip(table, sizes))
        key = (-rho, total, sizes)
        if best_key is None or key < best_key:
            best_key = key

    assert best_key is not None  # the all-zero allocation always qualifies
    return _result(curves, best_key[2], problem.budget_files)


def uniform_allocate(problem: AllocationProblem) -> AllocationResult:
    """Split the budget evenly, floor(C0 / N) files per cell (capped at F).

    The remainder of the division stays unallocated.
    """
    curves = problem.curves()
    share = min(problem.budget_files // len(curves), problem.pop.library_size)
    return _result(curves, tuple(share for _ in curves), problem.budget_files)


def evaluation_bound(problem: AllocationProblem) -> int:
    """Upper bound on USP evaluations made by one :func:`allocate` call."""
    steps = math.ceil(math.log2(1.0 / problem.epsilon))
    per_cell = math.ceil(math.log2(problem.pop.library_size + 1)) + 2
    return steps * len(problem.cells) * per_cell
