"""Error types raised by cachealloc."""

from __future__ import annotations


class CacheAllocError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameterError(CacheAllocError, ValueError):
    """A value violates the precondition of the operation it was passed to."""


class QuadratureError(CacheAllocError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message: str, *, residual: float, tolerance: float) -> None:
        super().__init__(f"{message} (residual {residual:.3e}, tolerance {tolerance:.1e})")
        self.residual = residual
        self.tolerance = tolerance


class SearchSpaceTooLargeError(CacheAllocError, ValueError):
    """Exhaustive enumeration would visit more candidates than allowed."""

    def __init__(self, candidates: int, limit: int) -> None:
        super().__init__(
            f"Brute-force search space has {candidates} candidate allocations "
            f"(limit {limit})"
        )
        self.candidates = candidates
        self.limit = limit


class ScenarioError(CacheAllocError, ValueError):
    """A scenario file could not be parsed or failed validation.

    ``problems`` holds ``(location, message)`` pairs; location is a dotted
    field path or ``line N, column M`` for syntax errors.
    """

    def __init__(self, source: str, problems: list[tuple[str, str]]) -> None:
        lines = "; ".join(f"{loc}: {msg}" for loc, msg in problems)
        super().__init__(f"Invalid scenario {source}: {lines}")
        self.source = source
        self.problems = problems
