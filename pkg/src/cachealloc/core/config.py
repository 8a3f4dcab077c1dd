"""Scenario configuration parsed from a JSON (or YAML) scenario file."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from cachealloc.core.model import (
    CellSpec,
    PopularityModel,
    RadioParams,
    normalized_cache,
)
from cachealloc.errors import InvalidParameterError, ScenarioError

SCHEMA_VERSION = 1

Probability = Annotated[float, Field(ge=0, le=1)]
Mbps = Annotated[float, Field(ge=0)]
Files = Annotated[int, Field(ge=0)]
LibrarySize = Annotated[int, Field(ge=1)]
ZipfExp = Annotated[float, Field(ge=0)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------------
# Network description
# ---------------------------------------------------------------------------


class RadioConfig(_Strict):
    radius_m: float = Field(20.0, gt=0)
    pathloss_exp: float = Field(4.0, ge=2)
    noise_dbm: float = -102.0
    bandwidth_hz: float = Field(10e6, gt=0)
    tx_power_w: float = Field(1.0, gt=0)
    rate_target_bps: float = Field(2e6, gt=0)


class RadioOverride(_Strict):
    radius_m: float | None = Field(None, gt=0)
    pathloss_exp: float | None = Field(None, ge=2)
    noise_dbm: float | None = None
    bandwidth_hz: float | None = Field(None, gt=0)
    tx_power_w: float | None = Field(None, gt=0)
    rate_target_bps: float | None = Field(None, gt=0)


class CellConfig(_Strict):
    users: int = Field(15, ge=1)
    backhaul_mbps: float = Field(0.0, ge=0)
    cache_files: int | None = Field(None, ge=0)
    cache_bits: float | None = Field(None, ge=0)
    radio: RadioOverride | None = None

    @model_validator(mode="after")
    def _one_cache_unit(self) -> CellConfig:
        if self.cache_files is not None and self.cache_bits is not None:
            raise ValueError("give either cache_files or cache_bits, not both")
        return self


class PopularityConfig(_Strict):
    library_size: int = Field(1000, ge=1)
    zipf_exp: float = Field(0.56, ge=0)


# ---------------------------------------------------------------------------
# Studies
# ---------------------------------------------------------------------------


def _steps(start: float, stop: float, step: float, digits: int = 6) -> list[float]:
    count = int(round((stop - start) / step))
    return [round(start + i * step, digits) for i in range(count + 1)]


class TradeoffConfig(_Strict):
    users: int = Field(15, ge=1)
    thetas: list[Probability] = Field(default_factory=lambda: [0.5, 0.6, 0.7, 0.8, 0.9])
    backhaul_mbps: list[Mbps] = Field(default_factory=lambda: _steps(0, 28, 2))


class SweepConfig(_Strict):
    theta: float = Field(0.8, ge=0, le=1)
    users: int = Field(15, ge=1)
    backhaul_mbps: float = Field(0.0, ge=0)
    library_sizes: list[LibrarySize] = Field(default_factory=lambda: [250, 500, 1000, 2000, 4000])
    zipf_exps: list[ZipfExp] = Field(default_factory=lambda: [0.6, 1.5])
    zipf_grid: list[ZipfExp] = Field(default_factory=lambda: _steps(0.0, 1.5, 0.1))


class AllocateConfig(_Strict):
    budgets: list[Files] = Field(default_factory=lambda: list(range(0, 6001, 250)))
    zipf_exps: list[ZipfExp] = Field(default_factory=lambda: [0.6, 1.2])
    library_sizes: list[LibrarySize] = Field(default_factory=lambda: [1000])
    epsilon: float = Field(1e-4, gt=0, lt=1)


class SimulationConfig(_Strict):
    trials: int = Field(100_000, ge=1)
    seed: int = Field(2016, ge=0, lt=2**64)
    workers: int = Field(1, ge=1)


def _default_cells() -> list[CellConfig]:
    return [CellConfig(users=15, backhaul_mbps=mbps) for mbps in (0, 2, 6, 10, 20, 28)]


# ---------------------------------------------------------------------------
# Scenario
# ---------------------------------------------------------------------------


class ScenarioConfig(_Strict):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    schema_version: Literal[1] = Field(SCHEMA_VERSION, alias="schema")
    radio: RadioConfig = Field(default_factory=RadioConfig)
    cells: list[CellConfig] = Field(default_factory=_default_cells, min_length=1)
    popularity: PopularityConfig = Field(default_factory=PopularityConfig)
    file_length_bits: float | None = Field(None, gt=0)
    tradeoff: TradeoffConfig = Field(default_factory=TradeoffConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    allocate: AllocateConfig = Field(default_factory=AllocateConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)

    @model_validator(mode="after")
    def _check_network(self) -> ScenarioConfig:
        # Surfaces domain invariants (noise underflow, cache > F, missing L)
        # as validation errors at parse time.
        try:
            self.build_cells()
            self.build_popularity()
            self.build_radio()
        except InvalidParameterError as exc:
            raise ValueError(str(exc)) from exc
        return self

    # -- Domain objects ----------------------------------------------------

    def build_radio(self, override: RadioOverride | None = None) -> RadioParams:
        values = self.radio.model_dump()
        if override is not None:
            values.update(override.model_dump(exclude_none=True))
        return RadioParams(**values)

    def build_popularity(self) -> PopularityModel:
        return PopularityModel(
            library_size=self.popularity.library_size,
            zipf_exp=self.popularity.zipf_exp,
        )

    def build_cells(self) -> list[CellSpec]:
        cells = []
        for index, cell in enumerate(self.cells):
            if cell.cache_bits is not None:
                if self.file_length_bits is None:
                    raise InvalidParameterError(
                        f"cells.{index}.cache_bits needs file_length_bits"
                    )
                cache = normalized_cache(cell.cache_bits, self.file_length_bits)
            else:
                cache = cell.cache_files or 0
            if cache > self.popularity.library_size:
                raise InvalidParameterError(
                    f"cells.{index} caches {cache} files but the library has "
                    f"{self.popularity.library_size}"
                )
            cells.append(
                CellSpec(
                    radio=self.build_radio(cell.radio),
                    users=cell.users,
                    backhaul_bps=cell.backhaul_mbps * 1e6,
                    cache_files=cache,
                )
            )
        return cells

    # -- Overrides ---------------------------------------------------------

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        trials: int | None = None,
        epsilon: float | None = None,
        workers: int | None = None,
    ) -> ScenarioConfig:
        """Return a validated copy with command-line overrides applied."""
        data = self.model_dump(by_alias=True)
        simulation = data["simulation"]
        for key, value in (("seed", seed), ("trials", trials), ("workers", workers)):
            if value is not None:
                simulation[key] = value
        if epsilon is not None:
            data["allocate"]["epsilon"] = epsilon
        return self._validate(data, "<overrides>")

    # -- I/O ---------------------------------------------------------------

    @classmethod
    def _validate(cls, data: Any, source: str) -> ScenarioConfig:
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ScenarioError(source, [("document", "top level must be an object")])
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            problems = [
                (".".join(str(part) for part in err["loc"]) or "document", err["msg"])
                for err in exc.errors()
            ]
            raise ScenarioError(source, problems) from exc

    @classmethod
    def loads(cls, text: str, source: str = "<string>") -> ScenarioConfig:
        """Parse a scenario from JSON text, or YAML when it is not a JSON object."""
        if text.lstrip().startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ScenarioError(
                    source, [(f"line {exc.lineno}, column {exc.colno}", exc.msg)]
                ) from exc
        else:
            try:
                data = yaml.safe_load(text)
            except yaml.YAMLError as exc:
                mark = getattr(exc, "problem_mark", None)
                where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "document"
                raise ScenarioError(source, [(where, str(getattr(exc, "problem", exc)))]) from exc
        return cls._validate(data, source)

    @classmethod
    def load(cls, path: str | Path | None) -> ScenarioConfig:
        """Load a scenario file; ``None`` means the built-in defaults."""
        if path is None:
            return cls()
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ScenarioError(str(path), [("file", exc.strerror or str(exc))]) from exc
        return cls.loads(text, str(path))

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True, exclude_none=True), indent=2) + "\n"

    def save(self, path: str | Path) -> None:
        """Write the scenario as JSON."""
        Path(path).write_text(self.to_json(), encoding="utf-8")
