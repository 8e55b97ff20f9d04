"""Request and response models for the scenario service.

Requests carry the same data the file formats do: long-form flow
records or a labeled import matrix, a labeled allocation matrix, and
optionally per-good reduction factors (directly, or as a bilateral
schedule to collapse).  Responses mirror the report tree exactly, with
optional sections omitted rather than set to null.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 100_000


class FlowRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    exporter: str
    importer: str
    good: str
    quantity: float = Field(ge=0)


class MatrixPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    row_labels: list[str]
    column_labels: list[str]
    values: list[list[float]]

    @model_validator(mode="after")
    def _rectangular(self):
        if len(self.values) != len(self.row_labels):
            raise ValueError(
                f"{len(self.values)} value rows for {len(self.row_labels)} row labels"
            )
        for position, row in enumerate(self.values):
            if len(row) != len(self.column_labels):
                raise ValueError(
                    f"row {position} has {len(row)} cells for "
                    f"{len(self.column_labels)} column labels"
                )
        return self


class SchedulePair(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str
    target: str
    factors: dict[str, float]


class ScenarioRequest(BaseModel):
    """Shared request body: one trade input, one allocation matrix, solver knobs."""

    model_config = ConfigDict(extra="forbid")

    flows: Optional[list[FlowRecord]] = None
    imports: Optional[MatrixPayload] = None
    tau: MatrixPayload
    tolerance: float = Field(default=DEFAULT_TOLERANCE, gt=0)
    max_iterations: int = Field(default=DEFAULT_MAX_ITERATIONS, ge=1)

    @model_validator(mode="after")
    def _one_trade_input(self):
        if (self.flows is None) == (self.imports is None):
            raise ValueError("give exactly one of flows or imports")
        if self.flows is not None and not self.flows:
            raise ValueError("flows must not be empty")
        return self


def _unique_pairs(pairs: list[SchedulePair], what: str) -> None:
    seen = set()
    for pair in pairs:
        key = (pair.source, pair.target)
        if key in seen:
            raise ValueError(f"duplicate {what} pair {key}")
        seen.add(key)


class ValidateRequest(ScenarioRequest):
    reduction: Optional[Union[dict[str, float], list[float]]] = None
    reduction_schedule: Optional[list[SchedulePair]] = None

    @model_validator(mode="after")
    def _at_most_one_reduction(self):
        if self.reduction is not None and self.reduction_schedule is not None:
            raise ValueError("give at most one of reduction or reduction_schedule")
        if self.reduction_schedule is not None:
            _unique_pairs(self.reduction_schedule, "reduction")
        return self


class TariffRequest(ScenarioRequest):
    reduction: Optional[Union[dict[str, float], list[float]]] = None
    reduction_schedule: Optional[list[SchedulePair]] = None
    tariff_factors: Optional[list[SchedulePair]] = None

    @model_validator(mode="after")
    def _exactly_one_reduction(self):
        if (self.reduction is None) == (self.reduction_schedule is None):
            raise ValueError("give exactly one of reduction or reduction_schedule")
        if self.reduction_schedule is not None:
            _unique_pairs(self.reduction_schedule, "reduction")
        if self.tariff_factors is not None:
            _unique_pairs(self.tariff_factors, "tariff")
        return self


class ViolationModel(BaseModel):
    check: str
    index: int
    label: Optional[str] = None
    pair: Optional[list[str]] = None
    magnitude: float


class CheckModel(BaseModel):
    checked: bool
    passed: Optional[bool] = None
    reason: Optional[str] = None
    problems: Optional[list[str]] = None
    violations: Optional[list[ViolationModel]] = None
    components: Optional[list[list[str]]] = None


class InputsModel(BaseModel):
    source: str
    countries: list[str]
    goods: list[str]
    country_count: int
    good_count: int
    tolerance: float
    max_iterations: int


class ValidationModel(BaseModel):
    alignment: CheckModel
    tau_rows: CheckModel
    positivity: CheckModel
    irreducibility: CheckModel
    conservation: CheckModel
    reduction_range: Optional[CheckModel] = None
    reduction_symmetry: Optional[CheckModel] = None


class StructureModel(BaseModel):
    imports: dict[str, dict[str, float]]
    mixing: dict[str, dict[str, float]]
    mixing_row_stochastic: bool
    mixing_irreducible: bool
    mixing_components: Optional[list[list[str]]] = None
    ideal_exports: dict[str, dict[str, float]]
    observed_exports: Optional[dict[str, dict[str, float]]] = None
    ideal_observed_gap: Optional[float] = None


class EquilibriumModel(BaseModel):
    prices: dict[str, float]
    eigenvalue: float = Field(alias="lambda")
    country_values: dict[str, float]
    value_shares: dict[str, float]
    iterations: int
    step_delta: float
    clearing_residual: dict[str, float]
    clearing_residual_norm: float
    balance: dict[str, float]
    balance_norm: float
    stationarity: CheckModel


class TariffModel(BaseModel):
    reduction: dict[str, float]
    raw_prices: dict[str, float]
    normalized_prices: dict[str, float]
    price_ratios: dict[str, float]
    increased_goods: list[str]
    restricted_residual: dict[str, float]
    restricted_residual_norm: float
    scaled_balance_norm: float
    tariff_factors: Optional[dict[str, dict[str, float]]] = None


class StatusModel(BaseModel):
    outcome: str
    exit_code: int
    failed_checks: list[str]


class RunReportModel(BaseModel):
    report: str
    version: int
    command: str
    inputs: InputsModel
    validation: ValidationModel
    structure: Optional[StructureModel] = None
    equilibrium: Optional[EquilibriumModel] = None
    tariff: Optional[TariffModel] = None
    status: StatusModel


class HealthModel(BaseModel):
    status: str
    version: str
