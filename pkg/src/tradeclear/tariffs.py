"""Tariff restrictions as per-good flow reductions.

A uniform tariff round shrinks every traded quantity of a good by a
factor in (0, 1].  The reduced system has a closed-form clearing
solution: divide each unrestricted price by its reduction factor.  This
module collapses bilateral reduction schedules to that per-good vector,
scales the trade matrices, produces the closed-form prices, and checks
the reduced clearing condition as an explicit residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .equilibrium import PriceVector, clearing_residual
from .errors import (
    AsymmetricSchedule,
    DimensionMismatch,
    EmptyInput,
    FactorOutOfRange,
)
from .flows import ExportMatrix, ImportMatrix, ValidationReport, Violation, _freeze

__all__ = [
    "TariffSchedule",
    "ReductionSchedule",
    "ReductionVector",
    "PriceImpact",
    "TariffOutcome",
    "collapse_reductions",
    "compose_reductions",
    "apply_reduction",
    "tariff_equilibrium",
    "verify_tariff_solution",
    "price_impact_report",
    "evaluate_tariff",
]

SCHEDULE_TOL = 1e-9
RESIDUAL_TOL = 1e-9


def _factor_pairs(factors, what: str):
    """Validate a pair -> factor-vector mapping; factors must lie in (0, 1]."""
    cleaned: dict[tuple[str, str], np.ndarray] = {}
    length = None
    for raw_pair, raw_vector in dict(factors).items():
        pair = tuple(str(part) for part in raw_pair)
        if len(pair) != 2:
            raise DimensionMismatch(f"{what} key {raw_pair!r} must name exactly two countries")
        vector = _freeze(raw_vector)
        if vector.ndim != 1 or vector.size == 0:
            raise DimensionMismatch(
                f"{what} for pair {pair} must be a nonempty vector, got shape {vector.shape}"
            )
        if length is None:
            length = vector.size
        elif vector.size != length:
            raise DimensionMismatch(
                f"{what} for pair {pair} lists {vector.size} goods, expected {length}"
            )
        for k, value in enumerate(vector):
            if not 0.0 < value <= 1.0:
                raise FactorOutOfRange(
                    f"{what} for pair {pair}, good {k} is {float(value)!r}, must lie in (0, 1]"
                )
        cleaned[pair] = vector
    return MappingProxyType(cleaned)


@dataclass(frozen=True)
class TariffSchedule:
    """Bilateral price factors: (imposing country, target country) -> per-good factors.

    Carried as annotation only; reductions drive the computation.
    """

    factors: Mapping[tuple[str, str], np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "factors", _factor_pairs(self.factors, "tariff factor"))


@dataclass(frozen=True)
class ReductionSchedule:
    """Bilateral flow reduction factors: country pair -> per-good factors in (0, 1]."""

    factors: Mapping[tuple[str, str], np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "factors", _factor_pairs(self.factors, "reduction factor"))


@dataclass(frozen=True)
class ReductionVector:
    """Per-good reduction factors shared by every country pair, each in (0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        vec = _freeze(self.values)
        if vec.ndim != 1 or vec.size == 0:
            raise DimensionMismatch(
                f"reduction vector must be a nonempty vector, got shape {vec.shape}"
            )
        for k, value in enumerate(vec):
            if not 0.0 < value <= 1.0:
                raise FactorOutOfRange(
                    f"reduction factor for good {k} is {float(value)!r}, must lie in (0, 1]"
                )
        object.__setattr__(self, "values", vec)

    @property
    def good_count(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class PriceImpact:
    """Which goods became dearer under a reduction, and by what factor."""

    ratios: np.ndarray
    increased_goods: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ratios", _freeze(self.ratios))
        object.__setattr__(self, "increased_goods", tuple(int(i) for i in self.increased_goods))


@dataclass(frozen=True)
class TariffOutcome:
    """Scaled system, closed-form prices at both scales, ratios, and the residual."""

    scaled_imports: ImportMatrix
    scaled_exports: ExportMatrix
    raw_prices: PriceVector
    normalized_prices: PriceVector
    price_ratios: np.ndarray
    residual: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "price_ratios", _freeze(self.price_ratios))
        object.__setattr__(self, "residual", _freeze(self.residual))


def collapse_reductions(
    schedule: ReductionSchedule, tol: float = SCHEDULE_TOL
) -> ReductionVector:
    """Extract the per-good reduction vector every country pair agrees on.

    Validation plus extraction, never averaging: if any pair quotes a
    factor more than tol away from the first pair's, the premise that
    reductions depend only on the good fails and the data is rejected.
    """
    pairs = sorted(schedule.factors)
    if not pairs:
        raise EmptyInput("reduction schedule lists no country pairs")
    reference_pair = pairs[0]
    reference = schedule.factors[reference_pair]
    for pair in pairs[1:]:
        gaps = np.abs(schedule.factors[pair] - reference)
        worst = int(np.argmax(gaps))
        if gaps[worst] > tol:
            raise AsymmetricSchedule(
                f"good {worst} has factor {float(reference[worst])!r} for pair "
                f"{reference_pair} but {float(schedule.factors[pair][worst])!r} for pair {pair}",
                good=worst,
                pair=pair,
            )
    return ReductionVector(reference)


def compose_reductions(first: ReductionVector, second: ReductionVector) -> ReductionVector:
    """Reduction equivalent to applying ``first`` and then ``second``."""
    if first.good_count != second.good_count:
        raise DimensionMismatch(
            f"cannot compose reductions over {first.good_count} and {second.good_count} goods"
        )
    return ReductionVector(first.values * second.values)


def apply_reduction(
    imports: ImportMatrix, exports: ExportMatrix, reduction: ReductionVector
) -> tuple[ImportMatrix, ExportMatrix]:
    """Scale each good's row of both matrices by that good's factor."""
    if imports.entries.shape != exports.entries.shape:
        raise DimensionMismatch(
            f"import matrix {imports.entries.shape} and export matrix "
            f"{exports.entries.shape} differ in shape"
        )
    if reduction.good_count != imports.good_count:
        raise DimensionMismatch(
            f"{reduction.good_count} reduction factors for {imports.good_count} goods"
        )
    scale = reduction.values[:, None]
    return ImportMatrix(imports.entries * scale), ExportMatrix(exports.entries * scale)


def tariff_equilibrium(prices: PriceVector, reduction: ReductionVector) -> PriceVector:
    """Closed-form clearing prices of the reduced system: each price divided by its factor."""
    if prices.values.shape[0] != reduction.good_count:
        raise DimensionMismatch(
            f"{reduction.good_count} reduction factors for {prices.values.shape[0]} prices"
        )
    return PriceVector.raw(prices.values / reduction.values)


def verify_tariff_solution(
    imports: ImportMatrix,
    exports: ExportMatrix,
    reduction: ReductionVector,
    prices: PriceVector,
    tol: float = RESIDUAL_TOL,
) -> ValidationReport:
    """Check the clearing condition of the reduced system at the given prices.

    ``imports`` and ``exports`` are the unrestricted matrices; the check
    scales them by the reduction and evaluates the per-good clearing
    defect against an absolute max-norm bound.
    """
    scaled_imports, scaled_exports = apply_reduction(imports, exports, reduction)
    defect = clearing_residual(scaled_imports, scaled_exports, prices)
    violations = [
        Violation("restricted_clearing", int(k), float(abs(defect[k])))
        for k in np.nonzero(np.abs(defect) > tol)[0]
    ]
    return ValidationReport.from_violations(violations)


def price_impact_report(prices: PriceVector, reduction: ReductionVector) -> PriceImpact:
    """Ratios of restricted to unrestricted prices, flagging the goods that rose.

    At raw scale the restricted price is the baseline divided by the
    factor, so the ratio is the factor's reciprocal and a price rises
    exactly where its factor is below one.
    """
    raw = tariff_equilibrium(prices, reduction)
    assert np.all(raw.values >= prices.values), "raw restricted prices fell below baseline"
    ratios = 1.0 / reduction.values
    increased = tuple(int(k) for k in np.nonzero(reduction.values < 1.0)[0])
    return PriceImpact(ratios=ratios, increased_goods=increased)


def evaluate_tariff(
    imports: ImportMatrix,
    exports: ExportMatrix,
    prices: PriceVector,
    reduction: ReductionVector,
) -> TariffOutcome:
    """Assemble the full restricted-scenario outcome from a solved baseline."""
    scaled_imports, scaled_exports = apply_reduction(imports, exports, reduction)
    raw = tariff_equilibrium(prices, reduction)
    normalized = PriceVector.simplex(raw.values)
    return TariffOutcome(
        scaled_imports=scaled_imports,
        scaled_exports=scaled_exports,
        raw_prices=raw,
        normalized_prices=normalized,
        price_ratios=1.0 / reduction.values,
        residual=clearing_residual(scaled_imports, scaled_exports, raw),
    )
