"""Bilateral trade flows and per-country import/export aggregates.

Matrix orientation is goods by countries everywhere: entry ``[k, i]``
refers to good ``k`` and country ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionMismatch, NegativeEntry, NegativeQuantity, SelfFlow

__all__ = [
    "BilateralFlowSet",
    "ImportMatrix",
    "ExportMatrix",
    "Violation",
    "ValidationReport",
    "aggregate_flows",
    "validate_conservation",
    "validate_positivity",
]

CONSERVATION_TOL = 1e-9


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class BilateralFlowSet:
    """Pairwise export vectors between countries.

    ``flows[(i, s)]`` holds the quantities of each good that country ``i``
    ships to country ``s``.  Pairs that never traded may simply be absent
    and count as zero; a pair shipping to itself must be absent or zero.
    """

    countries: tuple[str, ...]
    goods: tuple[str, ...]
    flows: Mapping[tuple[int, int], np.ndarray]

    def __post_init__(self):
        countries = tuple(self.countries)
        goods = tuple(self.goods)
        if len(countries) < 2:
            raise DimensionMismatch(
                f"a flow set needs at least two countries, got {len(countries)}"
            )
        if len(goods) < 1:
            raise DimensionMismatch("a flow set needs at least one good")
        frozen = {}
        for (i, s), quantities in self.flows.items():
            if not (0 <= i < len(countries) and 0 <= s < len(countries)):
                raise DimensionMismatch(f"flow pair ({i}, {s}) is outside the country range")
            vec = _freeze(quantities)
            if vec.shape != (len(goods),):
                raise DimensionMismatch(
                    f"flow ({i}, {s}) has {vec.size} quantities, expected {len(goods)}"
                )
            if np.any(vec < 0):
                raise NegativeQuantity(f"flow ({i}, {s}) has a negative quantity")
            if i == s and np.any(vec != 0):
                raise SelfFlow(f"country {countries[i]!r} ships goods to itself")
            frozen[(i, s)] = vec
        object.__setattr__(self, "countries", countries)
        object.__setattr__(self, "goods", goods)
        object.__setattr__(self, "flows", MappingProxyType(frozen))

    @property
    def country_count(self) -> int:
        return len(self.countries)

    @property
    def good_count(self) -> int:
        return len(self.goods)


def _nonnegative_matrix(entries, what: str) -> np.ndarray:
    arr = _freeze(entries)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{what} must be two dimensional, got shape {arr.shape}")
    if np.any(arr < 0):
        raise NegativeEntry(f"{what} entries must be nonnegative")
    return arr


@dataclass(frozen=True)
class ImportMatrix:
    """Aggregate demand: entry ``[k, i]`` is how much of good k country i imports."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _nonnegative_matrix(self.entries, "import matrix"))

    @property
    def good_count(self) -> int:
        return self.entries.shape[0]

    @property
    def country_count(self) -> int:
        return self.entries.shape[1]

    def world_imports(self) -> np.ndarray:
        """Per-good totals across all countries."""
        return self.entries.sum(axis=1)


@dataclass(frozen=True)
class ExportMatrix:
    """Aggregate supply: entry ``[k, i]`` is how much of good k country i exports."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _nonnegative_matrix(self.entries, "export matrix"))

    @property
    def good_count(self) -> int:
        return self.entries.shape[0]

    @property
    def country_count(self) -> int:
        return self.entries.shape[1]

    def world_exports(self) -> np.ndarray:
        return self.entries.sum(axis=1)


@dataclass(frozen=True)
class Violation:
    """One failed check: which test, where, and how large the defect is."""

    check: str
    index: int | str
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[Violation, ...]

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))
        if self.passed != (len(self.violations) == 0):
            raise ValueError("passed flag inconsistent with the violation list")

    @classmethod
    def from_violations(cls, violations: Iterable[Violation]) -> "ValidationReport":
        found = tuple(violations)
        return cls(passed=not found, violations=found)


def aggregate_flows(flows: BilateralFlowSet) -> tuple[ImportMatrix, ExportMatrix]:
    """Sum bilateral flows into per-country import and export matrices.

    Column i of the export matrix collects everything country i ships out;
    column s of the import matrix collects everything shipped into s.
    """
    n, l = flows.good_count, flows.country_count
    exports = np.zeros((n, l))
    imports = np.zeros((n, l))
    for (i, s), vec in flows.flows.items():
        exports[:, i] += vec
        imports[:, s] += vec
    return ImportMatrix(imports), ExportMatrix(exports)


def validate_conservation(
    imports: ImportMatrix, exports: ExportMatrix, tol: float = CONSERVATION_TOL
) -> ValidationReport:
    """Check that world imports equal world exports for every good.

    The comparison is relative with an absolute floor of one unit, since
    trade quantities span many orders of magnitude.
    """
    if imports.entries.shape != exports.entries.shape:
        raise DimensionMismatch(
            f"import matrix {imports.entries.shape} and export matrix "
            f"{exports.entries.shape} differ in shape"
        )
    world_in = imports.world_imports()
    world_out = exports.world_exports()
    gap = np.abs(world_in - world_out)
    limit = tol * np.maximum(1.0, world_in)
    violations = [
        Violation("conservation", int(k), float(gap[k]))
        for k in np.nonzero(gap > limit)[0]
    ]
    return ValidationReport.from_violations(violations)


def validate_positivity(imports: ImportMatrix) -> ValidationReport:
    """Check that every good is imported somewhere in the world."""
    totals = imports.world_imports()
    violations = [
        Violation("positivity", int(k), float(totals[k]))
        for k in np.nonzero(totals <= 0)[0]
    ]
    return ValidationReport.from_violations(violations)
