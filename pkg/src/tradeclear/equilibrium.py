"""Clearing-price solver and the residual checks that certify a solution.

The clearing condition asks for prices at which, for every good, world
demand weighted by each country's export/import value ratio equals world
supply.  For the constructed export structure that reduces to a positive
eigenvector problem with eigenvalue one, solved here by a damped power
iteration on the price simplex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    IrreducibilityViolation,
    PositivityViolation,
    ZeroSpend,
)
from .flows import ExportMatrix, ImportMatrix, ValidationReport, Violation, _freeze
from .structure import MixingMatrix, TauMatrix, build_goods_coupling, build_ideal_exports, check_irreducible

__all__ = [
    "PriceVector",
    "PriceMapMatrix",
    "EquilibriumSolution",
    "build_price_map",
    "solve_prices",
    "country_values",
    "verify_stationarity",
    "clearing_residual",
    "balance_vector",
]

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 100_000
SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class PriceVector:
    """Strictly positive prices, one per good.

    ``normalization`` records the scale convention: ``simplex`` prices sum
    to one, ``raw`` prices carry whatever scale produced them.  The
    clearing condition itself is scale free.
    """

    values: np.ndarray
    normalization: str = "simplex"

    def __post_init__(self):
        vec = _freeze(self.values)
        if vec.ndim != 1:
            raise DimensionMismatch(f"price vector must be one dimensional, got {vec.shape}")
        if np.any(vec <= 0):
            raise PositivityViolation("prices must be strictly positive")
        if self.normalization not in ("simplex", "raw"):
            raise ValueError(f"unknown normalization tag {self.normalization!r}")
        if self.normalization == "simplex" and abs(float(vec.sum()) - 1.0) > SIMPLEX_TOL:
            raise ValueError("simplex prices must sum to one")
        object.__setattr__(self, "values", vec)

    @classmethod
    def simplex(cls, values) -> "PriceVector":
        vec = np.asarray(values, dtype=float)
        return cls(vec / vec.sum(), "simplex")

    @classmethod
    def raw(cls, values) -> "PriceVector":
        return cls(np.asarray(values, dtype=float), "raw")


@dataclass(frozen=True)
class PriceMapMatrix:
    """Goods-by-goods price map: coupling scaled by world imports of the target good."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _freeze(self.entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"price map must be square, got {arr.shape}")
        if np.any(arr < 0):
            raise ValueError("price map entries must be nonnegative")
        object.__setattr__(self, "entries", arr)


@dataclass(frozen=True)
class EquilibriumSolution:
    """Converged prices with every diagnostic recomputed from the final state."""

    prices: PriceVector
    eigenvalue: float
    country_values: np.ndarray
    iterations: int
    step_delta: float
    clearing_residual: np.ndarray
    balance_residual: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "country_values", _freeze(self.country_values))
        object.__setattr__(self, "clearing_residual", _freeze(self.clearing_residual))
        object.__setattr__(self, "balance_residual", _freeze(self.balance_residual))

    def value_shares(self) -> np.ndarray:
        return self.country_values / self.country_values.sum()


def build_price_map(imports: ImportMatrix, tau: TauMatrix) -> PriceMapMatrix:
    """Scale each coupling column by the world imports of its good."""
    coupling = build_goods_coupling(imports, tau)
    world = imports.world_imports()
    if np.any(world <= 0):
        bad = np.nonzero(world <= 0)[0]
        raise PositivityViolation(
            f"goods with zero world imports: {bad.tolist()}; price map is undefined"
        )
    return PriceMapMatrix(coupling.entries / world[None, :])


def solve_prices(
    imports: ImportMatrix,
    tau: TauMatrix,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> EquilibriumSolution:
    """Find the clearing prices for the constructed export structure.

    Starting from the uniform simplex point, each step applies the
    transposed price map, adds the current iterate, and renormalizes to
    the simplex.  Adding the identity makes the map primitive whenever
    the coupling is irreducible, so the iteration converges to the
    positive eigenvector, whose eigenvalue is one for this structure.
    The stopping rule is the max-norm change between successive
    iterates; correctness is certified afterwards by the clearing and
    balance residuals, not by the stopping rule itself.
    """
    price_map = build_price_map(imports, tau)
    verdict = check_irreducible(price_map.entries)
    if not verdict.irreducible:
        raise IrreducibilityViolation(
            f"goods coupling splits into {len(verdict.components)} blocks; "
            "no positive clearing price exists",
            components=verdict.components,
        )
    transpose = np.ascontiguousarray(price_map.entries.T)
    n = transpose.shape[0]
    p = np.full(n, 1.0 / n)
    step = np.inf
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        updated = p + transpose @ p
        updated /= updated.sum()
        step = float(np.max(np.abs(updated - p)))
        p = updated
        if step <= tolerance:
            break
    else:
        raise ConvergenceFailure(
            f"no convergence after {max_iterations} iterations (last step {step:.3e})",
            iterations=max_iterations,
            step_delta=step,
        )
    prices = PriceVector(p, "simplex")
    eigenvalue = float((transpose @ p).sum())
    values = country_values(imports, prices)
    exports = build_ideal_exports(imports, tau)
    return EquilibriumSolution(
        prices=prices,
        eigenvalue=eigenvalue,
        country_values=values,
        iterations=iterations,
        step_delta=step,
        clearing_residual=clearing_residual(imports, exports, prices),
        balance_residual=balance_vector(imports, exports, prices),
    )


def country_values(imports: ImportMatrix, prices: PriceVector) -> np.ndarray:
    """Value of each country's import bundle at the given prices."""
    if prices.values.shape[0] != imports.good_count:
        raise DimensionMismatch(
            f"{prices.values.shape[0]} prices for {imports.good_count} goods"
        )
    return imports.entries.T @ prices.values


def verify_stationarity(mixing: MixingMatrix, values, tol: float = 1e-9) -> ValidationReport:
    """Check that country values are a fixed point of the transposed mixing matrix.

    The defect is measured relative to the largest value, with an absolute
    floor of one.
    """
    vec = np.asarray(values, dtype=float)
    if mixing.entries.shape[0] != vec.shape[0]:
        raise DimensionMismatch(
            f"mixing matrix {mixing.entries.shape} does not match {vec.shape[0]} values"
        )
    defect = mixing.entries.T @ vec - vec
    limit = tol * max(1.0, float(np.max(np.abs(vec))))
    violations = [
        Violation("stationarity", int(i), float(abs(defect[i])))
        for i in np.nonzero(np.abs(defect) > limit)[0]
    ]
    return ValidationReport.from_violations(violations)


def clearing_residual(
    imports: ImportMatrix, exports: ExportMatrix, prices: PriceVector
) -> np.ndarray:
    """Per-good defect of the clearing condition at the given prices.

    Each country's demand column is weighted by its export-to-import value
    ratio; the weighted world demand minus world supply is the defect.
    Invariant under rescaling of the whole price vector.
    """
    _require_same_shape(imports, exports)
    if prices.values.shape[0] != imports.good_count:
        raise DimensionMismatch(
            f"{prices.values.shape[0]} prices for {imports.good_count} goods"
        )
    spend = imports.entries.T @ prices.values
    zero = np.nonzero(spend == 0)[0]
    if zero.size:
        raise ZeroSpend(f"countries with zero import value at these prices: {zero.tolist()}")
    earn = exports.entries.T @ prices.values
    return imports.entries @ (earn / spend) - exports.entries.sum(axis=1)


def balance_vector(
    imports: ImportMatrix, exports: ExportMatrix, prices: PriceVector
) -> np.ndarray:
    """Per-country trade balance: export value minus import value."""
    _require_same_shape(imports, exports)
    if prices.values.shape[0] != imports.good_count:
        raise DimensionMismatch(
            f"{prices.values.shape[0]} prices for {imports.good_count} goods"
        )
    return exports.entries.T @ prices.values - imports.entries.T @ prices.values


def _require_same_shape(imports: ImportMatrix, exports: ExportMatrix) -> None:
    if imports.entries.shape != exports.entries.shape:
        raise DimensionMismatch(
            f"import matrix {imports.entries.shape} and export matrix "
            f"{exports.entries.shape} differ in shape"
        )
