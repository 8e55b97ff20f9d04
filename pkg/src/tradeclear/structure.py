"""Construction of the balanced export structure from imports and allocation shares.

Given an import matrix and a row-stochastic allocation matrix, the export
side of the world market is rebuilt so that every unit imported is matched
by exports recombined from the same import pattern.  The coupling between
goods must form a single strongly connected block for the construction to
admit a clearing price.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IrreducibilityViolation, NegativeEntry, PositivityViolation
from .flows import ExportMatrix, ImportMatrix, ValidationReport, Violation, _nonnegative_matrix

__all__ = [
    "TauMatrix",
    "MixingMatrix",
    "GoodsCouplingMatrix",
    "IrreducibilityReport",
    "validate_tau",
    "build_mixing_matrix",
    "build_goods_coupling",
    "check_irreducible",
    "build_ideal_exports",
    "strongly_connected_components",
]

TAU_ROW_TOL = 1e-12


@dataclass(frozen=True)
class TauMatrix:
    """Allocation shares, countries by goods.

    Entry ``[k, j]`` is the share of country k's import value directed to
    supplying good j.  Rows are expected to sum to one; ``normalized``
    divides the small residual out exactly.
    """

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _nonnegative_matrix(self.entries, "allocation matrix"))

    @property
    def country_count(self) -> int:
        return self.entries.shape[0]

    @property
    def good_count(self) -> int:
        return self.entries.shape[1]

    def normalized(self) -> "TauMatrix":
        sums = self.entries.sum(axis=1)
        if np.any(sums <= 0):
            raise PositivityViolation("allocation matrix has an all-zero row")
        return TauMatrix(self.entries / sums[:, None])


@dataclass(frozen=True)
class MixingMatrix:
    """Countries-by-countries recombination weights applied to imports.

    Row k describes how country k's exports are assembled from the import
    bundles of each country; rows sum to one whenever the allocation rows do.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = _nonnegative_matrix(self.entries, "mixing matrix")
        if arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"mixing matrix must be square, got {arr.shape}")
        object.__setattr__(self, "entries", arr)

    def row_stochastic(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.entries.sum(axis=1) - 1.0) <= tol))


@dataclass(frozen=True)
class GoodsCouplingMatrix:
    """Goods-by-goods coupling: how demand for one good feeds supply of another."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _nonnegative_matrix(self.entries, "goods coupling matrix")
        if arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"goods coupling matrix must be square, got {arr.shape}")
        object.__setattr__(self, "entries", arr)


@dataclass(frozen=True)
class IrreducibilityReport:
    """Verdict plus the strongly connected components in condensation order."""

    irreducible: bool
    components: tuple[tuple[int, ...], ...]


def validate_tau(tau, tol: float = TAU_ROW_TOL) -> ValidationReport:
    """Check that allocation rows are nonnegative and sum to one within tol.

    Accepts a TauMatrix or a raw array, so unchecked file input can be
    validated before the typed wrapper (which rejects negatives) is built.
    """
    entries = np.asarray(getattr(tau, "entries", tau), dtype=float)
    violations = []
    for k, row in enumerate(entries):
        if np.any(row < 0):
            violations.append(Violation("tau_nonnegative", k, float(row.min())))
            continue
        gap = abs(float(row.sum()) - 1.0)
        if gap > tol:
            violations.append(Violation("tau_row_sum", k, gap))
    return ValidationReport.from_violations(violations)


def build_mixing_matrix(imports: ImportMatrix, tau: TauMatrix) -> MixingMatrix:
    """Combine allocation shares with world import shares of each good.

    Entry ``[k, s]`` sums, over goods, country k's allocation to a good
    times country s's share of that good's world imports.  Rows inherit
    the unit sums of the allocation rows.
    """
    _require_compatible(imports, tau)
    world = imports.world_imports()
    if np.any(world <= 0):
        bad = np.nonzero(world <= 0)[0]
        raise PositivityViolation(
            f"goods with zero world imports: {bad.tolist()}; import shares are undefined"
        )
    shares = imports.entries / world[:, None]
    return MixingMatrix(tau.entries @ shares)


def build_goods_coupling(imports: ImportMatrix, tau: TauMatrix) -> GoodsCouplingMatrix:
    """Multiply imports by allocation shares to couple goods to goods."""
    _require_compatible(imports, tau)
    return GoodsCouplingMatrix(imports.entries @ tau.entries)


def _require_compatible(imports: ImportMatrix, tau: TauMatrix) -> None:
    n, l = imports.entries.shape
    if tau.entries.shape != (l, n):
        raise DimensionMismatch(
            f"allocation matrix {tau.entries.shape} does not match imports "
            f"{imports.entries.shape}; expected {(l, n)}"
        )


def strongly_connected_components(adjacency: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative so deep graphs do not hit the recursion limit.

    Returns components in reverse discovery order, which is the topological
    order of the condensation (sources first).
    """
    n = len(adjacency)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, edge_pos = work[-1]
            if edge_pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            neighbors = adjacency[v]
            for pos in range(edge_pos, len(neighbors)):
                w = neighbors[pos]
                if index[w] == -1:
                    work[-1] = (v, pos + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(sorted(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    components.reverse()
    return components


def check_irreducible(matrix) -> IrreducibilityReport:
    """Decide whether a nonnegative square matrix is irreducible.

    An edge i -> j exists whenever the entry is strictly positive, with no
    epsilon: near-zero noise should be rounded away by the caller.  The
    matrix is irreducible exactly when that graph is strongly connected.
    """
    arr = np.asarray(getattr(matrix, "entries", matrix), dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"irreducibility needs a square matrix, got shape {arr.shape}")
    if np.any(arr < 0):
        raise NegativeEntry("irreducibility is defined for nonnegative matrices only")
    adjacency = [np.nonzero(arr[i] > 0)[0].tolist() for i in range(arr.shape[0])]
    components = strongly_connected_components(adjacency)
    return IrreducibilityReport(
        irreducible=len(components) == 1,
        components=tuple(tuple(c) for c in components),
    )


def build_ideal_exports(imports: ImportMatrix, tau: TauMatrix) -> ExportMatrix:
    """Build the export matrix that balances every country's trade.

    Each good's supply is routed through the goods coupling matrix and
    distributed across countries in proportion to their share of world
    imports.  Requires every good to be imported somewhere and the goods
    coupling to be irreducible; the result conserves world totals per good
    and factors through the mixing matrix.
    """
    _require_compatible(imports, tau)
    world = imports.world_imports()
    if np.any(world <= 0):
        bad = np.nonzero(world <= 0)[0]
        raise PositivityViolation(
            f"goods with zero world imports: {bad.tolist()}; export construction is undefined"
        )
    coupling = build_goods_coupling(imports, tau)
    verdict = check_irreducible(coupling)
    if not verdict.irreducible:
        raise IrreducibilityViolation(
            f"goods coupling splits into {len(verdict.components)} blocks",
            components=verdict.components,
        )
    shares = imports.entries / world[:, None]
    return ExportMatrix(coupling.entries @ shares)
