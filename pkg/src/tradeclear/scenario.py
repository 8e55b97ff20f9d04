"""Scenario orchestration: load, validate, build, solve, report.

A scenario runs the pipeline behind every command: ingest the trade
data, align labels, run the validators, construct the export structure,
solve for clearing prices, optionally evaluate a tariff reduction, and
assemble the deterministic report tree.  Validation failures produce a
failure report with exit code 2; solver and ingestion errors propagate
as exceptions carrying their own exit codes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .equilibrium import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    balance_vector,
    solve_prices,
    verify_stationarity,
)
from .errors import AsymmetricSchedule, ConfigError, InputFormatError
from .flows import (
    BilateralFlowSet,
    ExportMatrix,
    ImportMatrix,
    ValidationReport,
    aggregate_flows,
    validate_conservation,
    validate_positivity,
)
from .ingest import (
    LabeledMatrix,
    LabeledVector,
    load_flows,
    load_matrix,
    load_reduction_file,
    parse_inline_reduction,
)
from .reporting import REPORT_NAME, REPORT_VERSION, matrix_map, vector_map
from .structure import (
    TauMatrix,
    build_goods_coupling,
    build_ideal_exports,
    build_mixing_matrix,
    check_irreducible,
    validate_tau,
)
from .tariffs import (
    ReductionSchedule,
    ReductionVector,
    collapse_reductions,
    evaluate_tariff,
    price_impact_report,
)

__all__ = [
    "COMMANDS",
    "ScenarioConfig",
    "ScenarioInputs",
    "ScenarioResult",
    "inputs_from_flow_set",
    "inputs_from_matrices",
    "resolve_reduction",
    "load_inputs",
    "evaluate",
    "run_scenario",
]

COMMANDS = ("validate", "build-exports", "solve", "tariff")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one run needs: command, input locations, solver knobs, output."""

    command: str
    flows_path: Optional[str] = None
    imports_path: Optional[str] = None
    tau_path: Optional[str] = None
    reduction: Optional[str] = None
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    output_format: str = "structured"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if (self.flows_path is None) == (self.imports_path is None):
            raise ConfigError("give exactly one of a flows file or an import matrix file")
        if self.tau_path is None:
            raise ConfigError("an allocation matrix file is required")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ConfigError(f"max iterations must be at least 1, got {self.max_iterations!r}")
        if self.output_format not in ("text", "structured"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.command == "tariff" and self.reduction is None:
            raise ConfigError("the tariff command needs a reduction vector")
        if self.command in ("solve", "build-exports") and self.reduction is not None:
            raise ConfigError(f"the {self.command} command takes no reduction")


@dataclass(frozen=True)
class ScenarioInputs:
    """Label-aligned inputs ready for evaluation.

    ``tau_values`` and reduction data stay raw arrays here: range and
    row-sum validation is the evaluator's job, so that bad values show
    up in the report instead of an exception.  ``alignment_problems``
    collects label mismatches that made alignment impossible.
    """

    source: str
    countries: tuple[str, ...]
    goods: tuple[str, ...]
    imports: ImportMatrix
    observed_exports: Optional[ExportMatrix] = None
    tau_values: Optional[np.ndarray] = None
    reduction_values: Optional[np.ndarray] = None
    reduction_pairs: Optional[Mapping] = None
    tariff_factors: Optional[Mapping] = None
    alignment_problems: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScenarioResult:
    """Finished report tree plus the process exit code it implies."""

    report: dict
    exit_code: int

    @property
    def passed(self) -> bool:
        return self.exit_code == 0


def _align_tau(countries, goods, grid: LabeledMatrix):
    """Reorder an allocation grid to (countries, goods); report label mismatches."""
    problems = []
    row_set, col_set = set(grid.row_labels), set(grid.col_labels)
    missing = [c for c in countries if c not in row_set]
    if missing:
        problems.append(f"allocation matrix missing countries: {', '.join(missing)}")
    extra = [r for r in grid.row_labels if r not in set(countries)]
    if extra:
        problems.append(f"allocation matrix has unknown rows: {', '.join(extra)}")
    missing_goods = [g for g in goods if g not in col_set]
    if missing_goods:
        problems.append(f"allocation matrix missing goods: {', '.join(missing_goods)}")
    extra_goods = [c for c in grid.col_labels if c not in set(goods)]
    if extra_goods:
        problems.append(f"allocation matrix has unknown columns: {', '.join(extra_goods)}")
    if problems:
        return None, problems
    row_index = {label: i for i, label in enumerate(grid.row_labels)}
    col_index = {label: j for j, label in enumerate(grid.col_labels)}
    rows = [row_index[c] for c in countries]
    cols = [col_index[g] for g in goods]
    return grid.values[np.ix_(rows, cols)], []


def _align_reduction(goods, reduction):
    """Order reduction factors by good; positional vectors must match the count."""
    if isinstance(reduction, LabeledVector):
        label_set = set(reduction.labels)
        missing = [g for g in goods if g not in label_set]
        extra = [l for l in reduction.labels if l not in set(goods)]
        problems = []
        if missing:
            problems.append(f"reduction missing goods: {', '.join(missing)}")
        if extra:
            problems.append(f"reduction has unknown goods: {', '.join(extra)}")
        if problems:
            return None, problems
        index = {label: k for k, label in enumerate(reduction.labels)}
        return reduction.values[[index[g] for g in goods]], []
    vec = np.asarray(reduction, dtype=float)
    if vec.ndim != 1 or vec.size != len(goods):
        return None, [f"reduction lists {vec.size} factors for {len(goods)} goods"]
    return vec, []


def _align_pairs(countries, goods, pairs, what: str):
    """Order per-pair factor maps by good; pairs must name known countries."""
    problems = []
    aligned = {}
    country_set, good_set = set(countries), set(goods)
    for raw_pair in sorted(pairs):
        pair = tuple(str(part) for part in raw_pair)
        if len(pair) != 2:
            problems.append(f"{what} pair {raw_pair!r} must name exactly two countries")
            continue
        unknown = [c for c in pair if c not in country_set]
        if unknown:
            problems.append(f"{what} pair {pair} names unknown countries: {', '.join(unknown)}")
        factors = dict(pairs[raw_pair])
        missing = [g for g in goods if g not in factors]
        extra = [g for g in factors if g not in good_set]
        if missing:
            problems.append(f"{what} for pair {pair} missing goods: {', '.join(missing)}")
        if extra:
            problems.append(f"{what} for pair {pair} has unknown goods: {', '.join(sorted(extra))}")
        if not unknown and not missing and not extra:
            aligned[pair] = np.array([float(factors[g]) for g in goods])
    if problems:
        return None, problems
    return aligned, []


def _assemble(
    source,
    countries,
    goods,
    imports,
    observed_exports,
    tau_grid,
    reduction,
    reduction_pairs,
    tariff_factors,
) -> ScenarioInputs:
    problems: list[str] = []
    tau_values, tau_problems = _align_tau(countries, goods, tau_grid)
    problems.extend(tau_problems)
    reduction_values = None
    if reduction is not None:
        reduction_values, reduction_problems = _align_reduction(goods, reduction)
        problems.extend(reduction_problems)
    aligned_pairs = None
    if reduction_pairs is not None:
        aligned_pairs, pair_problems = _align_pairs(
            countries, goods, reduction_pairs, "reduction schedule"
        )
        problems.extend(pair_problems)
    aligned_factors = None
    if tariff_factors is not None:
        aligned_factors, factor_problems = _align_pairs(
            countries, goods, tariff_factors, "tariff schedule"
        )
        problems.extend(factor_problems)
    return ScenarioInputs(
        source=source,
        countries=tuple(countries),
        goods=tuple(goods),
        imports=imports,
        observed_exports=observed_exports,
        tau_values=tau_values,
        reduction_values=reduction_values,
        reduction_pairs=aligned_pairs,
        tariff_factors=aligned_factors,
        alignment_problems=tuple(problems),
    )


def inputs_from_flow_set(
    flow_set: BilateralFlowSet,
    tau_grid: LabeledMatrix,
    reduction=None,
    reduction_pairs=None,
    tariff_factors=None,
    source: str = "flows",
) -> ScenarioInputs:
    imports, observed = aggregate_flows(flow_set)
    return _assemble(
        source,
        flow_set.countries,
        flow_set.goods,
        imports,
        observed,
        tau_grid,
        reduction,
        reduction_pairs,
        tariff_factors,
    )


def inputs_from_matrices(
    imports_grid: LabeledMatrix,
    tau_grid: LabeledMatrix,
    reduction=None,
    reduction_pairs=None,
    tariff_factors=None,
    source: str = "matrix",
) -> ScenarioInputs:
    imports = ImportMatrix(imports_grid.values)
    return _assemble(
        source,
        imports_grid.col_labels,
        imports_grid.row_labels,
        imports,
        None,
        tau_grid,
        reduction,
        reduction_pairs,
        tariff_factors,
    )


def resolve_reduction(argument: str):
    """A reduction argument is an existing file path, else an inline factor list."""
    if os.path.exists(argument):
        return load_reduction_file(argument)
    try:
        return parse_inline_reduction(argument)
    except InputFormatError as exc:
        raise InputFormatError(
            f"reduction {argument!r} is neither an existing file nor an inline "
            f"factor list ({exc})"
        ) from exc


def load_inputs(config: ScenarioConfig) -> ScenarioInputs:
    tau_grid = load_matrix(config.tau_path)
    reduction = None
    if config.reduction is not None:
        reduction = resolve_reduction(config.reduction)
    if config.flows_path is not None:
        flow_set = load_flows(config.flows_path)
        return inputs_from_flow_set(
            flow_set, tau_grid, reduction=reduction, source=f"flows:{config.flows_path}"
        )
    imports_grid = load_matrix(config.imports_path)
    return inputs_from_matrices(
        imports_grid, tau_grid, reduction=reduction, source=f"matrix:{config.imports_path}"
    )


def _check(report: ValidationReport, labels) -> dict:
    return {
        "checked": True,
        "passed": report.passed,
        "violations": [
            {
                "check": v.check,
                "index": int(v.index),
                "label": str(labels[v.index]),
                "magnitude": float(v.magnitude),
            }
            for v in report.violations
        ],
    }


def _skipped(reason: str) -> dict:
    return {"checked": False, "reason": reason}


def _norm(values) -> float:
    arr = np.asarray(values, dtype=float)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def evaluate(
    inputs: ScenarioInputs,
    command: str,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> ScenarioResult:
    """Run the pipeline for one command over aligned inputs."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    countries, goods = inputs.countries, inputs.goods
    imports = inputs.imports
    report: dict = {
        "report": REPORT_NAME,
        "version": REPORT_VERSION,
        "command": command,
        "inputs": {
            "source": inputs.source,
            "countries": list(countries),
            "goods": list(goods),
            "country_count": len(countries),
            "good_count": len(goods),
            "tolerance": float(tolerance),
            "max_iterations": int(max_iterations),
        },
    }

    validation: dict = {}
    failed: list[str] = []

    def record(name: str, check: dict) -> None:
        validation[name] = check
        if check["checked"] and not check["passed"]:
            failed.append(name)

    problems = list(inputs.alignment_problems)
    record("alignment", {"checked": True, "passed": not problems, "problems": problems})
    aligned = not problems

    if aligned:
        record("tau_rows", _check(validate_tau(inputs.tau_values), countries))
    else:
        validation["tau_rows"] = _skipped("alignment failed")
    tau_ok = aligned and validation["tau_rows"].get("passed", False)

    record("positivity", _check(validate_positivity(imports), goods))
    positivity_ok = validation["positivity"]["passed"]

    if tau_ok:
        coupling = build_goods_coupling(imports, TauMatrix(inputs.tau_values))
        verdict = check_irreducible(coupling)
        check = {"checked": True, "passed": verdict.irreducible}
        if not verdict.irreducible:
            check["components"] = [
                [goods[k] for k in component] for component in verdict.components
            ]
        record("irreducibility", check)
    else:
        validation["irreducibility"] = _skipped("allocation matrix unavailable")
    irreducible_ok = tau_ok and validation["irreducibility"].get("passed", False)

    structure_ok = tau_ok and positivity_ok and irreducible_ok
    tau_exact = mixing = ideal_exports = None
    if structure_ok:
        tau_exact = TauMatrix(inputs.tau_values).normalized()
        mixing = build_mixing_matrix(imports, tau_exact)
        ideal_exports = build_ideal_exports(imports, tau_exact)

    if inputs.observed_exports is not None:
        record(
            "conservation",
            _check(validate_conservation(imports, inputs.observed_exports), goods),
        )
    elif ideal_exports is not None:
        record("conservation", _check(validate_conservation(imports, ideal_exports), goods))
    else:
        validation["conservation"] = _skipped("export structure unavailable")

    reduction_values = inputs.reduction_values
    has_reduction = reduction_values is not None or inputs.reduction_pairs is not None
    if has_reduction:
        range_violations = []
        if reduction_values is not None:
            vectors = {None: reduction_values}
        else:
            vectors = dict(inputs.reduction_pairs)
        for pair in sorted(vectors, key=lambda p: p or ()):
            vector = vectors[pair]
            for k in np.nonzero(~((vector > 0.0) & (vector <= 1.0)))[0]:
                entry = {"check": "reduction_range", "index": int(k), "label": goods[k]}
                if pair is not None:
                    entry["pair"] = list(pair)
                entry["magnitude"] = float(vector[k])
                range_violations.append(entry)
        record(
            "reduction_range",
            {"checked": True, "passed": not range_violations, "violations": range_violations},
        )
        range_ok = not range_violations

        if inputs.reduction_pairs is not None:
            if range_ok:
                schedule = ReductionSchedule(inputs.reduction_pairs)
                try:
                    reduction_values = collapse_reductions(schedule).values
                    record(
                        "reduction_symmetry",
                        {"checked": True, "passed": True, "violations": []},
                    )
                except AsymmetricSchedule as exc:
                    record(
                        "reduction_symmetry",
                        {
                            "checked": True,
                            "passed": False,
                            "violations": [
                                {
                                    "check": "reduction_symmetry",
                                    "index": int(exc.good),
                                    "label": goods[exc.good],
                                    "pair": list(exc.pair),
                                    "magnitude": 0.0,
                                }
                            ],
                        },
                    )
            else:
                validation["reduction_symmetry"] = _skipped("factors out of range")

    report["validation"] = validation

    if failed:
        report["status"] = {
            "outcome": "validation_failed",
            "exit_code": 2,
            "failed_checks": failed,
        }
        return ScenarioResult(report, 2)

    if command == "validate":
        report["status"] = {"outcome": "ok", "exit_code": 0, "failed_checks": []}
        return ScenarioResult(report, 0)

    structure: dict = {
        "imports": matrix_map(goods, countries, imports.entries),
        "mixing": matrix_map(countries, countries, mixing.entries),
        "mixing_row_stochastic": mixing.row_stochastic(),
    }
    mixing_verdict = check_irreducible(mixing)
    structure["mixing_irreducible"] = mixing_verdict.irreducible
    if not mixing_verdict.irreducible:
        structure["mixing_components"] = [
            [countries[i] for i in component] for component in mixing_verdict.components
        ]
    structure["ideal_exports"] = matrix_map(goods, countries, ideal_exports.entries)
    if inputs.observed_exports is not None:
        structure["observed_exports"] = matrix_map(
            goods, countries, inputs.observed_exports.entries
        )
        structure["ideal_observed_gap"] = _norm(
            ideal_exports.entries - inputs.observed_exports.entries
        )
    report["structure"] = structure

    if command == "build-exports":
        report["status"] = {"outcome": "ok", "exit_code": 0, "failed_checks": []}
        return ScenarioResult(report, 0)

    solution = solve_prices(imports, tau_exact, tolerance, max_iterations)
    stationarity = verify_stationarity(mixing, solution.country_values)
    report["equilibrium"] = {
        "prices": vector_map(goods, solution.prices.values),
        "lambda": float(solution.eigenvalue),
        "country_values": vector_map(countries, solution.country_values),
        "value_shares": vector_map(countries, solution.value_shares()),
        "iterations": int(solution.iterations),
        "step_delta": float(solution.step_delta),
        "clearing_residual": vector_map(goods, solution.clearing_residual),
        "clearing_residual_norm": _norm(solution.clearing_residual),
        "balance": vector_map(countries, solution.balance_residual),
        "balance_norm": _norm(solution.balance_residual),
        "stationarity": _check(stationarity, countries),
    }

    if command == "solve":
        report["status"] = {"outcome": "ok", "exit_code": 0, "failed_checks": []}
        return ScenarioResult(report, 0)

    if reduction_values is None:
        raise ConfigError("the tariff command needs a reduction vector")
    reduction = ReductionVector(reduction_values)
    outcome = evaluate_tariff(imports, ideal_exports, solution.prices, reduction)
    impact = price_impact_report(solution.prices, reduction)
    scaled_balance = balance_vector(
        outcome.scaled_imports, outcome.scaled_exports, outcome.raw_prices
    )
    tariff: dict = {
        "reduction": vector_map(goods, reduction.values),
        "raw_prices": vector_map(goods, outcome.raw_prices.values),
        "normalized_prices": vector_map(goods, outcome.normalized_prices.values),
        "price_ratios": vector_map(goods, outcome.price_ratios),
        "increased_goods": [goods[k] for k in impact.increased_goods],
        "restricted_residual": vector_map(goods, outcome.residual),
        "restricted_residual_norm": _norm(outcome.residual),
        "scaled_balance_norm": _norm(scaled_balance),
    }
    if inputs.tariff_factors:
        tariff["tariff_factors"] = {
            f"{pair[0]}->{pair[1]}": vector_map(goods, inputs.tariff_factors[pair])
            for pair in sorted(inputs.tariff_factors)
        }
    report["tariff"] = tariff
    report["status"] = {"outcome": "ok", "exit_code": 0, "failed_checks": []}
    return ScenarioResult(report, 0)


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Load the configured inputs and evaluate the configured command."""
    inputs = load_inputs(config)
    return evaluate(
        inputs,
        config.command,
        tolerance=config.tolerance,
        max_iterations=config.max_iterations,
    )
