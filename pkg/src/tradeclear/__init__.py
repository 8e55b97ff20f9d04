"""Zero-balance trade structures, clearing prices, and tariff scenarios.

The library aggregates bilateral trade flows, constructs the export
structure under which every country's trade balance is exactly zero,
solves for the market-clearing price vector by fixed-point iteration,
and evaluates per-good tariff reductions in closed form.  Every result
is certified by recomputed residuals rather than solver internals.
"""

from .equilibrium import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    EquilibriumSolution,
    PriceMapMatrix,
    PriceVector,
    balance_vector,
    build_price_map,
    clearing_residual,
    country_values,
    solve_prices,
    verify_stationarity,
)
from .errors import (
    AsymmetricSchedule,
    ConfigError,
    ConvergenceFailure,
    DimensionMismatch,
    EmptyInput,
    FactorOutOfRange,
    InputFormatError,
    IrreducibilityViolation,
    NegativeEntry,
    NegativeQuantity,
    NonNumericCell,
    ParseError,
    PositivityViolation,
    RaggedRows,
    SelfFlow,
    TradeClearError,
    ZeroSpend,
)
from .flows import (
    BilateralFlowSet,
    ExportMatrix,
    ImportMatrix,
    ValidationReport,
    Violation,
    aggregate_flows,
    validate_conservation,
    validate_positivity,
)
from .ingest import (
    LabeledMatrix,
    LabeledVector,
    flows_from_records,
    load_flows,
    load_matrix,
    load_reduction_file,
    parse_inline_reduction,
    read_flow_records,
)
from .reporting import (
    float_repr,
    render_matrix_csv,
    render_structured,
    render_text,
    write_text,
)
from .scenario import (
    COMMANDS,
    ScenarioConfig,
    ScenarioInputs,
    ScenarioResult,
    evaluate,
    inputs_from_flow_set,
    inputs_from_matrices,
    load_inputs,
    resolve_reduction,
    run_scenario,
)
from .structure import (
    GoodsCouplingMatrix,
    IrreducibilityReport,
    MixingMatrix,
    TauMatrix,
    build_goods_coupling,
    build_ideal_exports,
    build_mixing_matrix,
    check_irreducible,
    strongly_connected_components,
    validate_tau,
)
from .tariffs import (
    PriceImpact,
    ReductionSchedule,
    ReductionVector,
    TariffOutcome,
    TariffSchedule,
    apply_reduction,
    collapse_reductions,
    compose_reductions,
    evaluate_tariff,
    price_impact_report,
    tariff_equilibrium,
    verify_tariff_solution,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DEFAULT_TOLERANCE",
    "DEFAULT_MAX_ITERATIONS",
    "COMMANDS",
    "BilateralFlowSet",
    "ImportMatrix",
    "ExportMatrix",
    "ValidationReport",
    "Violation",
    "TauMatrix",
    "MixingMatrix",
    "GoodsCouplingMatrix",
    "IrreducibilityReport",
    "PriceVector",
    "PriceMapMatrix",
    "EquilibriumSolution",
    "TariffSchedule",
    "ReductionSchedule",
    "ReductionVector",
    "PriceImpact",
    "TariffOutcome",
    "LabeledMatrix",
    "LabeledVector",
    "ScenarioConfig",
    "ScenarioInputs",
    "ScenarioResult",
    "aggregate_flows",
    "validate_conservation",
    "validate_positivity",
    "validate_tau",
    "build_mixing_matrix",
    "build_goods_coupling",
    "build_ideal_exports",
    "check_irreducible",
    "strongly_connected_components",
    "build_price_map",
    "solve_prices",
    "country_values",
    "verify_stationarity",
    "clearing_residual",
    "balance_vector",
    "collapse_reductions",
    "compose_reductions",
    "apply_reduction",
    "tariff_equilibrium",
    "verify_tariff_solution",
    "price_impact_report",
    "evaluate_tariff",
    "read_flow_records",
    "load_flows",
    "flows_from_records",
    "load_matrix",
    "load_reduction_file",
    "parse_inline_reduction",
    "inputs_from_flow_set",
    "inputs_from_matrices",
    "load_inputs",
    "resolve_reduction",
    "evaluate",
    "run_scenario",
    "float_repr",
    "render_structured",
    "render_text",
    "render_matrix_csv",
    "write_text",
    "TradeClearError",
    "DimensionMismatch",
    "NegativeEntry",
    "PositivityViolation",
    "IrreducibilityViolation",
    "ZeroSpend",
    "AsymmetricSchedule",
    "FactorOutOfRange",
    "ConfigError",
    "ConvergenceFailure",
    "InputFormatError",
    "ParseError",
    "SelfFlow",
    "NegativeQuantity",
    "RaggedRows",
    "NonNumericCell",
    "EmptyInput",
]
