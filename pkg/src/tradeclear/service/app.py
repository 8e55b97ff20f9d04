"""HTTP service exposing the scenario pipeline.

Each endpoint accepts the same inputs the files carry, runs the shared
evaluation pipeline, and returns the report tree.  Validation failures
are ordinary 200 responses whose status section says so; package errors
(bad payload values, a solver that ran out of iterations) map to a 422
with the process exit code the command line would have used.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import TradeClearError
from ..ingest import LabeledMatrix, LabeledVector, flows_from_records
from ..scenario import ScenarioInputs, evaluate, inputs_from_flow_set, inputs_from_matrices
from .schemas import (
    HealthModel,
    RunReportModel,
    ScenarioRequest,
    TariffRequest,
    ValidateRequest,
)

__all__ = ["create_app"]


def _matrix(payload) -> LabeledMatrix:
    return LabeledMatrix(
        tuple(payload.row_labels),
        tuple(payload.column_labels),
        np.array(payload.values, dtype=float).reshape(
            len(payload.row_labels), len(payload.column_labels)
        ),
    )


def _reduction(raw):
    if raw is None:
        return None
    if isinstance(raw, dict):
        return LabeledVector(tuple(raw), np.array(list(raw.values()), dtype=float))
    return np.asarray(raw, dtype=float)


def _pairs(schedule):
    if schedule is None:
        return None
    return {(pair.source, pair.target): dict(pair.factors) for pair in schedule}


def _inputs(request, reduction=None, reduction_pairs=None, tariff_factors=None) -> ScenarioInputs:
    tau_grid = _matrix(request.tau)
    if request.flows is not None:
        flow_set = flows_from_records(
            [(f.exporter, f.importer, f.good, f.quantity) for f in request.flows]
        )
        return inputs_from_flow_set(
            flow_set,
            tau_grid,
            reduction=reduction,
            reduction_pairs=reduction_pairs,
            tariff_factors=tariff_factors,
            source="payload:flows",
        )
    return inputs_from_matrices(
        _matrix(request.imports),
        tau_grid,
        reduction=reduction,
        reduction_pairs=reduction_pairs,
        tariff_factors=tariff_factors,
        source="payload:matrix",
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="tradeclear",
        version=__version__,
        description="Zero-balance trade structures, clearing prices, tariff scenarios.",
    )

    @app.exception_handler(TradeClearError)
    async def _package_error(_request: Request, exc: TradeClearError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={
                "error": type(exc).__name__,
                "message": str(exc),
                "exit_code": exc.exit_code,
            },
        )

    @app.get("/health", response_model=HealthModel)
    def health() -> HealthModel:
        return HealthModel(status="ok", version=__version__)

    @app.post(
        "/validate", response_model=RunReportModel, response_model_exclude_none=True
    )
    def validate(request: ValidateRequest) -> dict:
        inputs = _inputs(
            request,
            reduction=_reduction(request.reduction),
            reduction_pairs=_pairs(request.reduction_schedule),
        )
        result = evaluate(
            inputs, "validate", request.tolerance, request.max_iterations
        )
        return result.report

    @app.post(
        "/build-exports", response_model=RunReportModel, response_model_exclude_none=True
    )
    def build_exports(request: ScenarioRequest) -> dict:
        result = evaluate(
            _inputs(request), "build-exports", request.tolerance, request.max_iterations
        )
        return result.report

    @app.post("/solve", response_model=RunReportModel, response_model_exclude_none=True)
    def solve(request: ScenarioRequest) -> dict:
        result = evaluate(
            _inputs(request), "solve", request.tolerance, request.max_iterations
        )
        return result.report

    @app.post("/tariff", response_model=RunReportModel, response_model_exclude_none=True)
    def tariff(request: TariffRequest) -> dict:
        inputs = _inputs(
            request,
            reduction=_reduction(request.reduction),
            reduction_pairs=_pairs(request.reduction_schedule),
            tariff_factors=_pairs(request.tariff_factors),
        )
        result = evaluate(inputs, "tariff", request.tolerance, request.max_iterations)
        return result.report

    return app
