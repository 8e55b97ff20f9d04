"""Command line interface.

Four scenario commands share one pipeline: validate the inputs,
build the zero-balance export structure, solve for clearing prices,
and evaluate a tariff reduction.  Each runs locally by default, or as a
thin client against a running service instance via --server.  A fifth
command, serve, starts that service.

Exit codes: 0 success, 2 validation failure, 3 convergence failure,
4 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import sys

from .equilibrium import DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE
from .errors import InputFormatError, TradeClearError
from .ingest import LabeledVector, load_matrix, read_flow_records
from .reporting import render_matrix_csv, render_structured, render_text, write_text
from .scenario import ScenarioConfig, resolve_reduction, run_scenario

__all__ = ["build_parser", "main"]

_SCENARIO_COMMANDS = (
    ("validate", "run every validator and report the verdicts"),
    ("build-exports", "construct the zero-balance export matrix"),
    ("solve", "solve for the market-clearing price vector"),
    ("tariff", "solve, then price a per-good tariff reduction"),
)


class _RemoteError(TradeClearError):
    """An error response from a service instance, carrying its exit code."""

    def __init__(self, message, exit_code):
        super().__init__(message)
        self.exit_code = exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tradeclear",
        description="Zero-balance trade structures, clearing prices, tariff scenarios.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_text in _SCENARIO_COMMANDS:
        command = subparsers.add_parser(name, help=help_text, description=help_text)
        command.add_argument(
            "--flows", metavar="PATH", help="long-form flow table (exporter,importer,good,quantity)"
        )
        command.add_argument(
            "--imports", metavar="PATH", help="labeled import matrix, goods by countries"
        )
        command.add_argument(
            "--tau",
            metavar="PATH",
            required=True,
            help="labeled allocation matrix, countries by goods, rows summing to 1",
        )
        if name in ("validate", "tariff"):
            command.add_argument(
                "--reduction",
                metavar="FACTORS",
                required=name == "tariff",
                help="per-good factors in (0,1]: a good,factor file or an inline list like 0.5,1",
            )
        command.add_argument(
            "--tol",
            type=float,
            default=DEFAULT_TOLERANCE,
            help="iteration stopping tolerance (default %(default)g)",
        )
        command.add_argument(
            "--max-iter",
            type=int,
            default=DEFAULT_MAX_ITERATIONS,
            dest="max_iter",
            help="iteration budget (default %(default)s)",
        )
        command.add_argument(
            "--format",
            choices=("text", "structured"),
            default="text",
            help="output form: human text or deterministic structured report",
        )
        command.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
        command.add_argument(
            "--server", metavar="URL", help="send the run to a service instance at this URL"
        )
    serve = subparsers.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _grid_payload(grid) -> dict:
    return {
        "row_labels": list(grid.row_labels),
        "column_labels": list(grid.col_labels),
        "values": grid.values.tolist(),
    }


def _payload(config: ScenarioConfig) -> dict:
    payload: dict = {}
    if config.flows_path is not None:
        payload["flows"] = [
            {"exporter": exporter, "importer": importer, "good": good, "quantity": quantity}
            for exporter, importer, good, quantity in read_flow_records(config.flows_path)
        ]
    else:
        payload["imports"] = _grid_payload(load_matrix(config.imports_path))
    payload["tau"] = _grid_payload(load_matrix(config.tau_path))
    if config.reduction is not None:
        resolved = resolve_reduction(config.reduction)
        if isinstance(resolved, LabeledVector):
            payload["reduction"] = {
                label: float(value) for label, value in zip(resolved.labels, resolved.values)
            }
        else:
            payload["reduction"] = [float(value) for value in resolved]
    payload["tolerance"] = config.tolerance
    payload["max_iterations"] = config.max_iterations
    return payload


def _remote_report(server: str, config: ScenarioConfig) -> dict:
    import httpx

    url = server.rstrip("/") + "/" + config.command
    try:
        response = httpx.post(url, json=_payload(config), timeout=120.0)
    except httpx.HTTPError as exc:
        raise InputFormatError(f"cannot reach {url}: {exc}") from exc
    if response.status_code == 200:
        return response.json()
    if response.status_code == 422:
        body = response.json()
        if isinstance(body, dict) and "exit_code" in body:
            raise _RemoteError(body.get("message", "request failed"), int(body["exit_code"]))
        raise InputFormatError(f"request rejected by {url}: {body}")
    raise InputFormatError(f"unexpected status {response.status_code} from {url}")


def _render(report: dict, config: ScenarioConfig) -> str:
    if config.output_format == "structured":
        return render_structured(report)
    if config.command == "build-exports" and "structure" in report:
        goods = report["inputs"]["goods"]
        countries = report["inputs"]["countries"]
        grid = report["structure"]["ideal_exports"]
        values = [[grid[good][country] for country in countries] for good in goods]
        return render_matrix_csv(goods, countries, values, corner="good")
    return render_text(report)


def _run(args: argparse.Namespace) -> int:
    config = ScenarioConfig(
        command=args.command,
        flows_path=args.flows,
        imports_path=args.imports,
        tau_path=args.tau,
        reduction=getattr(args, "reduction", None),
        tolerance=args.tol,
        max_iterations=args.max_iter,
        output_format=args.format,
        output_path=args.out,
    )
    if args.server:
        report = _remote_report(args.server, config)
        exit_code = int(report["status"]["exit_code"])
    else:
        result = run_scenario(config)
        report, exit_code = result.report, result.exit_code
    rendered = _render(report, config)
    if config.output_path:
        write_text(config.output_path, rendered)
    else:
        sys.stdout.write(rendered)
    return exit_code


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return _serve(args)
        return _run(args)
    except TradeClearError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
