"""Command-line interface of kontsevich-ncis."""

from __future__ import annotations

import json
import logging
from collections.abc import Callable
from dataclasses import asdict
from typing import Any

import polars as pl
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table
from tyro.conf import OmitArgPrefixes
from tyro.extras import SubcommandApp

from .config import (
    BracketConfig,
    CommonConfig,
    EvalConfig,
    FlowConfig,
    LogLevel,
    ResourceGuardError,
    ResourceLimits,
    SimulateConfig,
    SpanConfig,
    VerifyConfig,
)
from .cyclic import project
from .dbracket import double_bracket, loday_bracket, taylor_flow
from .lax import span_experiment
from .numrep import (
    BlowUpError,
    SingularRepresentationError,
    backlund_check,
    conservation_report,
    convergence_order,
    integrate,
    random_rep,
)
from .parsers import ExpressionError, parse, render
from .specialize import abelianize, qweyl_normal_form
from .util import numeric_rng
from .verifiers import Verifier, reports_frame, run_suite
from .writers import NamedReport, ReportWriter

app = SubcommandApp()

LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_GUARD = 3

CONVERGENCE_ORDER = 4.0
CONVERGENCE_SLACK = 0.5


def _configure_logging(level: LogLevel) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
    )


def _emit(config: CommonConfig, payload: dict[str, Any], human: Callable[[Console], None]) -> None:
    console = Console()
    if config.json:
        console.print_json(json.dumps(payload, default=str))
    else:
        human(console)


def _write_report(config: CommonConfig, name: str, frame: pl.DataFrame) -> None:
    if config.output_dir is None:
        return
    writer = ReportWriter.create(config.output_format)
    path = writer.write(
        NamedReport(name, frame), config.output_dir, drop_null_columns=config.drop_null_columns
    )
    LOG.info("Wrote %s report to %s", name, path)


def _run(config: CommonConfig, body: Callable[[], int]) -> None:
    """Configure logging, run a command body and exit with its status."""
    _configure_logging(config.log_level)
    LOG.debug("Starting kontsevich-ncis with config: %s.", config)
    try:
        code = body()
    except ExpressionError as e:
        LOG.error("Invalid expression: %s", e)  # noqa: TRY400
        code = EXIT_INPUT
    except (ResourceGuardError, BlowUpError, SingularRepresentationError) as e:
        LOG.error("%s", e)  # noqa: TRY400
        code = EXIT_GUARD
    except Exception as e:
        if config.log_level == LogLevel.DEBUG:
            raise
        LOG.info(e)
        LOG.info("Exiting...")
        code = EXIT_INPUT if isinstance(e, ValueError) else EXIT_FAILED
    raise SystemExit(code)


@app.command(name="bracket")
def bracket(config: BracketConfig) -> None:
    """Compute the double bracket or the multiplied bracket of two expressions."""

    def body() -> int:
        a, b = parse(config.a), parse(config.b)
        result = render(double_bracket(a, b) if config.mode == "double" else loday_bracket(a, b))
        payload = {"mode": config.mode, "a": render(a), "b": render(b), "result": result}
        _emit(config, payload, lambda c: c.print(result))
        return EXIT_OK

    _run(config, body)


@app.command(name="flow")
def flow(config: FlowConfig) -> None:
    """Print the Taylor coefficients of x under the flow of a Hamiltonian."""

    def body() -> int:
        series = [render(e) for e in taylor_flow(parse(config.hamiltonian), parse(config.x), config.order)]

        def human(console: Console) -> None:
            for i, term in enumerate(series):
                console.print(f"[bold]d^{i}x/dt^{i}[/bold] = {term}")

        _emit(config, {"hamiltonian": config.hamiltonian, "x": config.x, "series": series}, human)
        _write_report(
            config, "flow", pl.DataFrame({"order": list(range(len(series))), "value": series})
        )
        return EXIT_OK

    _run(config, body)


@app.command(name="verify")
def verify(config: VerifyConfig) -> None:
    """Run a verification suite; exits 1 when an identity fails."""

    def body() -> int:
        reports = run_suite(config.suite, config, ResourceLimits.from_env())
        passed = all(r.passed for r in reports)

        def human(console: Console) -> None:
            table = Table(title=f"Suite {config.suite} (seed {config.seed})")
            for column in ("identity", "samples", "max terms", "elapsed (s)", "passed"):
                table.add_column(column)
            for r in reports:
                table.add_row(
                    escape(r.identity),
                    str(r.samples),
                    str(r.max_residual_terms),
                    f"{r.elapsed:.3f}",
                    "[green]yes[/green]" if r.passed else "[red]no[/red]",
                )
            console.print(table)
            for r in reports:
                if not r.passed and r.counterexample:
                    console.print(f"[red]{escape(r.identity)}[/red]: {escape(r.counterexample)}")

        _emit(
            config,
            {"config": asdict(config), "passed": passed, "reports": [r.to_dict() for r in reports]},
            human,
        )
        _write_report(config, f"verify_{config.suite}", reports_frame(reports))
        return EXIT_OK if passed else EXIT_FAILED

    _run(config, body)


@app.command(name="simulate")
def simulate(config: SimulateConfig) -> None:
    """Integrate the matrix equations of motion and report conservation drift."""

    def body() -> int:
        rep0 = random_rep(config.n, numeric_rng(config.seed), condition_bound=config.condition_bound)
        trajectory = integrate(rep0, config.t, config.dt, blow_up_norm=config.blow_up_norm)
        drift = conservation_report(trajectory, config.k_max, config.lambda_samples)
        checks = {"drift": drift.within(config.tolerance)}
        payload: dict[str, Any] = {
            "config": asdict(config),
            "steps": len(trajectory) - 1,
            "max_drift": drift.max_drift,
            "series": {name: values.tolist() for name, values in drift.series.items()},
        }
        if config.backlund:
            backlund = backlund_check(rep0, config.t, config.dt, blow_up_norm=config.blow_up_norm)
            deviation = backlund.max_deviation
            payload["backlund_max_deviation"] = deviation
            checks["backlund"] = deviation <= config.backlund_tolerance
        if config.convergence:
            order = convergence_order(rep0)
            payload["convergence_order"] = order
            checks["convergence"] = abs(order - CONVERGENCE_ORDER) <= CONVERGENCE_SLACK
        payload["checks"] = checks

        def human(console: Console) -> None:
            table = Table(title=f"N={config.n}, T={config.t}, dt={config.dt}, seed={config.seed}")
            table.add_column("quantity")
            table.add_column("max relative drift")
            for name, value in drift.max_drift.items():
                table.add_row(name, f"{value:.3e}")
            console.print(table)
            for key in ("backlund_max_deviation", "convergence_order"):
                if key in payload:
                    console.print(f"{key}: {payload[key]:.4g}")

        _emit(config, payload, human)
        _write_report(config, "drift", drift.to_frame())
        return EXIT_OK if all(checks.values()) else EXIT_FAILED

    _run(config, body)


@app.command(name="span")
def span(config: SpanConfig) -> None:
    """Express the trace integrals of L^k in the basis of h, c and c^-1 monomials."""

    def body() -> int:
        report = span_experiment(config.k_max, config.degree, ResourceLimits.from_env())

        def human(console: Console) -> None:
            table = Table(title=f"Degree bound {report.degree_bound}, basis size {len(report.basis_labels)}")
            for column in ("k", "lambda", "member", "integral", "coordinates"):
                table.add_column(column)
            for r in report.rows:
                table.add_row(
                    str(r.k),
                    str(r.exponent),
                    "[green]yes[/green]" if r.member else "[red]no[/red]",
                    str(r.trace_integral),
                    ", ".join(f"{v}*{k}" for k, v in r.coordinates.items()),
                )
            console.print(table)

        _emit(config, report.to_dict(), human)
        _write_report(config, "span", report.to_frame())
        return EXIT_OK if report.passed else EXIT_FAILED

    _run(config, body)


@app.command(name="eval")
def evaluate(config: EvalConfig) -> None:
    """Parse an expression and print its canonical form in the chosen view."""

    def body() -> int:
        e = parse(config.expression)
        views: dict[str, Callable[[], object]] = {
            "algebra": lambda: e,
            "cyclic": lambda: project(e),
            "classical": lambda: abelianize(e),
            "quantum": lambda: qweyl_normal_form(e),
        }
        result = str(views[config.view]())
        _emit(config, {"view": config.view, "result": result}, lambda c: c.print(result))
        return EXIT_OK

    _run(config, body)


@app.command(name="suites")
def suites() -> None:
    """List the available verification suites."""
    console = Console()
    console.rule("Available verification suites:")
    console.print(
        "\n".join(
            f"\t[bold green]{name}[/bold green]: {doc}" for name, doc in Verifier.suites_info().items()
        )
    )


def cli() -> None:
    """Command-line interface for the kontsevich-ncis package."""
    app.cli(config=(OmitArgPrefixes,))
