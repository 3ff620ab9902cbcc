"""Test the command-line subcommands."""

import json
from pathlib import Path

import polars as pl
import pytest

from kontsevich_ncis.algebra import casimir_c
from kontsevich_ncis.config import (
    MAX_TERMS_ENV,
    BracketConfig,
    EvalConfig,
    FlowConfig,
    SimulateConfig,
    SpanConfig,
    VerifyConfig,
)
from kontsevich_ncis.main import (
    EXIT_FAILED,
    EXIT_GUARD,
    EXIT_INPUT,
    EXIT_OK,
    bracket,
    evaluate,
    flow,
    simulate,
    span,
    suites,
    verify,
)
from kontsevich_ncis.parsers import parse


def run(command, config) -> int:
    with pytest.raises(SystemExit) as exc_info:
        command(config)
    return exc_info.value.code


def json_output(capsys: pytest.CaptureFixture[str]) -> dict:
    return json.loads(capsys.readouterr().out)


def test_bracket_loday(capsys: pytest.CaptureFixture[str]):
    assert run(bracket, BracketConfig("v", "u", json=True)) == EXIT_OK
    assert json_output(capsys) == {"mode": "loday", "a": "v", "b": "u", "result": "u*v"}


def test_bracket_double(capsys: pytest.CaptureFixture[str]):
    assert run(bracket, BracketConfig("u", "v", mode="double", json=True)) == EXIT_OK
    assert json_output(capsys)["result"] == "-v*u (x) 1"


def test_bracket_human_output(capsys: pytest.CaptureFixture[str]):
    assert run(bracket, BracketConfig("v", "u")) == EXIT_OK
    assert capsys.readouterr().out.strip() == "u*v"


@pytest.mark.parametrize(
    "expression",
    [
        pytest.param("u +", id="syntax"),
        pytest.param("w", id="unknown_symbol"),
    ],
)
def test_bracket_rejects_bad_input(expression: str):
    assert run(bracket, BracketConfig(expression, "u")) == EXIT_INPUT


@pytest.mark.parametrize(
    ("expression", "view", "expected"),
    [
        pytest.param("c", "quantum", "(q)", id="casimir_quantum"),
        pytest.param("c", "classical", "1", id="casimir_classical"),
        pytest.param("u*u^-1*v", "algebra", "v", id="algebra"),
        pytest.param("v*u - u*v", "classical", "0", id="commutator_classical"),
    ],
)
def test_eval_views(capsys: pytest.CaptureFixture[str], expression: str, view: str, expected: str):
    assert run(evaluate, EvalConfig(expression, view=view, json=True)) == EXIT_OK
    assert json_output(capsys) == {"view": view, "result": expected}


def test_eval_guards_large_exponent():
    assert run(evaluate, EvalConfig("u^100000000")) == EXIT_GUARD


def test_flow_of_casimir(capsys: pytest.CaptureFixture[str], tmp_path: Path):
    config = FlowConfig("h", "c", order=2, json=True, output_dir=tmp_path, output_format="csv")
    assert run(flow, config) == EXIT_OK
    series = json_output(capsys)["series"]
    assert parse(series[0]) == casimir_c()
    assert series[1:] == ["0", "0"]
    frame = pl.read_csv(tmp_path / "flow.csv")
    assert frame["order"].to_list() == [0, 1, 2]


def test_verify_writes_report(capsys: pytest.CaptureFixture[str], tmp_path: Path):
    config = VerifyConfig(suite="quadruple", json=True, output_dir=tmp_path, output_format="parquet")
    assert run(verify, config) == EXIT_OK
    payload = json_output(capsys)
    assert payload["passed"]
    assert payload["config"]["suite"] == "quadruple"
    assert pl.read_parquet(tmp_path / "verify_quadruple.parquet")["passed"].to_list() == [True]


@pytest.mark.parametrize("drop_null_columns", [pytest.param(True, id="dropped"), pytest.param(False, id="kept")])
def test_verify_null_columns(tmp_path: Path, drop_null_columns: bool):
    config = VerifyConfig(
        suite="quadruple", output_dir=tmp_path, output_format="csv", drop_null_columns=drop_null_columns
    )
    assert run(verify, config) == EXIT_OK
    columns = pl.read_csv(tmp_path / "verify_quadruple.csv").columns
    assert ("counterexample" in columns) is not drop_null_columns
    assert "passed" in columns


def test_verify_table(capsys: pytest.CaptureFixture[str]):
    assert run(verify, VerifyConfig(suite="generators")) == EXIT_OK
    assert "generator table" in capsys.readouterr().out


def test_verify_guard(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv(MAX_TERMS_ENV, "10")
    assert run(verify, VerifyConfig(suite="involution", involution_max=2)) == EXIT_GUARD


def test_verify_bad_limit(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv(MAX_TERMS_ENV, "many")
    assert run(verify, VerifyConfig(suite="generators")) == EXIT_GUARD


def test_span(capsys: pytest.CaptureFixture[str]):
    assert run(span, SpanConfig(k_max=2, json=True)) == EXIT_OK
    payload = json_output(capsys)
    assert payload["passed"]
    assert payload["degree_bound"] == 4
    assert payload["results"]["k=1,lambda^0"]["coordinates"] == {"h": "1"}


def test_span_guard(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv(MAX_TERMS_ENV, "100")
    assert run(span, SpanConfig(k_max=3)) == EXIT_GUARD


def test_simulate(capsys: pytest.CaptureFixture[str], tmp_path: Path):
    config = SimulateConfig(
        n=2,
        t=0.05,
        dt=1e-3,
        k_max=2,
        lambda_samples=(1.0,),
        convergence=False,
        json=True,
        output_dir=tmp_path,
    )
    assert run(simulate, config) == EXIT_OK
    payload = json_output(capsys)
    assert payload["steps"] == 50
    assert payload["checks"] == {"drift": True, "backlund": True}
    assert set(payload["max_drift"]) == {"tr_h^1", "tr_h^2", "h_spectrum", "casimir", "L_spectrum@1"}
    rows = json.loads((tmp_path / "drift.json").read_text())
    assert len(rows) == 5 * 51


def test_simulate_fails_on_tight_tolerance(capsys: pytest.CaptureFixture[str]):
    config = SimulateConfig(n=2, t=0.05, dt=1e-2, backlund=False, convergence=False, tolerance=0.0, json=True)
    assert run(simulate, config) == EXIT_FAILED
    assert json_output(capsys)["checks"] == {"drift": False}


def test_simulate_blow_up():
    config = SimulateConfig(n=2, t=0.05, blow_up_norm=1e-3, backlund=False, convergence=False)
    assert run(simulate, config) == EXIT_GUARD


def test_simulate_rejects_bad_step():
    assert run(simulate, SimulateConfig(n=2, dt=-1.0)) == EXIT_INPUT


def test_suites(capsys: pytest.CaptureFixture[str]):
    suites()
    out = capsys.readouterr().out
    assert "strong-axioms" in out
    assert "involution" in out
