"""Tests for Lax matrices and the trace-integral span experiment."""

import json
import random

import pytest

from kontsevich_ncis.algebra import AlgebraElement, hamiltonian_h, letter
from kontsevich_ncis.config import ResourceGuardError, ResourceLimits
from kontsevich_ncis.cyclic import CyclicElement, project
from kontsevich_ncis.lax import (
    DimensionMismatchError,
    LambdaPoly,
    LaxMatrix,
    build_L,
    build_M,
    cyclic_trace_power,
    lam,
    lax_residual,
    mat_commutator,
    mat_flow_derivative,
    mat_mul,
    mat_power,
    mat_trace,
    span_experiment,
    trace_integral_residuals,
)
from kontsevich_ncis.schema import SPAN_SCHEMA
from kontsevich_ncis.util import exact_rng, random_element

u, v = letter("u"), letter("v")
one = AlgebraElement.one()
h = hamiltonian_h()


def test_matrix_product_keeps_order():
    a = LaxMatrix([[u, one], [one, one]])
    b = LaxMatrix([[v, one], [one, one]])
    assert mat_mul(a, b)[0, 0] == lam({0: u * v + one})
    assert mat_commutator(a, b)[0, 0] == lam({0: u * v - v * u})


def test_identity_and_power():
    big_l = build_L()
    assert mat_power(big_l, 0) == LaxMatrix.identity(2)
    assert mat_power(big_l, 2) == big_l @ big_l


def test_non_square_matrix_is_rejected():
    with pytest.raises(DimensionMismatchError):
        LaxMatrix([[u, v]])


def test_size_mismatch_is_rejected():
    with pytest.raises(DimensionMismatchError):
        mat_mul(LaxMatrix.identity(2), LaxMatrix.identity(3))


def test_lax_equation_holds():
    assert not lax_residual()
    assert mat_flow_derivative(h, build_L()) == -mat_commutator(build_L(), build_M())


def test_trace_of_l():
    trace = mat_trace(build_L())
    assert trace.exponents() == [-1, 0]
    ui, vi = letter("u", -1), letter("v", -1)
    assert trace.coefficients[0] == h - ui * vi + vi * ui
    assert trace.coefficients[-1] == one


def test_cyclic_trace_of_l():
    traces = cyclic_trace_power(1, ResourceLimits())
    assert traces == {-1: project(one), 0: project(h)}


def test_cyclic_trace_of_l_squared():
    traces = cyclic_trace_power(2, ResourceLimits())
    assert traces[1] == project(2 * one)
    assert traces[-2] == project(one)
    assert traces[-1] == project(2 * h + 2)
    assert traces[0] == project(h * h - 4)


def test_trace_power_guard():
    with pytest.raises(ResourceGuardError):
        cyclic_trace_power(3, ResourceLimits(max_terms=100))


@pytest.mark.parametrize("k", [pytest.param(1, id="k1"), pytest.param(2, id="k2"), pytest.param(3, id="k3")])
def test_trace_integrals_are_conserved(k):
    assert not any(trace_integral_residuals(k, ResourceLimits()).values())


def test_span_experiment():
    report = span_experiment(k_max=2, limits=ResourceLimits())
    assert report.passed
    assert report.degree_bound == 4
    assert all(row.trace_integral for row in report.rows)
    lambda_zero = next(r for r in report.rows if (r.k, r.exponent) == (1, 0))
    assert lambda_zero.coordinates == {"h": "1"}
    frame = report.to_frame()
    assert frame.schema == SPAN_SCHEMA
    assert frame.height == len(report.rows)
    assert json.loads(frame.filter(k=1, exponent=-1)["coordinates"][0]) == {"1": "1"}
    assert report.to_dict()["results"]["k=1,lambda^0"]["member"]


def random_entry(rng: random.Random) -> LambdaPoly:
    return lam({rng.randint(-1, 1): random_element(rng, 3), 0: random_element(rng, 3)})


def random_lax_matrix(rng: random.Random, size: int) -> LaxMatrix:
    return LaxMatrix([[random_entry(rng) for _ in range(size)] for _ in range(size)])


def projected_trace(a: LaxMatrix) -> dict[int, CyclicElement]:
    trace = mat_trace(a)
    projected = {e: project(trace.coefficients[e]) for e in trace.exponents()}
    return {e: p for e, p in projected.items() if p}


def test_trace_of_product_is_cyclic():
    rng = exact_rng(53)
    for _ in range(100):
        size = rng.choice((2, 3))
        a, b = random_lax_matrix(rng, size), random_lax_matrix(rng, size)
        assert projected_trace(a @ b) == projected_trace(b @ a)


def test_span_experiment_up_to_cube():
    report = span_experiment(k_max=3, limits=ResourceLimits())
    assert report.passed
    assert report.degree_bound == 6
    assert len(report.basis_labels) == 8
    assert {row.k for row in report.rows} == {1, 2, 3}
    assert all(row.trace_integral for row in report.rows)
