"""Test matrix representations and the RK4 integration."""

import numpy as np
import pytest

from kontsevich_ncis.algebra import AlgebraElement, casimir_c, hamiltonian_h, letter
from kontsevich_ncis.lax import build_L
from kontsevich_ncis.numrep import (
    BlowUpError,
    NumericRep,
    SingularRepresentationError,
    backlund_check,
    backlund_transform,
    conservation_report,
    convergence_order,
    evaluate,
    evaluate_commutative,
    evaluate_lax,
    integrate,
    random_rep,
    spectrum_distance,
    vector_field,
)
from kontsevich_ncis.schema import DRIFT_SCHEMA
from kontsevich_ncis.specialize import abelianize, classical_hamiltonian
from kontsevich_ncis.util import numeric_rng

u, v = letter("u"), letter("v")
ui, vi = letter("u", -1), letter("v", -1)


@pytest.fixture
def rep() -> NumericRep:
    return random_rep(3, numeric_rng(0))


def test_rep_shape_check():
    with pytest.raises(ValueError, match="square"):
        NumericRep(np.eye(2), np.eye(3))


def test_random_rep_conditioning(rep: NumericRep):
    assert rep.n == 3
    assert np.linalg.cond(rep.u) <= 1e3
    assert np.linalg.cond(rep.v) <= 1e3


def test_random_rep_is_seeded():
    a, b = random_rep(2, numeric_rng(5)), random_rep(2, numeric_rng(5))
    np.testing.assert_array_equal(a.u, b.u)
    np.testing.assert_array_equal(a.v, b.v)


def test_random_rep_gives_up():
    with pytest.raises(SingularRepresentationError):
        random_rep(3, numeric_rng(0), condition_bound=1.0, max_attempts=3)


def test_singular_rep():
    rep = NumericRep(np.zeros((2, 2), dtype=complex), np.eye(2, dtype=complex))
    with pytest.raises(SingularRepresentationError):
        evaluate(u, rep)


def test_evaluate_is_homomorphic(rep: NumericRep):
    eye = np.eye(rep.n)
    np.testing.assert_allclose(evaluate(AlgebraElement.one(), rep), eye)
    np.testing.assert_allclose(evaluate(u * ui, rep), eye, atol=1e-12)
    np.testing.assert_allclose(evaluate(u * v, rep), rep.u @ rep.v)
    np.testing.assert_allclose(evaluate(2 * u - v, rep), 2 * rep.u - rep.v)
    np.testing.assert_allclose(evaluate(AlgebraElement.zero(), rep), np.zeros((rep.n, rep.n)))


def test_casimir_of_commuting_matrices():
    a = np.diag([2.0, 3.0]).astype(complex)
    rep = NumericRep(a, a)
    np.testing.assert_allclose(evaluate(casimir_c(), rep), np.eye(2), atol=1e-12)


def test_scalar_rep_matches_commutative_evaluation():
    rep = NumericRep.scalar(1.5 + 0.5j, 0.7 - 0.2j)
    h = hamiltonian_h()
    value = evaluate_commutative(abelianize(h), 1.5 + 0.5j, 0.7 - 0.2j)
    assert evaluate(h, rep)[0, 0] == pytest.approx(value)
    assert evaluate_commutative(classical_hamiltonian(), 1.0, 1.0) == 5


def test_evaluate_lax_block_shape(rep: NumericRep):
    block = evaluate_lax(build_L(), rep, 2.0)
    assert block.shape == (2 * rep.n, 2 * rep.n)
    expected = np.trace(evaluate(hamiltonian_h(), rep)) + rep.n / 2.0
    assert np.trace(block) == pytest.approx(expected)


def test_vector_field_at_identity():
    eye = np.eye(2, dtype=complex)
    du, dv = vector_field(eye, eye)
    np.testing.assert_allclose(du, -eye)
    np.testing.assert_allclose(dv, eye)


def test_vector_field_matches_equations_of_motion(rep: NumericRep):
    du, dv = vector_field(rep.u, rep.v)
    np.testing.assert_allclose(du, evaluate(u * v - u * vi - vi, rep), atol=1e-10)
    np.testing.assert_allclose(dv, evaluate(-(v * u) + v * ui + ui, rep), atol=1e-10)


@pytest.mark.parametrize(
    ("t_final", "dt"),
    [
        pytest.param(1.0, 0.0, id="zero_step"),
        pytest.param(1.0, -0.1, id="negative_step"),
        pytest.param(0.0, 0.1, id="zero_time"),
    ],
)
def test_integrate_rejects_bad_steps(rep: NumericRep, t_final: float, dt: float):
    with pytest.raises(ValueError, match="positive"):
        integrate(rep, t_final, dt)


def test_integrate_grid(rep: NumericRep):
    traj = integrate(rep, 0.1, 0.03)
    assert len(traj) == 4
    assert traj.dt == pytest.approx(0.1 / 3)
    assert traj.times[-1] == pytest.approx(0.1)
    np.testing.assert_array_equal(traj.state(0).u, rep.u)


def test_integrate_blow_up(rep: NumericRep):
    with pytest.raises(BlowUpError):
        integrate(rep, 0.1, 0.01, blow_up_norm=1e-3)


def test_conservation(rep: NumericRep):
    traj = integrate(rep, 0.1, 1e-3)
    report = conservation_report(traj, k_max=3, lambda_samples=(1.0,))
    assert set(report.series) == {"tr_h^1", "tr_h^2", "tr_h^3", "h_spectrum", "casimir", "L_spectrum@1"}
    assert report.within(1e-6)
    frame = report.to_frame()
    assert frame.schema == DRIFT_SCHEMA
    assert frame.height == len(report.series) * len(traj)


def test_drift_detects_perturbation(rep: NumericRep):
    traj = integrate(rep, 0.1, 1e-3)
    traj.u[-1] = traj.u[-1] + 0.1 * np.eye(rep.n)
    report = conservation_report(traj, k_max=1, lambda_samples=())
    assert not report.within(1e-6)


def test_spectrum_distance():
    a = np.array([1.0, 2.0])
    assert spectrum_distance(a, a[::-1]) == 0.0
    assert spectrum_distance(a, np.array([1.0, 2.5])) == pytest.approx(0.5)


def test_backlund_transform_formula(rep: NumericRep):
    moved = backlund_transform(rep)
    u_inv, v_inv = np.linalg.inv(rep.u), np.linalg.inv(rep.v)
    np.testing.assert_allclose(moved.u, rep.u @ rep.v @ u_inv, atol=1e-10)
    np.testing.assert_allclose(moved.v, u_inv + v_inv @ u_inv, atol=1e-10)


def test_backlund_preserves_hamiltonian_at_n_one():
    rep = NumericRep.scalar(1.3 + 0.2j, 0.8 - 0.4j)
    moved = backlund_transform(rep)
    h = hamiltonian_h()
    assert evaluate(h, moved)[0, 0] == pytest.approx(evaluate(h, rep)[0, 0])


def test_backlund_commutes_with_flow(rep: NumericRep):
    report = backlund_check(rep, 0.1, 1e-3)
    assert report.max_deviation < 1e-6
    assert len(report.times) == len(report.deviation)


def test_convergence_order(rep: NumericRep):
    assert convergence_order(rep, t_final=0.2, dt=0.02) == pytest.approx(4.0, abs=0.5)


def test_conservation_over_unit_time():
    rep = random_rep(4, numeric_rng(0))
    traj = integrate(rep, 1.0, 1e-3)
    assert len(traj) == 1001
    report = conservation_report(traj, k_max=4, lambda_samples=(0.5, 1.0, 2.0))
    assert {f"tr_h^{k}" for k in range(1, 5)} <= set(report.series)
    assert {"L_spectrum@0.5", "L_spectrum@1", "L_spectrum@2"} <= set(report.series)
    assert report.within(1e-6)
