"""Tests for the identity residuals."""

import pytest

from kontsevich_ncis.algebra import (
    AlgebraElement,
    TensorElement,
    casimir_c,
    commutator,
    hamiltonian_h,
    lax_partner,
    letter,
)
from kontsevich_ncis.config import ResourceGuardError, ResourceLimits
from kontsevich_ncis.dbracket import double_bracket, loday_bracket
from kontsevich_ncis.identities import (
    QUADRUPLE_TABLE,
    equations_of_motion,
    hh_decomposition,
    is_trace_integral,
    left_casimir_bracket,
    quadruple_potential,
    render_triple,
    skew_signs,
    strong_antisymmetry_residual,
    strong_jacobi_residual,
    verify_casimir_traces,
    verify_cyclic_first_arg,
    verify_involution,
    verify_jacobi,
    verify_leibniz,
    verify_loday_leibniz,
    verify_quadruple_potential,
    verify_right_casimir,
    verify_skew_mod_commutator,
)
from kontsevich_ncis.models import Letter
from kontsevich_ncis.util import exact_rng, random_element, random_monomial

u, v = letter("u"), letter("v")
ui, vi = letter("u", -1), letter("v", -1)
one = AlgebraElement.one()
h = hamiltonian_h()


@pytest.fixture
def rng():
    return exact_rng(2024)


@pytest.mark.parametrize(
    ("a", "b", "c"),
    [
        pytest.param(u, v, v, id="u_v_v"),
        pytest.param(u, one, one, id="units"),
        pytest.param(h, u, v, id="h_u_v"),
        pytest.param(ui * v, vi, u * u, id="inverse_letters"),
    ],
)
def test_leibniz_examples(a, b, c):
    right, left = verify_leibniz(a, b, c)
    assert not right
    assert not left


def test_leibniz_random(rng):
    for _ in range(200):
        a, b, c = (random_monomial(rng, 6) for _ in range(3))
        assert verify_leibniz(a, b, c) == (TensorElement.zero(), TensorElement.zero())
        x, y, z = (random_element(rng, 4) for _ in range(3))
        assert not verify_loday_leibniz(x, y, z)


def test_cyclic_first_argument(rng):
    assert not verify_cyclic_first_arg(u, v, u)
    for _ in range(200):
        a, b, c = (random_monomial(rng, 6) for _ in range(3))
        assert not verify_cyclic_first_arg(a, b, c)


def test_skew_symmetry_modulo_commutators(rng):
    assert not verify_skew_mod_commutator(u, v)
    assert not verify_skew_mod_commutator(h, h)
    for _ in range(100):
        a, b = random_element(rng, 5), random_element(rng, 5)
        assert not verify_skew_mod_commutator(a, b)


def test_skew_signs_prefer_minus_sign():
    signs = skew_signs(u, v)
    assert signs.antisymmetric
    assert not signs.symmetric


@pytest.mark.parametrize(
    ("h1", "h2", "x"),
    [
        pytest.param(u, v, u, id="u_v_u"),
        pytest.param(u * v, vi, one, id="unit"),
        pytest.param(h, h * h, u, id="h_h2_u"),
        pytest.param(ui * v * u, vi * vi, u * vi, id="inverse_letters"),
    ],
)
def test_jacobi_examples(h1, h2, x):
    assert not verify_jacobi(h1, h2, x)


def test_jacobi_random(rng):
    for _ in range(100):
        h1, h2, x = (random_monomial(rng, 5) for _ in range(3))
        assert not verify_jacobi(h1, h2, x)


@pytest.mark.parametrize(
    "a",
    [
        pytest.param(u, id="u"),
        pytest.param(one, id="unit"),
        pytest.param(h**3, id="h_cubed"),
        pytest.param(vi * u * ui, id="inverse_letters"),
    ],
)
def test_right_casimir(a):
    residual, bracket = verify_right_casimir(a)
    assert not residual
    assert not bracket


def test_casimir_traces(rng):
    for _ in range(50):
        traces = verify_casimir_traces(random_element(rng, 5))
        assert not traces[0]
        assert not traces[1]


def test_left_casimir_counterexample():
    assert left_casimir_bracket() == u * v * ui * vi * u - u * u * v * ui * vi


@pytest.mark.parametrize(
    ("n", "m"),
    [
        pytest.param(1, 1, id="1_1"),
        pytest.param(1, 2, id="1_2"),
        pytest.param(2, 3, id="2_3"),
        pytest.param(3, 1, id="3_1"),
    ],
)
def test_involution(n, m):
    assert not verify_involution(n, m, ResourceLimits())


def test_involution_guard():
    with pytest.raises(ResourceGuardError, match="NCIS_MAX_TERMS"):
        verify_involution(3, 3, ResourceLimits(max_terms=5**5))


def test_involution_rejects_zero_power():
    with pytest.raises(ValueError, match="at least 1"):
        verify_involution(0, 1, ResourceLimits())


def test_trace_integrals():
    assert is_trace_integral(h * h)
    assert is_trace_integral(casimir_c())
    assert not is_trace_integral(u)


@pytest.mark.parametrize(
    ("word", "expected"),
    [
        pytest.param("vvuv", 1, id="vvuv"),
        pytest.param("uuvv", 0, id="uuvv"),
        pytest.param("uuuu", -1, id="uuuu"),
    ],
)
def test_quadruple_potential_table_entries(word, expected):
    letters = [Letter.from_generator(ch) for ch in word]
    assert quadruple_potential(*letters) == expected


def test_quadruple_potential_with_inverse():
    assert quadruple_potential(Letter.U, Letter.V, Letter.U_INV, Letter.U) == 1


def test_quadruple_table_is_reproduced():
    report = verify_quadruple_potential()
    assert report.checked == sum(len(words) for words in QUADRUPLE_TABLE.values()) == 16
    assert report.passed


def test_strong_antisymmetry_fails():
    residual = strong_antisymmetry_residual(u, v)
    assert residual == TensorElement.pure(one, u * v) - TensorElement.pure(v * u, one)


def test_strong_jacobi_fails():
    residual = strong_jacobi_residual(u, v, v)
    assert residual
    assert render_triple(residual) == "-1 (x) 1 (x) v*u*v + 1 (x) u*v (x) v"


def test_equations_of_motion():
    flows = equations_of_motion()
    assert flows["du/dt"] == u * v - u * vi - vi
    assert flows["dv/dt"] == -(v * u) + v * ui + ui
    assert flows["dh/dt"] == commutator(h, lax_partner())


def test_hh_decomposition():
    a, b, e = hh_decomposition()
    expected = TensorElement.pure(one, a) - TensorElement.pure(h, b) + TensorElement.pure(e, one)
    assert double_bracket(h, h) == expected
    assert loday_bracket(h, h) == a - h * b + e
