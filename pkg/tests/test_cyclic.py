"""Tests for the cyclic space and the exact span tests."""

from fractions import Fraction

import pytest

from kontsevich_ncis.algebra import AlgebraElement, casimir_c, commutator, hamiltonian_h, letter
from kontsevich_ncis.cyclic import (
    CyclicElement,
    cyclic_canonical,
    enumerate_hc_basis,
    enumerate_hc_monomials,
    labelled_hc_basis,
    project,
    rank,
    span_membership,
)
from kontsevich_ncis.models import Letter, reduce
from kontsevich_ncis.util import exact_rng, random_element, random_word

U, UI, V, VI = Letter.U, Letter.U_INV, Letter.V, Letter.V_INV
u, v = letter("u"), letter("v")


@pytest.mark.parametrize(
    ("word", "expected"),
    [
        pytest.param((), (), id="identity"),
        pytest.param((V, U), (U, V), id="rotation"),
        pytest.param((U, V, UI), (V,), id="conjugate"),
        pytest.param((V, V, U, V), (U, V, V, V), id="least_rotation"),
        pytest.param((VI, UI, V, U), (U, VI, UI, V), id="commutator"),
    ],
)
def test_cyclic_canonical(word, expected):
    assert cyclic_canonical(word) == expected


def test_project_kills_commutators():
    rng = exact_rng(7)
    for _ in range(50):
        a, b = random_element(rng, 4), random_element(rng, 4)
        assert not project(commutator(a, b))


def test_project_identifies_rotations():
    assert project(u * v) == project(v * u)
    assert project(casimir_c()) == CyclicElement({(V, UI, VI, U): 1})
    assert project(u * v * u**-1) == project(v)


def test_cyclic_json_and_str():
    element = project(2 * u * v - Fraction(1, 2) * v)
    assert element.to_json_dict() == {"v": "-1/2", "u*v": "2"}
    assert str(element) == "-1/2*pi(v) + 2*pi(u*v)"
    assert str(CyclicElement.zero()) == "0"


def test_span_membership_returns_coordinates():
    h = hamiltonian_h()
    basis = [project(AlgebraElement.one()), project(h), project(h * h)]
    target = project(3 * h * h - Fraction(1, 2) * h + 4)
    result = span_membership(target, basis)
    assert result.member
    assert result.coordinates == [4, Fraction(-1, 2), 3]
    assert result.rank == 3


def test_span_membership_rejects_outsider():
    h = hamiltonian_h()
    result = span_membership(project(u * u), [project(h), project(h * h)])
    assert not result.member
    assert result.coordinates is None


def test_rank_of_powers_of_h():
    h = hamiltonian_h()
    powers, power = [], AlgebraElement.one()
    for _ in range(6):
        power = power * h
        powers.append(project(power))
    assert rank(powers) == 6


def test_rank_detects_dependence():
    h = hamiltonian_h()
    assert rank([project(h), project(2 * h), project(h * u - u * h)]) == 1


def test_hc_monomials_respect_degree():
    monomials = enumerate_hc_monomials(4)
    labels = {m.label for m in monomials}
    assert {"1", "h", "h^2", "c", "c^-1"} <= labels
    assert all(m.element.max_length() <= 4 for m in monomials)
    assert "h^3" not in labels


def test_hc_basis_is_independent():
    basis = enumerate_hc_basis(4)
    assert rank(basis) == len(basis)
    assert [label for label, _ in labelled_hc_basis(2)] == ["1", "h"]


def test_hc_monomials_reject_negative_degree():
    with pytest.raises(ValueError, match="non-negative"):
        enumerate_hc_monomials(-1)


def test_cyclic_canonical_is_rotation_invariant():
    rng = exact_rng(41)
    for _ in range(300):
        w = random_word(rng, 8, min_len=1)
        canonical = cyclic_canonical(w)
        for k in range(len(w)):
            rotated = w[k:] + w[:k]
            assert cyclic_canonical(reduce(rotated)) == canonical
            assert CyclicElement({rotated: 1}) == CyclicElement({w: 1})


def test_project_of_swapped_products():
    rng = exact_rng(43)
    for _ in range(1000):
        a = AlgebraElement.word(random_word(rng, 8))
        b = AlgebraElement.word(random_word(rng, 8))
        assert project(a * b) == project(b * a)


def test_unreduced_keys_merge():
    assert CyclicElement({(U, UI, V): 1}) == project(v)
    assert CyclicElement({(U, UI, V): 1, (V,): 2}) == project(3 * v)


def test_hc_basis_at_degree_zero():
    assert enumerate_hc_basis(0) == [project(AlgebraElement.one())]
