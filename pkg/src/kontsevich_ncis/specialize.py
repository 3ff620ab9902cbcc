"""Quotients of the free group algebra: commutative (c = 1) and q-Weyl (c = q central)."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping
from types import MappingProxyType
from typing import Any

from .algebra import (
    AlgebraElement,
    LaurentPolynomial,
    Scalar,
    _accumulate,
    _clean,
    _signed_terms,
    as_scalar,
    casimir_c,
    hamiltonian_h,
)
from .dbracket import HamiltonianFlow
from .models import Word

LOG = logging.getLogger(__name__)

Q = "q"

QAlgebraElement = LaurentPolynomial[AlgebraElement]
"""Element of A[q, q^-1] with q central."""


class PreconditionError(ValueError):
    """Inputs violate the documented precondition of an operation."""


def _render_monomial(m: int, n: int) -> str:
    parts = []
    for name, power in (("u", m), ("v", n)):
        if power == 1:
            parts.append(name)
        elif power:
            parts.append(f"{name}^{power}")
    return "*".join(parts) or "1"


def _monomial_key(key: tuple[int, int]) -> tuple[int, int, int]:
    m, n = key
    return (abs(m) + abs(n), -m, -n)


class CommutativeLaurent:
    """Laurent polynomial ``sum c_mn u^m v^n`` in commuting u, v."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Any] | None = None) -> None:
        """Build from an (m, n) to coefficient mapping."""
        self._terms: dict[tuple[int, int], Scalar] = _clean(
            {k: as_scalar(c) for k, c in (terms or {}).items()}
        )

    @classmethod
    def monomial(cls, m: int, n: int, coef: Any = 1) -> CommutativeLaurent:
        """``coef * u^m v^n``."""
        return cls({(m, n): coef})

    @property
    def terms(self) -> Mapping[tuple[int, int], Scalar]:
        """Read-only view of the exponent pair to coefficient map."""
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, int], Scalar]]:
        """Terms ordered by total degree."""
        for k in sorted(self._terms, key=_monomial_key):
            yield k, self._terms[k]

    def partial(self, variable: str) -> CommutativeLaurent:
        """Partial derivative in ``"u"`` or ``"v"``."""
        out: dict[tuple[int, int], Scalar] = {}
        for (m, n), c in self._terms.items():
            if variable == "u" and m:
                _accumulate(out, (m - 1, n), c * m)
            elif variable == "v" and n:
                _accumulate(out, (m, n - 1), c * n)
        return CommutativeLaurent(out)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = CommutativeLaurent.monomial(0, 0, other)
        if not isinstance(other, CommutativeLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __neg__(self) -> CommutativeLaurent:
        return CommutativeLaurent({k: -c for k, c in self._terms.items()})

    def __add__(self, other: CommutativeLaurent) -> CommutativeLaurent:
        if not isinstance(other, CommutativeLaurent):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(out, k, c)
        return CommutativeLaurent(out)

    def __sub__(self, other: CommutativeLaurent) -> CommutativeLaurent:
        if not isinstance(other, CommutativeLaurent):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: object) -> CommutativeLaurent:
        if isinstance(other, int) and not isinstance(other, bool):
            return CommutativeLaurent({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, CommutativeLaurent):
            return NotImplemented
        out: dict[tuple[int, int], Scalar] = {}
        for (m1, n1), c1 in self._terms.items():
            for (m2, n2), c2 in other._terms.items():
                _accumulate(out, (m1 + m2, n1 + n2), c1 * c2)
        return CommutativeLaurent(out)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return _signed_terms((c, _render_monomial(m, n)) for (m, n), c in self.items())

    def __repr__(self) -> str:
        return f"CommutativeLaurent({self})"


def abelianize(e: AlgebraElement) -> CommutativeLaurent:
    """Image under ``c = 1``: each word goes to its net exponents of u and v."""
    out: dict[tuple[int, int], Scalar] = {}
    for w, c in e.terms.items():
        m = sum(x.exponent for x in w if x.generator == "u")
        n = sum(x.exponent for x in w if x.generator == "v")
        _accumulate(out, (m, n), c)
    return CommutativeLaurent(out)


_UV = CommutativeLaurent.monomial(1, 1)


def classical_poisson(f: CommutativeLaurent, g: CommutativeLaurent) -> CommutativeLaurent:
    """Log-canonical bracket ``{f, g} = uv (df/dv dg/du - df/du dg/dv)``, so ``{v, u} = uv``."""
    return _UV * (f.partial("v") * g.partial("u") - f.partial("u") * g.partial("v"))


def classical_hamiltonian() -> CommutativeLaurent:
    """``u + v + u^-1 + v^-1 + u^-1 v^-1``."""
    return abelianize(hamiltonian_h())


class QWeylElement:
    """Normal-ordered element ``sum c_kmn q^k u^m v^n`` of the q-Weyl algebra ``uv = q vu``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], Any] | None = None) -> None:
        """Build from a (k, m, n) to coefficient mapping."""
        self._terms: dict[tuple[int, int, int], Scalar] = _clean(
            {k: as_scalar(c) for k, c in (terms or {}).items()}
        )

    @property
    def terms(self) -> Mapping[tuple[int, int, int], Scalar]:
        """Read-only view of the (q power, u power, v power) to coefficient map."""
        return MappingProxyType(self._terms)

    def coefficient(self, m: int, n: int) -> LaurentPolynomial[Scalar]:
        """Coefficient of ``u^m v^n`` as a Laurent polynomial in q."""
        return LaurentPolynomial(
            {k: c for (k, mm, nn), c in self._terms.items() if (mm, nn) == (m, n)}, Q
        )

    def monomials(self) -> list[tuple[int, int]]:
        """Distinct ``(m, n)`` pairs with non-zero coefficient."""
        return sorted({(m, n) for _, m, n in self._terms}, key=_monomial_key)

    def at_q_one(self) -> CommutativeLaurent:
        """Specialize q to 1."""
        out: dict[tuple[int, int], Scalar] = {}
        for (_, m, n), c in self._terms.items():
            _accumulate(out, (m, n), c)
        return CommutativeLaurent(out)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QWeylElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __neg__(self) -> QWeylElement:
        return QWeylElement({k: -c for k, c in self._terms.items()})

    def __add__(self, other: QWeylElement) -> QWeylElement:
        if not isinstance(other, QWeylElement):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(out, k, c)
        return QWeylElement(out)

    def __sub__(self, other: QWeylElement) -> QWeylElement:
        if not isinstance(other, QWeylElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: QWeylElement) -> QWeylElement:
        """Product in normal order: ``v^n u^m' = q^(-n m') u^m' v^n``."""
        if not isinstance(other, QWeylElement):
            return NotImplemented
        out: dict[tuple[int, int, int], Scalar] = {}
        for (k1, m1, n1), c1 in self._terms.items():
            for (k2, m2, n2), c2 in other._terms.items():
                _accumulate(out, (k1 + k2 - n1 * m2, m1 + m2, n1 + n2), c1 * c2)
        return QWeylElement(out)

    def __str__(self) -> str:
        pieces = []
        for m, n in self.monomials():
            poly = self.coefficient(m, n)
            body = _render_monomial(m, n)
            exponents = poly.exponents()
            if exponents == [0]:
                pieces.append((poly.coefficients[0], body))
                continue
            q_text = _signed_terms(
                (poly.coefficients[k], "1" if k == 0 else (Q if k == 1 else f"{Q}^{k}"))
                for k in exponents
            )
            pieces.append((1, f"({q_text})" if body == "1" else f"({q_text})*{body}"))
        return _signed_terms(pieces)

    def __repr__(self) -> str:
        return f"QWeylElement({self})"


def _word_normal_form(word: Word, coef: Scalar, shift: int, out: dict[tuple[int, int, int], Scalar]) -> None:
    k, m, n = shift, 0, 0
    for x in word:
        if x.generator == "u":
            k -= n * x.exponent
            m += x.exponent
        else:
            n += x.exponent
    _accumulate(out, (k, m, n), coef)


def qweyl_normal_form(e: AlgebraElement | QAlgebraElement) -> QWeylElement:
    """Image in the q-Weyl algebra under ``u v u^-1 v^-1 = q``.

    Accepts elements of A or of A[q, q^-1]; the map is an algebra homomorphism.
    """
    pieces = e.coefficients.items() if isinstance(e, LaurentPolynomial) else [(0, e)]
    out: dict[tuple[int, int, int], Scalar] = {}
    for shift, element in pieces:
        for w, c in element.terms.items():
            _word_normal_form(w, c, shift, out)
    return QWeylElement(out)


def as_q_element(e: AlgebraElement) -> QAlgebraElement:
    """Embed A into A[q, q^-1]."""
    return LaurentPolynomial({0: e}, Q)


def casimir_minus_q() -> QAlgebraElement:
    """The ideal generator ``c - q``."""
    return LaurentPolynomial({0: casimir_c(), 1: AlgebraElement.scalar(-1)}, Q)


def ideal_perturbation(x: AlgebraElement, left: AlgebraElement, right: AlgebraElement) -> QAlgebraElement:
    """``x + left (c - q) right``, equal to x in the q-Weyl quotient."""
    return as_q_element(x) + left * casimir_minus_q() * right


def verify_flow_descends(
    x: AlgebraElement | QAlgebraElement, y: AlgebraElement | QAlgebraElement
) -> QWeylElement:
    """``nf({h, x}) - nf({h, y})`` for x, y with equal normal forms.

    Raises:
        PreconditionError: when the normal forms of x and y differ.
    """
    if qweyl_normal_form(x) != qweyl_normal_form(y):
        raise PreconditionError("x and y must have the same q-Weyl normal form")
    flow = HamiltonianFlow(hamiltonian_h())

    def derivative(e: AlgebraElement | QAlgebraElement) -> QWeylElement:
        if isinstance(e, LaurentPolynomial):
            return qweyl_normal_form(e.map(flow.derivative))
        return qweyl_normal_form(flow.derivative(e))

    return derivative(x) - derivative(y)
