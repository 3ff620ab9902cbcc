"""Cyclic space A/[A,A]: canonical cyclic words, the trace projection, exact span tests."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Any

from .algebra import (
    AlgebraElement,
    Scalar,
    _accumulate,
    _clean,
    as_scalar,
    casimir_c,
    hamiltonian_h,
    render_scalar,
)
from .models import INVERSE, Word, reduce, render_word, word_key

LOG = logging.getLogger(__name__)


def cyclic_reduce(w: Word) -> Word:
    """Cancel mutually inverse first/last letters until none remain."""
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == INVERSE[w[j - 1]]:
        i += 1
        j -= 1
    return w[i:j]


def least_rotation(w: Word) -> Word:
    """Lexicographically least rotation under the letter order."""
    if len(w) < 2:
        return w
    return min(w[k:] + w[:k] for k in range(len(w)))


@lru_cache(maxsize=1 << 18)
def cyclic_canonical(w: Word) -> Word:
    """Canonical representative of the cyclic class of a reduced word.

    Cyclic reduction comes first so that ``u v u^-1`` and ``v`` agree.
    """
    return least_rotation(cyclic_reduce(w))


class CyclicElement:
    """Finite rational combination of canonical cyclic words."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Any] | None = None) -> None:
        """Build from a word to coefficient mapping; keys are reduced and canonicalized."""
        out: dict[Word, Scalar] = {}
        for w, coef in (terms or {}).items():
            _accumulate(out, cyclic_canonical(reduce(w)), as_scalar(coef))
        self._terms: dict[Word, Scalar] = _clean(out)

    @classmethod
    def _wrap(cls, terms: dict[Word, Scalar]) -> CyclicElement:
        obj = cls.__new__(cls)
        obj._terms = _clean(terms)
        return obj

    @classmethod
    def zero(cls) -> CyclicElement:
        """The zero class."""
        return cls._wrap({})

    @property
    def terms(self) -> Mapping[Word, Scalar]:
        """Read-only view of the canonical word to coefficient map."""
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Word, Scalar]]:
        """Iterate over (cyclic word, coefficient) pairs, shortest first."""
        for w in sorted(self._terms, key=word_key):
            yield w, self._terms[w]

    def max_length(self) -> int:
        """Length of the longest cyclic word, 0 for the zero class."""
        return max((len(w) for w in self._terms), default=0)

    def to_json_dict(self) -> dict[str, str]:
        """Map canonical word strings to rational strings such as ``"3/2"``."""
        return {render_word(w): render_scalar(c) for w, c in self.items()}

    def to_json(self) -> str:
        """JSON text of :meth:`to_json_dict`."""
        return json.dumps(self.to_json_dict())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclicElement):
            return NotImplemented
        return self._terms == other._terms

    def __neg__(self) -> CyclicElement:
        return CyclicElement._wrap({w: -c for w, c in self._terms.items()})

    def __add__(self, other: CyclicElement) -> CyclicElement:
        if not isinstance(other, CyclicElement):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            _accumulate(out, w, c)
        return CyclicElement._wrap(out)

    def __sub__(self, other: CyclicElement) -> CyclicElement:
        if not isinstance(other, CyclicElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: object) -> CyclicElement:
        if isinstance(other, int | Fraction) and not isinstance(other, bool):
            return CyclicElement._wrap({w: c * other for w, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        body = " + ".join(
            f"pi({render_word(w)})" if c == 1 else f"{render_scalar(c)}*pi({render_word(w)})"
            for w, c in self.items()
        )
        return body.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CyclicElement({self})"


def project(e: AlgebraElement) -> CyclicElement:
    """Trace projection onto the cyclic space."""
    out: dict[Word, Scalar] = {}
    for w, c in e.terms.items():
        _accumulate(out, cyclic_canonical(w), c)
    return CyclicElement._wrap(out)


class RationalEchelon:
    """Incremental row echelon form over the rationals on cyclic coordinates.

    Each stored row remembers which combination of inserted vectors produced
    it. Pivots are the lowest coordinate under (length, word) order and every
    row is reduced against all earlier rows, so a single ordered pass fully
    reduces a new vector.
    """

    def __init__(self) -> None:
        """Start with no rows."""
        self._rows: list[tuple[Word, dict[Word, Fraction], dict[int, Fraction]]] = []
        self._count = 0

    @property
    def rank(self) -> int:
        """Number of independent vectors inserted so far."""
        return len(self._rows)

    def _reduce(self, vector: Mapping[Word, Scalar]) -> tuple[dict[Word, Fraction], dict[int, Fraction]]:
        vec = {w: Fraction(c) for w, c in vector.items() if c}
        combo: dict[int, Fraction] = {}
        for pivot, row, row_combo in self._rows:
            factor = vec.get(pivot)
            if not factor:
                continue
            factor = factor / row[pivot]
            for w, c in row.items():
                _accumulate(vec, w, -factor * c)
            for i, c in row_combo.items():
                _accumulate(combo, i, factor * c)
        return vec, combo

    def add(self, vector: CyclicElement) -> bool:
        """Insert a vector; return False when it is already in the span."""
        index = self._count
        self._count += 1
        residual, combo = self._reduce(vector.terms)
        if not residual:
            return False
        pivot = min(residual, key=word_key)
        row_combo = {i: -c for i, c in combo.items()}
        _accumulate(row_combo, index, Fraction(1))
        self._rows.append((pivot, residual, row_combo))
        return True

    def solve(self, target: CyclicElement) -> dict[int, Fraction] | None:
        """Coordinates of ``target`` in terms of the inserted vectors, or None."""
        residual, combo = self._reduce(target.terms)
        return None if residual else combo


@dataclass
class SpanMembership:
    """Outcome of a span membership test."""

    member: bool
    coordinates: list[Scalar] | None = None
    """Rational combination of the basis vectors, when ``member``."""

    rank: int = 0
    """Rank of the basis."""


def span_membership(target: CyclicElement, basis: list[CyclicElement]) -> SpanMembership:
    """Decide whether ``target`` lies in the rational span of ``basis``."""
    echelon = RationalEchelon()
    for vector in basis:
        echelon.add(vector)
    combo = echelon.solve(target)
    LOG.debug("Span test: basis %d, rank %d, member %s", len(basis), echelon.rank, combo is not None)
    if combo is None:
        return SpanMembership(member=False, rank=echelon.rank)
    coordinates = [as_scalar(combo.get(i, 0)) for i in range(len(basis))]
    return SpanMembership(member=True, coordinates=coordinates, rank=echelon.rank)


def rank(vectors: Iterable[CyclicElement]) -> int:
    """Rank over the rationals."""
    echelon = RationalEchelon()
    for vector in vectors:
        echelon.add(vector)
    return echelon.rank


@dataclass
class HcMonomial:
    """Monomial in h, c and c^-1 with its expansion."""

    factors: tuple[str, ...]
    """Factor symbols, each one of ``"h"``, ``"c"``, ``"C"`` (for c^-1)."""

    element: AlgebraElement = field(repr=False)

    @property
    def label(self) -> str:
        """Readable label such as ``h^2*c^-1``."""
        if not self.factors:
            return "1"
        parts: list[str] = []
        i = 0
        while i < len(self.factors):
            j = i
            while j < len(self.factors) and self.factors[j] == self.factors[i]:
                j += 1
            name = "h" if self.factors[i] == "h" else "c"
            power = (j - i) * (-1 if self.factors[i] == "C" else 1)
            parts.append(name if power == 1 else f"{name}^{power}")
            i = j
        return "*".join(parts)


_HC_SHRINK = 4
"""Largest drop of the maximal word length caused by one c or c^-1 factor."""


def enumerate_hc_monomials(max_degree: int, *, max_factors: int | None = None) -> list[HcMonomial]:
    """All reduced monomials in h, c, c^-1 whose expansion has words of length at most ``max_degree``.

    Monomials are explored breadth first by factor count. Adjacent ``c c^-1``
    pairs are excluded. Because every coefficient is positive no terms cancel,
    so a right factor h raises the maximal length by at least one while c or
    c^-1 lowers it by at most four; that bound prunes the search.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    max_factors = max_degree if max_factors is None else max_factors
    factors = {"h": hamiltonian_h(), "c": casimir_c(), "C": casimir_c() ** -1}
    found = [HcMonomial((), AlgebraElement.one())]
    frontier = list(found)
    for depth in range(1, max_factors + 1):
        remaining = max_factors - depth
        next_frontier: list[HcMonomial] = []
        for mono in frontier:
            last = mono.factors[-1] if mono.factors else None
            for name, factor in factors.items():
                if {last, name} == {"c", "C"}:
                    continue
                element = mono.element * factor
                length = element.max_length()
                if length - _HC_SHRINK * remaining > max_degree:
                    continue
                child = HcMonomial((*mono.factors, name), element)
                next_frontier.append(child)
                if length <= max_degree:
                    found.append(child)
        frontier = next_frontier
    LOG.debug("Enumerated %d hc monomials up to degree %d", len(found), max_degree)
    return found


def labelled_hc_basis(max_degree: int, *, max_factors: int | None = None) -> list[tuple[str, CyclicElement]]:
    """Projected hc monomials, deduplicated by linear independence, with labels."""
    echelon = RationalEchelon()
    basis: list[tuple[str, CyclicElement]] = []
    for mono in enumerate_hc_monomials(max_degree, max_factors=max_factors):
        projected = project(mono.element)
        if echelon.add(projected):
            basis.append((mono.label, projected))
    return basis


def enumerate_hc_basis(max_degree: int, *, max_factors: int | None = None) -> list[CyclicElement]:
    """Linearly independent projections of hc monomials up to ``max_degree``."""
    return [b for _, b in labelled_hc_basis(max_degree, max_factors=max_factors)]
