"""Modified double bracket, multiplication map, Loday bracket and Hamiltonian flows.

The bracket is fixed on the generators by

    <<u (x) v>> = -vu (x) 1,   <<v (x) u>> = uv (x) 1,   <<u (x) u>> = <<v (x) v>> = 0

and extended to inverse letters with the two Leibniz rules. On monomials
``a = a_1...a_k`` and ``b = b_1...b_m`` it is the double sum over letter
pairs ``(a_i, b_j)`` with ``<<a_i (x) b_j>> = X (x) Y``:

    (b_1...b_{j-1} X a_{i+1}...a_k) (x) (a_1...a_{i-1} Y b_{j+1}...b_m)
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping
from functools import lru_cache
from types import MappingProxyType

from .algebra import AlgebraElement, Scalar, TensorElement, _accumulate
from .cyclic import CyclicElement, cyclic_canonical
from .models import IDENTITY, LETTERS, Letter, Word, word_mul, word_mul3

LOG = logging.getLogger(__name__)

TableTerms = tuple[tuple[Word, Word, Scalar], ...]


class GeneratorBracketTable:
    """Values of the double bracket on all 16 ordered pairs of letters."""

    BASE: Mapping[tuple[Letter, Letter], TableTerms] = {
        (Letter.U, Letter.V): (((Letter.V, Letter.U), IDENTITY, -1),),
        (Letter.V, Letter.U): (((Letter.U, Letter.V), IDENTITY, 1),),
        (Letter.U, Letter.U): (),
        (Letter.V, Letter.V): (),
    }

    def __init__(self, entries: Mapping[tuple[Letter, Letter], TensorElement]) -> None:
        """Wrap a complete table of entries."""
        missing = [(x, y) for x in LETTERS for y in LETTERS if (x, y) not in entries]
        if missing:
            raise ValueError(f"Generator table is missing entries: {missing}")
        self._entries = dict(entries)
        self._terms: dict[tuple[Letter, Letter], TableTerms] = {
            key: tuple((a, b, c) for (a, b), c in t.items())
            for key, t in self._entries.items()
        }

    @classmethod
    def derive(cls) -> GeneratorBracketTable:
        """Extend the base entries to inverse letters.

        For any letters x, y the Leibniz rules applied to ``y y^-1 = 1`` and
        ``x x^-1 = 1`` give

            <<x (x) y^-1>> = -(y^-1 (x) 1) <<x (x) y>> (1 (x) y^-1)
            <<x^-1 (x) y>> = -(1 (x) x^-1) <<x (x) y>> (x^-1 (x) 1)

        Same-family entries such as ``<<u (x) u^-1>>`` come out as zero.
        """
        entries: dict[tuple[Letter, Letter], TensorElement] = {
            key: TensorElement.from_terms(terms) for key, terms in cls.BASE.items()
        }

        def entry(x: Letter, y: Letter) -> TensorElement:
            if (x, y) in entries:
                return entries[(x, y)]
            if y.exponent < 0:
                inv = AlgebraElement.letter(y)
                value = -entry(x, y.inverse()).outer_action(inv, inv)
            else:
                inv = AlgebraElement.letter(x)
                value = -entry(x.inverse(), y).inner_action(inv, inv)
            entries[(x, y)] = value
            return value

        for x in LETTERS:
            for y in LETTERS:
                entry(x, y)
        return cls(entries)

    @property
    def entries(self) -> Mapping[tuple[Letter, Letter], TensorElement]:
        """Read-only view of all entries."""
        return MappingProxyType(self._entries)

    def terms(self, x: Letter, y: Letter) -> TableTerms:
        """Entry as ``(left word, right word, coefficient)`` triples."""
        return self._terms[(x, y)]

    def __getitem__(self, key: tuple[Letter, Letter]) -> TensorElement:
        return self._entries[key]

    def __iter__(self) -> Iterator[tuple[Letter, Letter]]:
        return iter(self._entries)


GENERATOR_TABLE = GeneratorBracketTable.derive()


def generator_bracket(x: Letter, y: Letter) -> TensorElement:
    """Double bracket of two letters."""
    return GENERATOR_TABLE[(x, y)]


def _monomial_double(a: Word, b: Word, coef: Scalar, out: dict[tuple[Word, Word], Scalar]) -> None:
    for i, ai in enumerate(a):
        head, tail = a[:i], a[i + 1 :]
        for j, bj in enumerate(b):
            terms = GENERATOR_TABLE.terms(ai, bj)
            if not terms:
                continue
            for x, y, c in terms:
                left = word_mul3(b[:j], x, tail)
                right = word_mul3(head, y, b[j + 1 :])
                _accumulate(out, (left, right), coef * c)


def double_bracket(a: AlgebraElement, b: AlgebraElement) -> TensorElement:
    """Double bracket ``<<a (x) b>>`` by the explicit monomial formula, extended bilinearly."""
    out: dict[tuple[Word, Word], Scalar] = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            _monomial_double(wa, wb, ca * cb, out)
    return TensorElement._wrap(out)


def mu(t: TensorElement) -> AlgebraElement:
    """Multiplication map ``a (x) b -> ab``."""
    out: dict[Word, Scalar] = {}
    for (a, b), c in t.terms.items():
        _accumulate(out, word_mul(a, b), c)
    return AlgebraElement._wrap(out)


def _monomial_loday(a: Word, b: Word, coef: Scalar, out: dict[Word, Scalar]) -> None:
    for i, ai in enumerate(a):
        # The factors between X and Y multiply to a rotation of a with a_i removed.
        middle = word_mul(a[i + 1 :], a[:i])
        for j, bj in enumerate(b):
            terms = GENERATOR_TABLE.terms(ai, bj)
            if not terms:
                continue
            prefix, suffix = b[:j], b[j + 1 :]
            for x, y, c in terms:
                w = word_mul(word_mul3(prefix, x, middle), word_mul(y, suffix))
                _accumulate(out, w, coef * c)


def loday_bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Loday bracket ``{a, b} = mu(<<a (x) b>>)`` without building the tensor."""
    out: dict[Word, Scalar] = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            _monomial_loday(wa, wb, ca * cb, out)
    return AlgebraElement._wrap(out)


class HamiltonianFlow:
    """Derivation ``x -> {H, x}`` generated by a Hamiltonian ``H``.

    The images of the four letters are computed once; the Leibniz rule in
    the second argument extends them to words.
    """

    def __init__(self, hamiltonian: AlgebraElement) -> None:
        """Precompute the brackets of ``hamiltonian`` with every letter."""
        self.hamiltonian = hamiltonian
        self._images: dict[Letter, AlgebraElement] = {
            letter: loday_bracket(hamiltonian, AlgebraElement.letter(letter))
            for letter in LETTERS
        }
        LOG.debug(
            "Flow images computed for Hamiltonian with %d terms: sizes %s",
            len(hamiltonian),
            [len(v) for v in self._images.values()],
        )

    def image(self, letter: Letter) -> AlgebraElement:
        """``{H, letter}``."""
        return self._images[letter]

    def derivative(self, x: AlgebraElement) -> AlgebraElement:
        """``{H, x}`` as a sum over letter positions."""
        out: dict[Word, Scalar] = {}
        for w, coef in x.terms.items():
            for j, letter in enumerate(w):
                prefix, suffix = w[:j], w[j + 1 :]
                for e, c in self._images[letter].terms.items():
                    _accumulate(out, word_mul3(prefix, e, suffix), coef * c)
        return AlgebraElement._wrap(out)

    def projected_derivative(self, x: AlgebraElement) -> CyclicElement:
        """``pi({H, x})`` through cyclic derivatives of ``x``.

        Under the trace ``w[:j] E w[j+1:]`` equals ``E w[j+1:] w[:j]``, so each
        letter image is paired with the sum of rotations that follow it.
        """
        rotations: dict[Letter, dict[Word, Scalar]] = {letter: {} for letter in LETTERS}
        for w, coef in x.terms.items():
            for j, letter in enumerate(w):
                _accumulate(rotations[letter], word_mul(w[j + 1 :], w[:j]), coef)
        out: dict[Word, Scalar] = {}
        for letter, rest in rotations.items():
            if not rest:
                continue
            for e, c in self._images[letter].terms.items():
                for r, d in rest.items():
                    _accumulate(out, cyclic_canonical(word_mul(e, r)), c * d)
        return CyclicElement._wrap(out)


def flow_derivative(hamiltonian: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """Time derivative ``dx/dt = {H, x}`` under the flow of ``H``."""
    return HamiltonianFlow(hamiltonian).derivative(x)


def projected_flow_derivative(hamiltonian: AlgebraElement, x: AlgebraElement) -> CyclicElement:
    """``pi({H, x})`` computed without materializing ``{H, x}``."""
    return HamiltonianFlow(hamiltonian).projected_derivative(x)


def taylor_flow(hamiltonian: AlgebraElement, x: AlgebraElement, order: int) -> list[AlgebraElement]:
    """Iterated flow derivatives ``[x, Dx, ..., D^order x]`` with ``D = {H, .}``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    flow = HamiltonianFlow(hamiltonian)
    series = [x]
    for _ in range(order):
        series.append(flow.derivative(series[-1]))
    return series


@lru_cache(maxsize=1 << 16)
def _recursive_words(a: Word, b: Word) -> TensorElement:
    if not a or not b:
        return TensorElement.zero()
    if len(b) > 1:
        first, rest = AlgebraElement.word(b[:1]), AlgebraElement.word(b[1:])
        return _recursive_words(a, b[:1]).outer_action(right=rest) + _recursive_words(
            a, b[1:]
        ).outer_action(left=first)
    if len(a) > 1:
        first, rest = AlgebraElement.word(a[:1]), AlgebraElement.word(a[1:])
        return _recursive_words(a[:1], b).inner_action(right=rest) + _recursive_words(
            a[1:], b
        ).inner_action(left=first)
    return GENERATOR_TABLE[(a[0], b[0])]


def double_bracket_recursive(a: AlgebraElement, b: AlgebraElement) -> TensorElement:
    """Double bracket by repeated Leibniz descent to single letters.

    Independent of the explicit formula; used to cross-check it.
    """
    result = TensorElement.zero()
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            result = result + _recursive_words(wa, wb) * (ca * cb)
    return result
