"""Exact sparse arithmetic in the group algebra of the free group on u, v.

Three containers live here: :class:`AlgebraElement` (linear combinations of
reduced words), :class:`TensorElement` (linear combinations of word pairs, the
codomain of the double bracket) and :class:`LaurentPolynomial` (a central
formal variable such as the spectral parameter or the deformation parameter
with coefficients in any ring of this module).
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Mapping
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Generic, TypeAlias, TypeVar

from .models import IDENTITY, Letter, Word, reduce, render_word, word_inv, word_key, word_mul

LOG = logging.getLogger(__name__)

Scalar: TypeAlias = int | Fraction
"""Exact rational coefficient; integral values are stored as ``int``."""


class NotInvertibleError(ArithmeticError):
    """Raised for a negative power of an element that is not a monomial."""


def as_scalar(value: Any) -> Scalar:
    """Coerce an int, Fraction or rational string to the canonical scalar form."""
    if isinstance(value, bool):
        raise TypeError("Booleans are not scalars")
    if isinstance(value, int):
        return value
    frac = value if isinstance(value, Fraction) else Fraction(value)
    return frac.numerator if frac.denominator == 1 else frac


def render_scalar(value: Scalar) -> str:
    """Render a scalar as ``"3"`` or ``"3/2"``."""
    return str(value)


def _is_scalar(value: object) -> bool:
    return isinstance(value, int | Fraction) and not isinstance(value, bool)


def _clean(terms: dict[Any, Any]) -> dict[Any, Any]:
    """Drop zero coefficients and demote integral fractions to int."""
    return {
        k: (c.numerator if type(c) is Fraction and c.denominator == 1 else c)
        for k, c in terms.items()
        if c
    }


def _accumulate(out: dict[Any, Any], key: Any, coef: Any) -> None:
    total = out.get(key, 0) + coef
    if total:
        out[key] = total
    else:
        out.pop(key, None)


def _signed_terms(pieces: Iterable[tuple[Scalar, str]]) -> str:
    """Join (coefficient, body) pairs into ``a - 2*b + c`` form."""
    out: list[str] = []
    for coef, body in pieces:
        magnitude = -coef if coef < 0 else coef
        if body == "1":
            text = render_scalar(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{render_scalar(magnitude)}*{body}"
        if not out:
            out.append(f"-{text}" if coef < 0 else text)
        else:
            out.append(f"- {text}" if coef < 0 else f"+ {text}")
    return " ".join(out) if out else "0"


class AlgebraElement:
    """Finite rational linear combination of reduced words.

    Instances are immutable; every operation returns a new element. Keys are
    kept freely reduced and zero coefficients are never stored.
    """

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[Iterable[Letter], Any] | None = None) -> None:
        """Build an element from a word to coefficient mapping.

        Keys may be any letter sequences; they are reduced here.
        """
        out: dict[Word, Scalar] = {}
        for letters, coef in (terms or {}).items():
            _accumulate(out, reduce(letters), as_scalar(coef))
        self._terms: dict[Word, Scalar] = _clean(out)
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, terms: dict[Word, Scalar]) -> AlgebraElement:
        """Wrap an already reduced term dict without re-checking the keys."""
        obj = cls.__new__(cls)
        obj._terms = _clean(terms)
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> AlgebraElement:
        """The zero element."""
        return cls._wrap({})

    @classmethod
    def one(cls) -> AlgebraElement:
        """The unit, i.e. the empty word."""
        return cls._wrap({IDENTITY: 1})

    @classmethod
    def scalar(cls, value: Any) -> AlgebraElement:
        """Scalar multiple of the unit."""
        return cls._wrap({IDENTITY: as_scalar(value)})

    @classmethod
    def word(cls, w: Iterable[Letter], coef: Any = 1) -> AlgebraElement:
        """Single monomial ``coef * w``."""
        return cls._wrap({reduce(w): as_scalar(coef)})

    @classmethod
    def letter(cls, letter: Letter) -> AlgebraElement:
        """A generator or inverse generator as an element."""
        return cls._wrap({(letter,): 1})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Iterable[Letter], Any]]) -> AlgebraElement:
        """Sum of ``coef * word`` pairs; repeated words are combined."""
        out: dict[Word, Scalar] = {}
        for letters, coef in terms:
            _accumulate(out, reduce(letters), as_scalar(coef))
        return cls._wrap(out)

    @property
    def terms(self) -> Mapping[Word, Scalar]:
        """Read-only view of the word to coefficient map."""
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Word, Scalar]]:
        """Iterate over (word, coefficient) pairs in canonical order."""
        for w in sorted(self._terms, key=word_key):
            yield w, self._terms[w]

    def coefficient(self, w: Word) -> Scalar:
        """Coefficient of a word, zero when absent."""
        return self._terms.get(w, 0)

    @property
    def is_monomial(self) -> bool:
        """True for a single word with a non-zero coefficient."""
        return len(self._terms) == 1

    def max_length(self) -> int:
        """Length of the longest word, 0 for the zero element."""
        return max((len(w) for w in self._terms), default=0)

    def map_words(self, fn: Callable[[Word], Word]) -> AlgebraElement:
        """Apply a word-level map linearly."""
        out: dict[Word, Scalar] = {}
        for w, c in self._terms.items():
            _accumulate(out, fn(w), c)
        return AlgebraElement._wrap(out)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if _is_scalar(other):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._terms == other._terms

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement._wrap({w: -c for w, c in self._terms.items()})

    def __add__(self, other: object) -> AlgebraElement:
        if _is_scalar(other):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            _accumulate(out, w, c)
        return AlgebraElement._wrap(out)

    __radd__ = __add__

    def __sub__(self, other: object) -> AlgebraElement:
        if _is_scalar(other):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            _accumulate(out, w, -c)
        return AlgebraElement._wrap(out)

    def __rsub__(self, other: object) -> AlgebraElement:
        return (-self) + other

    def __mul__(self, other: object) -> AlgebraElement:
        if _is_scalar(other):
            return AlgebraElement._wrap({w: c * other for w, c in self._terms.items()})  # type: ignore[operator]
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        out: dict[Word, Scalar] = {}
        for wa, ca in self._terms.items():
            for wb, cb in other._terms.items():
                _accumulate(out, word_mul(wa, wb), ca * cb)
        return AlgebraElement._wrap(out)

    def __rmul__(self, other: object) -> AlgebraElement:
        if _is_scalar(other):
            return AlgebraElement._wrap({w: other * c for w, c in self._terms.items()})  # type: ignore[operator]
        return NotImplemented

    def __truediv__(self, other: object) -> AlgebraElement:
        if not _is_scalar(other):
            return NotImplemented
        return self * Fraction(1, other)  # type: ignore[arg-type]

    def __pow__(self, exponent: int) -> AlgebraElement:
        if exponent < 0:
            if not self.is_monomial:
                raise NotInvertibleError("general elements are not invertible")
            ((w, c),) = self._terms.items()
            base = AlgebraElement._wrap({word_inv(w): as_scalar(Fraction(1) / c)})
            return base ** (-exponent)
        result = AlgebraElement.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __str__(self) -> str:
        return _signed_terms((c, render_word(w)) for w, c in self.items())

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"


class TensorElement:
    """Finite rational linear combination of word pairs ``a (x) b``."""

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[tuple[Word, Word], Any] | None = None) -> None:
        """Build a tensor from a (word, word) to coefficient mapping."""
        out: dict[tuple[Word, Word], Scalar] = {}
        for (a, b), coef in (terms or {}).items():
            _accumulate(out, (reduce(a), reduce(b)), as_scalar(coef))
        self._terms: dict[tuple[Word, Word], Scalar] = _clean(out)
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, terms: dict[tuple[Word, Word], Scalar]) -> TensorElement:
        obj = cls.__new__(cls)
        obj._terms = _clean(terms)
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> TensorElement:
        """The zero tensor."""
        return cls._wrap({})

    @classmethod
    def pure(cls, a: AlgebraElement, b: AlgebraElement) -> TensorElement:
        """Tensor product ``a (x) b`` expanded bilinearly."""
        return cls._wrap(
            {
                (wa, wb): ca * cb
                for wa, ca in a.terms.items()
                for wb, cb in b.terms.items()
            }
        )

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Word, Word, Any]]) -> TensorElement:
        """Sum of ``coef * (a (x) b)`` triples over reduced words."""
        out: dict[tuple[Word, Word], Scalar] = {}
        for a, b, coef in terms:
            _accumulate(out, (a, b), as_scalar(coef))
        return cls._wrap(out)

    @property
    def terms(self) -> Mapping[tuple[Word, Word], Scalar]:
        """Read-only view of the (word, word) to coefficient map."""
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[tuple[Word, Word], Scalar]]:
        """Iterate over terms in canonical order."""
        for key in sorted(self._terms, key=lambda k: (word_key(k[0]), word_key(k[1]))):
            yield key, self._terms[key]

    def product(self, other: TensorElement) -> TensorElement:
        """Componentwise product in ``A (x) A``: (a(x)b)(c(x)d) = ac (x) bd."""
        out: dict[tuple[Word, Word], Scalar] = {}
        for (a, b), c1 in self._terms.items():
            for (c, d), c2 in other._terms.items():
                _accumulate(out, (word_mul(a, c), word_mul(b, d)), c1 * c2)
        return TensorElement._wrap(out)

    def outer_action(
        self, left: AlgebraElement | None = None, right: AlgebraElement | None = None
    ) -> TensorElement:
        """Outer bimodule action ``x o (a (x) b) o y = xa (x) by``."""
        t = self
        if left is not None:
            t = TensorElement.pure(left, AlgebraElement.one()).product(t)
        if right is not None:
            t = t.product(TensorElement.pure(AlgebraElement.one(), right))
        return t

    def inner_action(
        self, left: AlgebraElement | None = None, right: AlgebraElement | None = None
    ) -> TensorElement:
        """Inner bimodule action ``x o (a (x) b) o y = ay (x) xb``."""
        t = self
        if left is not None:
            t = TensorElement.pure(AlgebraElement.one(), left).product(t)
        if right is not None:
            t = t.product(TensorElement.pure(right, AlgebraElement.one()))
        return t

    def opposite(self) -> TensorElement:
        """Swap the factors: ``(a (x) b)° = b (x) a``."""
        return TensorElement._wrap({(b, a): c for (a, b), c in self._terms.items()})

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self._terms == other._terms

    def __neg__(self) -> TensorElement:
        return TensorElement._wrap({k: -c for k, c in self._terms.items()})

    def __add__(self, other: TensorElement) -> TensorElement:
        if not isinstance(other, TensorElement):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(out, k, c)
        return TensorElement._wrap(out)

    def __sub__(self, other: TensorElement) -> TensorElement:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: object) -> TensorElement:
        if _is_scalar(other):
            return TensorElement._wrap({k: c * other for k, c in self._terms.items()})  # type: ignore[operator]
        if isinstance(other, TensorElement):
            return self.product(other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        return _signed_terms(
            (c, f"{render_word(a)} (x) {render_word(b)}") for (a, b), c in self.items()
        )

    def __repr__(self) -> str:
        return f"TensorElement({self})"


C = TypeVar("C")


class LaurentPolynomial(Generic[C]):
    """Laurent polynomial in a central formal variable.

    Coefficients are scalars or :class:`AlgebraElement` values; the variable
    commutes with them, so products keep the coefficient order.
    """

    __slots__ = ("_coefficients", "variable")

    def __init__(self, coefficients: Mapping[int, C] | None = None, variable: str = "lambda") -> None:
        """Build from an exponent to coefficient mapping; zero entries are dropped."""
        self.variable = variable
        self._coefficients: dict[int, C] = {
            k: c for k, c in (coefficients or {}).items() if c
        }

    @property
    def coefficients(self) -> Mapping[int, C]:
        """Read-only view of the exponent to coefficient map."""
        return MappingProxyType(self._coefficients)

    def get(self, exponent: int, default: C | None = None) -> C | None:
        """Coefficient of ``variable**exponent``."""
        return self._coefficients.get(exponent, default)

    def exponents(self) -> list[int]:
        """Exponents with non-zero coefficients, ascending."""
        return sorted(self._coefficients)

    def map(self, fn: Callable[[C], Any]) -> LaurentPolynomial[Any]:
        """Apply a function to every coefficient."""
        return LaurentPolynomial({k: fn(c) for k, c in self._coefficients.items()}, self.variable)

    def _check(self, other: LaurentPolynomial[Any]) -> None:
        if other.variable != self.variable:
            raise ValueError(f"Cannot combine polynomials in {self.variable} and {other.variable}")

    def __bool__(self) -> bool:
        return bool(self._coefficients)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.variable == other.variable and self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash((self.variable, frozenset(self._coefficients.items())))

    def __neg__(self) -> LaurentPolynomial[C]:
        return LaurentPolynomial({k: -c for k, c in self._coefficients.items()}, self.variable)  # type: ignore[operator]

    def __add__(self, other: LaurentPolynomial[C]) -> LaurentPolynomial[C]:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check(other)
        out = dict(self._coefficients)
        for k, c in other._coefficients.items():
            out[k] = out[k] + c if k in out else c  # type: ignore[operator]
        return LaurentPolynomial(out, self.variable)

    def __sub__(self, other: LaurentPolynomial[C]) -> LaurentPolynomial[C]:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: object) -> LaurentPolynomial[Any]:
        if isinstance(other, LaurentPolynomial):
            self._check(other)
            out: dict[int, Any] = {}
            for i, a in self._coefficients.items():
                for j, b in other._coefficients.items():
                    prod = a * b  # type: ignore[operator]
                    out[i + j] = out[i + j] + prod if i + j in out else prod
            return LaurentPolynomial(out, self.variable)
        if _is_scalar(other) or isinstance(other, AlgebraElement):
            return LaurentPolynomial(
                {k: c * other for k, c in self._coefficients.items()},  # type: ignore[operator]
                self.variable,
            )
        return NotImplemented

    def __rmul__(self, other: object) -> LaurentPolynomial[Any]:
        if _is_scalar(other) or isinstance(other, AlgebraElement):
            return LaurentPolynomial(
                {k: other * c for k, c in self._coefficients.items()},  # type: ignore[operator]
                self.variable,
            )
        return NotImplemented

    def __str__(self) -> str:
        if not self._coefficients:
            return "0"
        parts = []
        for k in self.exponents():
            coef = self._coefficients[k]
            power = "" if k == 0 else (f"{self.variable}" if k == 1 else f"{self.variable}^{k}")
            if not power:
                parts.append(f"({coef})")
            else:
                parts.append(f"({coef})*{power}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self})"


def letter(name: str, exponent: int = 1) -> AlgebraElement:
    """Shorthand for ``u``, ``v`` and their inverses as elements."""
    return AlgebraElement.letter(Letter.from_generator(name, exponent))


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Ring commutator ``ab - ba``."""
    return a * b - b * a


def hamiltonian_h() -> AlgebraElement:
    """The first Hamiltonian ``h = u + v + u^-1 + v^-1 + u^-1 v^-1``."""
    return AlgebraElement.from_terms(
        [
            ((Letter.U,), 1),
            ((Letter.V,), 1),
            ((Letter.U_INV,), 1),
            ((Letter.V_INV,), 1),
            ((Letter.U_INV, Letter.V_INV), 1),
        ]
    )


def casimir_c() -> AlgebraElement:
    """The group commutator ``c = u v u^-1 v^-1``."""
    return AlgebraElement.word((Letter.U, Letter.V, Letter.U_INV, Letter.V_INV))


def lax_partner() -> AlgebraElement:
    """The element ``v + u^-1`` with ``dh/dt = [h, v + u^-1]``."""
    return letter("v") + letter("u", -1)
