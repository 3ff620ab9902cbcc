"""Letters and reduced words of the free group on u, v."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from enum import IntEnum
from typing import TypeAlias

LOG = logging.getLogger(__name__)


class Letter(IntEnum):
    """Generators of the free group and their inverses.

    The integer values fix the canonical letter order u < u^-1 < v < v^-1, so
    tuples of letters compare lexicographically in that order.
    """

    U = 0
    U_INV = 1
    V = 2
    V_INV = 3

    @property
    def symbol(self) -> str:
        """Textual form used by the expression grammar."""
        return _SYMBOLS[self]

    @property
    def generator(self) -> str:
        """Name of the underlying generator, "u" or "v"."""
        return "u" if self in (Letter.U, Letter.U_INV) else "v"

    @property
    def exponent(self) -> int:
        """Exponent of the generator, +1 or -1."""
        return -1 if self in (Letter.U_INV, Letter.V_INV) else 1

    @property
    def degree(self) -> int:
        """Grading with deg v = deg u^-1 = +1 and deg u = deg v^-1 = -1."""
        return 1 if self in (Letter.V, Letter.U_INV) else -1

    def inverse(self) -> Letter:
        """Inverse letter; an involution."""
        return INVERSE[self]

    @classmethod
    def from_generator(cls, generator: str, exponent: int = 1) -> Letter:
        """Letter for generator "u"/"v" raised to +1 or -1."""
        match (generator, exponent):
            case ("u", 1):
                return cls.U
            case ("u", -1):
                return cls.U_INV
            case ("v", 1):
                return cls.V
            case ("v", -1):
                return cls.V_INV
        raise ValueError(f"No letter for {generator}^{exponent}")


_SYMBOLS = {
    Letter.U: "u",
    Letter.U_INV: "u^-1",
    Letter.V: "v",
    Letter.V_INV: "v^-1",
}

INVERSE: tuple[Letter, ...] = (Letter.U_INV, Letter.U, Letter.V_INV, Letter.V)
"""Inverse lookup indexed by letter value."""

LETTERS: tuple[Letter, ...] = tuple(Letter)

Word: TypeAlias = tuple[Letter, ...]
"""Freely reduced word; the empty tuple is the group identity."""

IDENTITY: Word = ()


def reduce(letters: Iterable[Letter]) -> Word:
    """Freely reduce a letter sequence.

    Stack-based cancellation reaches the unique reduced form in one pass.
    """
    stack: list[Letter] = []
    for letter in letters:
        if stack and stack[-1] == INVERSE[letter]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def is_reduced(letters: Sequence[Letter]) -> bool:
    """Check that no two adjacent letters are mutually inverse."""
    return all(letters[i + 1] != INVERSE[letters[i]] for i in range(len(letters) - 1))


def word_mul(a: Word, b: Word) -> Word:
    """Product of two reduced words, cancelling at the junction."""
    if not a:
        return b
    if not b:
        return a
    la = len(a)
    limit = min(la, len(b))
    k = 0
    while k < limit and a[la - 1 - k] == INVERSE[b[k]]:
        k += 1
    if k == 0:
        return a + b
    return a[: la - k] + b[k:]


def word_mul3(a: Word, b: Word, c: Word) -> Word:
    """Product of three reduced words."""
    return word_mul(word_mul(a, b), c)


def word_inv(a: Word) -> Word:
    """Group inverse: reverse the word and invert every letter."""
    return tuple(INVERSE[x] for x in reversed(a))


def word_key(w: Word) -> tuple[int, Word]:
    """Canonical order of words: by length, then lexicographically."""
    return (len(w), w)


def render_word(w: Word) -> str:
    """Render a word with runs collapsed into powers, e.g. ``u^2*v^-1``."""
    if not w:
        return "1"
    parts: list[str] = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        letter = w[i]
        power = (j - i) * letter.exponent
        parts.append(letter.generator if power == 1 else f"{letter.generator}^{power}")
        i = j
    return "*".join(parts)
