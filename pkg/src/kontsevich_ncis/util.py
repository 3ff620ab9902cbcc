"""Seeded random generators for property runs."""

from __future__ import annotations

import random

import numpy as np

from .algebra import AlgebraElement
from .models import LETTERS, Word, reduce


def random_word(rng: random.Random, max_len: int, *, min_len: int = 0) -> Word:
    """Reduced word over u, u^-1, v, v^-1 with length between ``min_len`` and ``max_len``.

    Letters are drawn so that no cancellation happens, hence the length is exact.
    """
    length = rng.randint(min_len, max_len)
    letters = []
    for _ in range(length):
        choices = [x for x in LETTERS if not letters or x != letters[-1].inverse()]
        letters.append(rng.choice(choices))
    return reduce(letters)


def random_monomial(rng: random.Random, max_len: int) -> AlgebraElement:
    """A single word with coefficient 1."""
    return AlgebraElement.word(random_word(rng, max_len))


def random_element(rng: random.Random, max_len: int, *, max_terms: int = 3) -> AlgebraElement:
    """Sum of up to ``max_terms`` words with coefficients in +-1..3."""
    out = AlgebraElement.zero()
    for _ in range(rng.randint(1, max_terms)):
        coef = rng.choice((-3, -2, -1, 1, 2, 3))
        out = out + AlgebraElement.word(random_word(rng, max_len), coef)
    return out


def exact_rng(seed: int) -> random.Random:
    """Generator for the exact symbolic side."""
    return random.Random(seed)  # noqa: S311


def numeric_rng(seed: int) -> np.random.Generator:
    """Generator for the numeric side."""
    return np.random.default_rng(seed)
