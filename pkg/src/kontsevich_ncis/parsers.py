"""Parse algebra expressions such as ``u*v^-1 + 2*u^-1*v^-1 - 1``."""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import cache

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from .algebra import (
    AlgebraElement,
    NotInvertibleError,
    TensorElement,
    as_scalar,
    casimir_c,
    hamiltonian_h,
)
from .config import ResourceGuardError, ResourceLimits
from .models import Letter

LOG = logging.getLogger(__name__)


class ExpressionError(ValueError):
    """Input text is not a valid algebra expression."""

    def __init__(self, message: str, position: int | None = None) -> None:
        """Store the message and the 0-based character offset of the problem."""
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class ExpressionSyntaxError(ExpressionError):
    """Expression is malformed, e.g. a dangling operator."""


class UnknownSymbolError(ExpressionError):
    """Expression contains a symbol other than u, v, h, c, digits and operators."""

    def __init__(self, symbol: str, position: int | None = None) -> None:
        """Store the offending symbol."""
        super().__init__(f"Unknown symbol {symbol!r}", position)
        self.symbol = symbol


class ExpressionParser:
    """Parse expression strings into :class:`AlgebraElement` values with a Lark grammar."""

    EXPRESSION_GRAMMAR = r"""
    start: [SIGN] term (SIGN term)*

    // Either a rational coefficient followed by factors, or factors only.
    term: coefficient ("*" factor)*
        | factor ("*" factor)*

    coefficient: INT ["/" INT]

    // Exponents expand to repeated letters; h and c name the built-in elements.
    factor: (GENERATOR | CONSTANT) ["^" SIGNED_INT]

    SIGN: "+" | "-"
    GENERATOR: "u" | "v"
    CONSTANT: "h" | "c"

    %import common.INT
    %import common.SIGNED_INT
    %import common.WS
    %ignore WS
    """

    KNOWN_CHARACTERS = frozenset("uvhc0123456789+-*/^ \t\r\n")

    class ExpressionTransformer(Transformer):
        """Transform Lark parse tree to an algebra element."""

        def __init__(self, limits: ResourceLimits) -> None:
            """Keep the limits that bound exponents."""
            super().__init__()
            self.limits = limits

        def start(self, items):  # noqa: D102
            result = AlgebraElement.zero()
            sign = 1
            for item in items:
                if item is None:
                    continue
                if isinstance(item, str):
                    sign = -1 if item == "-" else 1
                    continue
                result = result + item * sign
                sign = 1
            return result

        def term(self, items):  # noqa: D102
            result = AlgebraElement.one()
            for item in items:
                result = result * item
            return result

        @v_args(inline=True)
        def coefficient(self, numerator, denominator=None):  # noqa: D102
            if denominator is None:
                return numerator
            if denominator == 0:
                raise ExpressionSyntaxError("Zero denominator in coefficient")
            return as_scalar(Fraction(numerator, denominator))

        CONSTANTS = {"h": hamiltonian_h, "c": casimir_c}

        @v_args(inline=True)
        def factor(self, symbol, exponent=None):  # noqa: D102
            name = str(symbol)
            if name in self.CONSTANTS:
                base = self.CONSTANTS[name]()
            else:
                base = AlgebraElement.letter(Letter.from_generator(name))
            exponent = 1 if exponent is None else exponent
            self.limits.check_power(len(base), base.max_length(), exponent)
            try:
                return base ** exponent
            except NotInvertibleError as e:
                raise ExpressionSyntaxError(f"{name}^{exponent}: {e}", symbol.start_pos) from e

        INT = int
        SIGNED_INT = int

        def SIGN(self, token):  # noqa: D102, N802
            return str(token)

    def __init__(self) -> None:
        """Initialize ExpressionParser."""
        self._parser = Lark(self.EXPRESSION_GRAMMAR, parser="lalr")

    def parse(self, text: str, limits: ResourceLimits | None = None) -> AlgebraElement:
        """Parse expression text to an element.

        Exponents are checked against ``limits``, read from the environment by default.

        Raises:
            ResourceGuardError: an exponent would expand beyond the limits.
            UnknownSymbolError: text contains a character outside the grammar.
            ExpressionSyntaxError: text is otherwise malformed.
        """
        transformer = self.ExpressionTransformer(limits or ResourceLimits.from_env())
        try:
            return transformer.transform(self._parser.parse(text))
        except UnexpectedCharacters as e:
            if e.char not in self.KNOWN_CHARACTERS:
                raise UnknownSymbolError(e.char, e.pos_in_stream) from e
            raise ExpressionSyntaxError(f"Unexpected {e.char!r}", e.pos_in_stream) from e
        except UnexpectedEOF as e:
            raise ExpressionSyntaxError("Unexpected end of expression", len(text)) from e
        except UnexpectedInput as e:
            token = getattr(e, "token", None)
            position = getattr(token, "start_pos", None)
            raise ExpressionSyntaxError(f"Unexpected token {token!s}", position) from e
        except VisitError as e:
            if isinstance(e.orig_exc, ExpressionError | ResourceGuardError):
                raise e.orig_exc from e
            raise


@cache
def _default_parser() -> ExpressionParser:
    return ExpressionParser()


def parse(text: str, limits: ResourceLimits | None = None) -> AlgebraElement:
    """Parse an expression with the shared parser instance."""
    LOG.debug("Parsing expression %r", text)
    return _default_parser().parse(text, limits)


def render(element: AlgebraElement | TensorElement) -> str:
    """Canonical text form; ``parse(render(e)) == e`` for algebra elements."""
    return str(element)
