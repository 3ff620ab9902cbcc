"""Residuals of the bracket identities; every function returns zero when the identity holds."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

from .algebra import (
    AlgebraElement,
    Scalar,
    TensorElement,
    _accumulate,
    _signed_terms,
    casimir_c,
    hamiltonian_h,
    letter,
)
from .config import ResourceLimits
from .cyclic import CyclicElement, project
from .dbracket import GENERATOR_TABLE, HamiltonianFlow, double_bracket, loday_bracket
from .models import Letter, Word, render_word, word_mul

LOG = logging.getLogger(__name__)


def verify_leibniz(
    a: AlgebraElement, b: AlgebraElement, c: AlgebraElement
) -> tuple[TensorElement, TensorElement]:
    """Residuals of the Leibniz rules in the second and in the first argument."""
    right = (
        double_bracket(a, b * c)
        - double_bracket(a, b).outer_action(right=c)
        - double_bracket(a, c).outer_action(left=b)
    )
    left = (
        double_bracket(a * b, c)
        - double_bracket(a, c).inner_action(right=b)
        - double_bracket(b, c).inner_action(left=a)
    )
    return right, left


def verify_loday_leibniz(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement) -> AlgebraElement:
    """Residual of ``{a, bc} = {a, b} c + b {a, c}``."""
    return loday_bracket(a, b * c) - loday_bracket(a, b) * c - b * loday_bracket(a, c)


def verify_cyclic_first_arg(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement) -> AlgebraElement:
    """Residual ``{ab, c} - {ba, c}``."""
    return loday_bracket(a * b, c) - loday_bracket(b * a, c)


def verify_skew_mod_commutator(a: AlgebraElement, b: AlgebraElement) -> CyclicElement:
    """Residual ``pi({a, b} + {b, a})``."""
    return project(loday_bracket(a, b) + loday_bracket(b, a))


@dataclass
class SkewSigns:
    """Which sign of skew symmetry modulo commutators holds for a pair."""

    antisymmetric: bool
    """``pi({a, b} + {b, a}) == 0``."""

    symmetric: bool
    """``pi({a, b} - {b, a}) == 0``."""


def skew_signs(a: AlgebraElement, b: AlgebraElement) -> SkewSigns:
    """Test both sign variants of skew symmetry on one pair."""
    ab, ba = loday_bracket(a, b), loday_bracket(b, a)
    return SkewSigns(antisymmetric=not project(ab + ba), symmetric=not project(ab - ba))


def verify_jacobi(h1: AlgebraElement, h2: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """Residual ``{H1, {H2, x}} - {H2, {H1, x}} - {{H1, H2}, x}`` in the algebra itself."""
    return (
        loday_bracket(h1, loday_bracket(h2, x))
        - loday_bracket(h2, loday_bracket(h1, x))
        - loday_bracket(loday_bracket(h1, h2), x)
    )


def casimir_r() -> TensorElement:
    """The tensor ``r = uv (x) u^-1 v^-1``."""
    return TensorElement.from_terms([((Letter.U, Letter.V), (Letter.U_INV, Letter.V_INV), 1)])


def verify_right_casimir(a: AlgebraElement) -> tuple[TensorElement, AlgebraElement]:
    """Residual of ``<<a (x) c>> = (1 (x) a) r - r (a (x) 1)`` and the bracket ``{a, c}``."""
    r = casimir_r()
    one = AlgebraElement.one()
    expected = TensorElement.pure(one, a).product(r) - r.product(TensorElement.pure(a, one))
    return double_bracket(a, casimir_c()) - expected, loday_bracket(a, casimir_c())


def verify_casimir_traces(h: AlgebraElement) -> tuple[CyclicElement, CyclicElement]:
    """``pi({H, c})`` and ``pi({c, H})``; the class of c is central in the cyclic space."""
    c = casimir_c()
    return project(loday_bracket(h, c)), project(loday_bracket(c, h))


def left_casimir_bracket() -> AlgebraElement:
    """``{c, u}``, non-zero: c is a Casimir on the right only."""
    return loday_bracket(casimir_c(), letter("u"))


def verify_involution(n: int, m: int, limits: ResourceLimits | None = None) -> CyclicElement:
    """``pi({h^N, h^M})``, zero for commuting Hamiltonians.

    Raises:
        ResourceGuardError: when ``N + M`` is beyond the configured budget.
        ValueError: for non-positive powers.
    """
    if n < 1 or m < 1:
        raise ValueError("Powers N and M must be at least 1")
    (limits or ResourceLimits.from_env()).check_involution(n, m)
    h = hamiltonian_h()
    LOG.debug("Involution check N=%d, M=%d", n, m)
    return HamiltonianFlow(h**n).projected_derivative(h**m)


def is_trace_integral(x: AlgebraElement | CyclicElement, hamiltonian: AlgebraElement | None = None) -> bool:
    """True when ``pi({h, x}) == 0``, i.e. the class of x is conserved by the flow.

    The answer depends on x only through its class, so a cyclic element is
    lifted word by word.
    """
    if isinstance(x, CyclicElement):
        x = AlgebraElement._wrap(dict(x.terms))
    flow = HamiltonianFlow(hamiltonian if hamiltonian is not None else hamiltonian_h())
    return not flow.projected_derivative(x)


def _degree(x: Letter) -> int:
    return x.degree


def quadruple_potential(x1: Letter, x2: Letter, x3: Letter, x4: Letter) -> int:
    """Potential of four letters used in the brute-force Jacobi argument.

    Equals deg x2 when x2 = x4, deg x3 when x3 x4 = 1, and 0 otherwise, with
    deg v = deg u^-1 = 1 and deg u = deg v^-1 = -1.
    """
    del x1
    if x2 == x4:
        return _degree(x2)
    if x3 == x4.inverse():
        return _degree(x3)
    return 0


def _letters(text: str) -> tuple[Letter, ...]:
    return tuple(Letter.from_generator(ch) for ch in text)


QUADRUPLE_TABLE: Mapping[int, tuple[str, ...]] = {
    1: ("vvuv", "uvvv", "vvvv", "uvuv"),
    0: ("vvuu", "vuuv", "uvvu", "uuvv", "vvvu", "vuvv", "uvuu", "uuuv"),
    -1: ("vuuu", "vuvu", "uuuu", "uuvu"),
}
"""Values of the potential on all quadruples of positive letters."""


@dataclass
class QuadrupleReport:
    """Comparison of the potential formula with the tabulated values."""

    checked: int
    mismatches: list[dict[str, object]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """All tabulated entries reproduced."""
        return not self.mismatches and self.checked == 16  # noqa: PLR2004


def verify_quadruple_potential() -> QuadrupleReport:
    """Evaluate the potential formula on every tabulated quadruple."""
    report = QuadrupleReport(checked=0)
    for expected, words in QUADRUPLE_TABLE.items():
        for word in words:
            report.checked += 1
            actual = quadruple_potential(*_letters(word))
            if actual != expected:
                report.mismatches.append({"quadruple": word, "expected": expected, "actual": actual})
    return report


def strong_antisymmetry_residual(a: AlgebraElement, b: AlgebraElement) -> TensorElement:
    """``<<a (x) b>> + <<b (x) a>>°``, zero only for a strongly antisymmetric bracket."""
    return double_bracket(a, b) + double_bracket(b, a).opposite()


Triple = tuple[Word, Word, Word]


def _apply_r(m: int, n: int, terms: Mapping[Triple, Scalar]) -> dict[Triple, Scalar]:
    """Bracket slot m with slot n, writing the left factor to m and the right factor to n."""
    out: dict[Triple, Scalar] = {}
    for triple, coef in terms.items():
        a, b = triple[m], triple[n]
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                for x, y, c in GENERATOR_TABLE.terms(ai, bj):
                    slots = list(triple)
                    slots[m] = word_mul(word_mul(b[:j], x), a[i + 1 :])
                    slots[n] = word_mul(word_mul(a[:i], y), b[j + 1 :])
                    _accumulate(out, tuple(slots), coef * c)
    return out


def strong_jacobi_residual(a: AlgebraElement, b: AlgebraElement, c: AlgebraElement) -> dict[Triple, Scalar]:
    """``(R12 R23 + R31 R12 + R23 R31)(a (x) b (x) c)`` on triple tensors.

    Slots are numbered from 1 in the operator names; operators compose right to left.
    """
    start: dict[Triple, Scalar] = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            for wc, cc in c.terms.items():
                _accumulate(start, (wa, wb, wc), ca * cb * cc)
    pairs = (((0, 1), (1, 2)), ((2, 0), (0, 1)), ((1, 2), (2, 0)))
    total: dict[Triple, Scalar] = {}
    for outer, inner in pairs:
        for key, coef in _apply_r(*outer, _apply_r(*inner, start)).items():
            _accumulate(total, key, coef)
    return total


def render_triple(terms: Mapping[Triple, Scalar]) -> str:
    """Render a triple tensor as ``a (x) b (x) c`` terms."""
    return _signed_terms(
        (coef, " (x) ".join(render_word(w) for w in key)) for key, coef in sorted(terms.items())
    )


def equations_of_motion() -> dict[str, AlgebraElement]:
    """Flows ``{h, u}`` and ``{h, v}`` together with the Lax form of ``{h, h}``."""
    h = hamiltonian_h()
    return {
        "du/dt": loday_bracket(h, letter("u")),
        "dv/dt": loday_bracket(h, letter("v")),
        "dh/dt": loday_bracket(h, h),
    }


def hh_decomposition() -> tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
    """The elements a, b, e with ``<<h (x) h>> = 1 (x) a - h (x) b + e (x) 1``."""
    u, v = letter("u"), letter("v")
    ui, vi = letter("u", -1), letter("v", -1)
    a = sum(
        [ui, vi, -(ui * vi), vi * ui, ui * vi * ui, vi * ui * vi, ui * vi * ui * vi],
        AlgebraElement.zero(),
    )
    return a, ui * vi, u * v - v * u
