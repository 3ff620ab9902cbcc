"""Matrices over A[lambda, lambda^-1], the Lax pair, and the trace-integral span experiment."""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import polars as pl

from .algebra import AlgebraElement, LaurentPolynomial, hamiltonian_h, letter
from .config import ResourceLimits
from .cyclic import CyclicElement, labelled_hc_basis, project, span_membership
from .dbracket import HamiltonianFlow
from .schema import SPAN_SCHEMA

LOG = logging.getLogger(__name__)

LAMBDA = "lambda"

LambdaPoly = LaurentPolynomial[AlgebraElement]


class DimensionMismatchError(ValueError):
    """Matrix shapes do not conform."""


def lam(coefficients: dict[int, AlgebraElement]) -> LambdaPoly:
    """Polynomial in the spectral parameter from exponent to coefficient pairs."""
    return LaurentPolynomial(coefficients, LAMBDA)


class LaxMatrix:
    """Square matrix of Laurent polynomials in a central spectral parameter."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Sequence[Sequence[LambdaPoly | AlgebraElement]]) -> None:
        """Build from rows; plain algebra elements become constant polynomials."""
        rows = [
            tuple(e if isinstance(e, LaurentPolynomial) else lam({0: e}) for e in row)
            for row in entries
        ]
        if any(len(row) != len(rows) for row in rows):
            raise DimensionMismatchError(
                f"Matrix must be square, got row lengths {[len(r) for r in rows]}"
            )
        self._entries: tuple[tuple[LambdaPoly, ...], ...] = tuple(rows)

    @classmethod
    def identity(cls, size: int) -> LaxMatrix:
        """Identity matrix."""
        one, zero = AlgebraElement.one(), AlgebraElement.zero()
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)])

    @property
    def size(self) -> int:
        """Number of rows."""
        return len(self._entries)

    def __getitem__(self, index: tuple[int, int]) -> LambdaPoly:
        i, j = index
        return self._entries[i][j]

    def rows(self) -> tuple[tuple[LambdaPoly, ...], ...]:
        """All entries row by row."""
        return self._entries

    def map(self, fn: Callable[[AlgebraElement], AlgebraElement]) -> LaxMatrix:
        """Apply a function to every algebra coefficient of every entry."""
        return LaxMatrix([[e.map(fn) for e in row] for row in self._entries])

    def _conform(self, other: LaxMatrix) -> None:
        if other.size != self.size:
            raise DimensionMismatchError(
                f"Cannot combine {self.size}x{self.size} with {other.size}x{other.size}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaxMatrix):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __bool__(self) -> bool:
        return any(e for row in self._entries for e in row)

    def __add__(self, other: LaxMatrix) -> LaxMatrix:
        self._conform(other)
        return LaxMatrix(
            [
                [a + b for a, b in zip(ra, rb, strict=True)]
                for ra, rb in zip(self._entries, other._entries, strict=True)
            ]
        )

    def __neg__(self) -> LaxMatrix:
        return LaxMatrix([[-e for e in row] for row in self._entries])

    def __sub__(self, other: LaxMatrix) -> LaxMatrix:
        return self + (-other)

    def __matmul__(self, other: LaxMatrix) -> LaxMatrix:
        return mat_mul(self, other)

    def __str__(self) -> str:
        return "\n".join(" | ".join(str(e) for e in row) for row in self._entries)


def mat_mul(a: LaxMatrix, b: LaxMatrix) -> LaxMatrix:
    """Matrix product keeping the order of noncommuting entries."""
    a._conform(b)
    n = a.size
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = lam({})
            for k in range(n):
                acc = acc + a[i, k] * b[k, j]
            row.append(acc)
        out.append(row)
    return LaxMatrix(out)


def mat_commutator(a: LaxMatrix, b: LaxMatrix) -> LaxMatrix:
    """``AB - BA``."""
    return mat_mul(a, b) - mat_mul(b, a)


def mat_trace(a: LaxMatrix) -> LambdaPoly:
    """Sum of the diagonal entries."""
    acc = lam({})
    for i in range(a.size):
        acc = acc + a[i, i]
    return acc


def mat_power(a: LaxMatrix, k: int) -> LaxMatrix:
    """``A^k`` for ``k >= 0``."""
    if k < 0:
        raise ValueError("Only non-negative matrix powers are defined")
    result = LaxMatrix.identity(a.size)
    for _ in range(k):
        result = mat_mul(result, a)
    return result


def build_L() -> LaxMatrix:  # noqa: N802
    """The Lax matrix L(lambda)."""
    u, v = letter("u"), letter("v")
    ui, vi = letter("u", -1), letter("v", -1)
    one = AlgebraElement.one()
    return LaxMatrix(
        [
            [lam({0: vi + u}), lam({1: v, 0: vi * ui + ui + one})],
            [lam({0: vi, -1: u}), lam({0: v + vi * ui + ui, -1: one})],
        ]
    )


def build_M() -> LaxMatrix:  # noqa: N802
    """The companion matrix M(lambda) of the Lax pair."""
    u, v = letter("u"), letter("v")
    vi = letter("v", -1)
    return LaxMatrix(
        [
            [lam({0: vi - v + u}), lam({1: v})],
            [lam({0: vi}), lam({0: u})],
        ]
    )


def mat_flow_derivative(hamiltonian: AlgebraElement, x: LaxMatrix) -> LaxMatrix:
    """Apply the flow of ``hamiltonian`` to every coefficient; lambda is constant."""
    flow = HamiltonianFlow(hamiltonian)
    return x.map(flow.derivative)


def lax_residual(hamiltonian: AlgebraElement | None = None) -> LaxMatrix:
    """``dL/dt - [M, L]`` under the flow of h.

    With time fixed by ``du/dt = {h, u}`` the pair evolves as ``dL/dt = [M, L]``,
    which is ``[L, M]`` after reversing time or replacing M by -M.
    """
    h = hamiltonian if hamiltonian is not None else hamiltonian_h()
    big_l, big_m = build_L(), build_M()
    return mat_flow_derivative(h, big_l) - mat_commutator(big_m, big_l)


def cyclic_trace_power(k: int, limits: ResourceLimits | None = None) -> dict[int, CyclicElement]:
    """``pi`` of every lambda coefficient of ``Tr L^k``.

    Raises:
        ResourceGuardError: when ``k`` is beyond the configured budget.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    (limits or ResourceLimits.from_env()).check_trace_power(k)
    trace = mat_trace(mat_power(build_L(), k))
    LOG.debug("Tr L^%d has lambda exponents %s", k, trace.exponents())
    return {e: project(trace.coefficients[e]) for e in trace.exponents()}


def trace_integral_residuals(k: int, limits: ResourceLimits | None = None) -> dict[int, CyclicElement]:
    """``pi({h, x})`` for every lambda coefficient x of ``Tr L^k``."""
    flow = HamiltonianFlow(hamiltonian_h())
    return {
        e: flow.projected_derivative(AlgebraElement._wrap(dict(c.terms)))
        for e, c in cyclic_trace_power(k, limits).items()
    }


@dataclass
class SpanRow:
    """Membership of one lambda coefficient of ``pi(Tr L^k)``."""

    k: int
    exponent: int
    member: bool
    coordinates: dict[str, str]
    """Non-zero coordinates keyed by basis monomial label."""

    basis_size: int
    degree_bound: int
    trace_integral: bool


@dataclass
class SpanReport:
    """All rows of the span experiment plus the basis used."""

    degree_bound: int
    basis_labels: list[str]
    rows: list[SpanRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Every coefficient lies in the span."""
        return all(r.member for r in self.rows)

    def to_frame(self) -> pl.DataFrame:
        """Rows as a data frame with coordinates JSON-encoded."""
        return pl.DataFrame(
            [
                {
                    "k": r.k,
                    "exponent": r.exponent,
                    "member": r.member,
                    "coordinates": json.dumps(r.coordinates),
                    "basis_size": r.basis_size,
                    "degree_bound": r.degree_bound,
                    "trace_integral": r.trace_integral,
                }
                for r in self.rows
            ],
            schema=SPAN_SCHEMA,
        )

    def to_dict(self) -> dict[str, object]:
        """JSON shape keyed by ``k`` and lambda exponent."""
        return {
            "degree_bound": self.degree_bound,
            "basis": self.basis_labels,
            "passed": self.passed,
            "results": {
                f"k={r.k},lambda^{r.exponent}": {
                    "member": r.member,
                    "coordinates": r.coordinates,
                    "basis_size": r.basis_size,
                    "degree_bound": r.degree_bound,
                    "trace_integral": r.trace_integral,
                }
                for r in self.rows
            },
        }


def span_experiment(
    k_max: int = 3,
    degree_bound: int | None = None,
    limits: ResourceLimits | None = None,
) -> SpanReport:
    """Test each lambda coefficient of ``pi(Tr L^k)``, ``k <= k_max``, against the h, c, c^-1 basis.

    The default degree bound is the longest cyclic word among the coefficients
    of ``pi(Tr L^k_max)``.
    """
    limits = limits or ResourceLimits.from_env()
    traces = {k: cyclic_trace_power(k, limits) for k in range(1, k_max + 1)}
    if degree_bound is None:
        degree_bound = max((c.max_length() for c in traces[k_max].values()), default=0)
    labelled = labelled_hc_basis(degree_bound)
    labels = [label for label, _ in labelled]
    basis = [b for _, b in labelled]
    LOG.info("Span experiment: k <= %d, degree bound %d, basis size %d", k_max, degree_bound, len(basis))
    flow = HamiltonianFlow(hamiltonian_h())
    report = SpanReport(degree_bound=degree_bound, basis_labels=labels)
    for k, coefficients in traces.items():
        for exponent, target in coefficients.items():
            result = span_membership(target, basis)
            coordinates = (
                {labels[i]: str(c) for i, c in enumerate(result.coordinates) if c}
                if result.coordinates is not None
                else {}
            )
            integral = not flow.projected_derivative(AlgebraElement._wrap(dict(target.terms)))
            report.rows.append(
                SpanRow(
                    k=k,
                    exponent=exponent,
                    member=result.member,
                    coordinates=coordinates,
                    basis_size=len(basis),
                    degree_bound=degree_bound,
                    trace_integral=integral,
                )
            )
    return report
