"""Configuration objects for the kontsevich-ncis tool."""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from enum import StrEnum, auto
from pathlib import Path
from typing import Annotated, Literal

from tyro.conf import EnumChoicesFromValues, Positional, arg

LOG = logging.getLogger(__name__)

MAX_TERMS_ENV = "NCIS_MAX_TERMS"
DEFAULT_MAX_TERMS = 5**10

SuiteName = Literal[
    "all",
    "casimir",
    "classical",
    "cyclic",
    "generators",
    "independence",
    "involution",
    "jacobi",
    "lax",
    "leibniz",
    "motion",
    "quadruple",
    "quantum",
    "skew",
    "strong-axioms",
]


class LogLevel(StrEnum):
    """Enumeration of logging levels."""

    DEBUG = auto()
    INFO = auto()
    WARNING = auto()
    ERROR = auto()
    CRITICAL = auto()


class ResourceGuardError(RuntimeError):
    """A computation would exceed the configured term budget."""


@dataclass
class ResourceLimits:
    """Term budget shared by the exponentially growing computations."""

    max_terms: int = DEFAULT_MAX_TERMS
    """Upper bound on the estimated number of terms of an intermediate result."""

    @classmethod
    def from_env(cls) -> ResourceLimits:
        """Read ``NCIS_MAX_TERMS`` from the environment, falling back to the default."""
        raw = os.environ.get(MAX_TERMS_ENV)
        if raw is None:
            return cls()
        try:
            value = int(raw)
        except ValueError as e:
            raise ResourceGuardError(f"{MAX_TERMS_ENV} must be an integer, got {raw!r}") from e
        if value <= 0:
            raise ResourceGuardError(f"{MAX_TERMS_ENV} must be positive, got {value}")
        LOG.debug("Resource limit overridden from environment: %d terms", value)
        return cls(max_terms=value)

    def check_involution(self, n: int, m: int) -> None:
        """Allow ``{h^N, h^M}`` while ``5**(N+M)`` fits the budget."""
        estimate = 5 ** (n + m)
        LOG.debug("Involution guard: N+M=%d, estimate %d, limit %d", n + m, estimate, self.max_terms)
        if estimate > self.max_terms:
            raise ResourceGuardError(
                f"Involution check for N={n}, M={m} needs about {estimate} terms, "
                f"limit is {self.max_terms} (set {MAX_TERMS_ENV} to raise it)"
            )

    def check_power(self, terms: int, length: int, exponent: int) -> None:
        """Allow ``e^n`` for ``e`` with ``terms`` words of length up to ``length``.

        The power has up to ``terms**|n|`` words of length up to ``length * |n|``;
        both must fit the budget.
        """
        n = abs(exponent)
        too_long = n * max(length, 1) > self.max_terms
        too_many = terms > 1 and n * math.log(terms) > math.log(self.max_terms)
        LOG.debug("Power guard: %d terms, length %d, exponent %d", terms, length, exponent)
        if too_long or too_many:
            raise ResourceGuardError(
                f"Power {exponent} of an element with {terms} terms of length {length} exceeds "
                f"the limit of {self.max_terms} (set {MAX_TERMS_ENV} to raise it)"
            )

    def check_trace_power(self, k: int) -> None:
        """Allow ``Tr L^k`` while ``2 * 10**k`` fits the budget."""
        estimate = 2 * 10**k
        LOG.debug("Trace power guard: k=%d, estimate %d, limit %d", k, estimate, self.max_terms)
        if estimate > self.max_terms:
            raise ResourceGuardError(
                f"Trace of L^{k} needs about {estimate} terms, "
                f"limit is {self.max_terms} (set {MAX_TERMS_ENV} to raise it)"
            )


@dataclass(kw_only=True)
class CommonConfig:
    """Options shared by every subcommand."""

    json: bool = False
    """Print machine-readable JSON on stdout instead of rich text."""

    log_level: Annotated[LogLevel, EnumChoicesFromValues, arg(aliases=["-l"])] = (
        LogLevel.INFO
    )
    """Logging level for the tool."""

    output_dir: Annotated[Path | None, arg(aliases=["-o"])] = None
    """Directory where tabular reports are written. Nothing is written when omitted."""

    output_format: Annotated[
        Literal["json", "csv", "parquet", "excel"], arg(aliases=["-f"])
    ] = "json"
    """Format of the report files written to the output directory."""

    drop_null_columns: bool = False
    """Leave out report columns that are null in every row, e.g. counterexamples of a passing run."""


@dataclass
class BracketConfig(CommonConfig):
    """Compute the double bracket or the Loday bracket of two expressions."""

    a: Positional[str]
    """First argument, e.g. ``u+v+u^-1+v^-1+u^-1*v^-1`` or ``h``."""

    b: Positional[str]
    """Second argument."""

    mode: Literal["double", "loday"] = "loday"
    """``double`` prints the tensor, ``loday`` its image under multiplication."""


@dataclass
class FlowConfig(CommonConfig):
    """Iterated time derivatives of an element under a Hamiltonian flow."""

    hamiltonian: Positional[str]
    """Hamiltonian expression; ``h`` and ``c`` name the built-in elements."""

    x: Positional[str]
    """Element whose derivatives are taken."""

    order: int = 1
    """Number of derivatives."""


@dataclass
class VerifyConfig(CommonConfig):
    """Run a verification suite and report residuals."""

    suite: Positional[SuiteName] = "all"
    """Suite to run, see the ``suites`` subcommand."""

    samples: Annotated[int, arg(aliases=["-n"])] = 1000
    """Number of random samples for property runs."""

    max_len: int = 6
    """Maximal word length of random monomials."""

    seed: int = 0
    """Seed of the random generators."""

    involution_max: int = 8
    """Largest N+M for the involution suite."""

    trace_power_max: int = 3
    """Largest k for trace integrals of L^k in the lax suite."""


@dataclass
class SimulateConfig(CommonConfig):
    """Integrate the matrix equations of motion and report conservation drift."""

    n: int = 4
    """Matrix dimension N."""

    t: float = 1.0
    """Final time T."""

    dt: float = 1e-3
    """Fixed RK4 step."""

    seed: int = 0
    """Seed of the random representation."""

    k_max: int = 4
    """Largest power k of the traced Hamiltonian."""

    lambda_samples: tuple[float, ...] = (0.5, 1.0, 2.0)
    """Spectral parameter values at which L(lambda) spectra are compared."""

    condition_bound: float = 1e3
    """Largest accepted condition number of U and V."""

    blow_up_norm: float = 1e8
    """Norm threshold that aborts the integration."""

    tolerance: float = 1e-6
    """Largest accepted relative drift of a conserved quantity."""

    backlund_tolerance: float = 1e-5
    """Largest accepted relative deviation of the Backlund-transformed trajectory."""

    backlund: bool = True
    """Also integrate the Backlund-transformed data and compare."""

    convergence: bool = True
    """Also estimate the convergence order by step halving."""


@dataclass
class SpanConfig(CommonConfig):
    """Express trace integrals of L^k in the h, c, c^-1 basis."""

    k_max: int = 3
    """Largest power of L."""

    degree: int | None = None
    """Word length bound of the basis; defaults to the longest word in pi(Tr L^k_max)."""


@dataclass
class EvalConfig(CommonConfig):
    """Parse an expression and print one of its canonical views."""

    expression: Positional[str]
    """Expression to evaluate."""

    view: Literal["algebra", "cyclic", "classical", "quantum"] = "algebra"
    """Canonical form to print."""

