"""Verification suites for the bracket identities, the Lax pair and the specializations."""

from __future__ import annotations

import json
import logging
import time
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterator
from dataclasses import asdict, dataclass, field
from typing import Any

import polars as pl

from .algebra import (
    AlgebraElement,
    TensorElement,
    commutator,
    hamiltonian_h,
    lax_partner,
    letter,
)
from .config import ResourceLimits, VerifyConfig
from .cyclic import project, rank
from .dbracket import (
    GENERATOR_TABLE,
    double_bracket,
    double_bracket_recursive,
    flow_derivative,
    loday_bracket,
)
from .identities import (
    equations_of_motion,
    hh_decomposition,
    left_casimir_bracket,
    render_triple,
    skew_signs,
    strong_antisymmetry_residual,
    strong_jacobi_residual,
    verify_casimir_traces,
    verify_cyclic_first_arg,
    verify_involution,
    verify_jacobi,
    verify_leibniz,
    verify_loday_leibniz,
    verify_quadruple_potential,
    verify_right_casimir,
    verify_skew_mod_commutator,
)
from .lax import LaxMatrix, lax_residual, trace_integral_residuals
from .models import IDENTITY, Letter
from .schema import VERIFICATION_SCHEMA
from .specialize import (
    abelianize,
    classical_poisson,
    ideal_perturbation,
    qweyl_normal_form,
    verify_flow_descends,
)
from .util import exact_rng, random_element, random_monomial, random_word

LOG = logging.getLogger(__name__)

U, UI, V, VI = Letter.U, Letter.U_INV, Letter.V, Letter.V_INV

PRINTED_GENERATOR_VALUES: dict[tuple[Letter, Letter], TensorElement] = {
    (U, V): TensorElement.from_terms([((V, U), IDENTITY, -1)]),
    (V, U): TensorElement.from_terms([((U, V), IDENTITY, 1)]),
    (UI, V): TensorElement.from_terms([((V,), (UI,), 1)]),
    (V, UI): TensorElement.from_terms([((V,), (UI,), -1)]),
    (U, VI): TensorElement.from_terms([((U,), (VI,), 1)]),
    (VI, U): TensorElement.from_terms([((U,), (VI,), -1)]),
    (UI, VI): TensorElement.from_terms([(IDENTITY, (UI, VI), -1)]),
    (VI, UI): TensorElement.from_terms([(IDENTITY, (VI, UI), 1)]),
}
"""Double brackets of letters from different families."""


@dataclass
class VerificationReport:
    """Outcome of one identity check."""

    identity: str
    samples: int
    max_residual_terms: int
    seed: int
    elapsed: float
    passed: bool
    counterexample: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready mapping."""
        return asdict(self)


def reports_frame(reports: list[VerificationReport]) -> pl.DataFrame:
    """Summary frame with details JSON-encoded."""
    return pl.DataFrame(
        [r.to_dict() | {"details": json.dumps(r.details, default=str)} for r in reports],
        schema=VERIFICATION_SCHEMA,
    )


def term_count(residual: object) -> int:
    """Number of non-zero terms of any residual produced by the suites."""
    if isinstance(residual, LaxMatrix):
        return sum(len(c) for row in residual.rows() for e in row for c in e.coefficients.values())
    if isinstance(residual, tuple):
        return sum(term_count(r) for r in residual)
    if hasattr(residual, "terms"):
        return len(residual.terms)
    if isinstance(residual, dict):
        return len(residual)
    return int(bool(residual))


class Tally:
    """Accumulates residuals of one identity over many samples."""

    def __init__(self, identity: str, seed: int) -> None:
        """Start the clock for ``identity``."""
        self.identity = identity
        self.seed = seed
        self.samples = 0
        self.max_terms = 0
        self.counterexample: str | None = None
        self._start = time.perf_counter()

    def record(self, residual: object, describe: Callable[[], str]) -> None:
        """Count one sample; remember the first failing one."""
        self.samples += 1
        terms = term_count(residual)
        self.max_terms = max(self.max_terms, terms)
        if terms and self.counterexample is None:
            self.counterexample = f"{describe()} -> residual {residual}"
            LOG.debug("Counterexample for %s: %s", self.identity, self.counterexample)

    def report(self, *, passed: bool | None = None, **details: Any) -> VerificationReport:
        """Close the tally; by default it passes when every residual vanished."""
        return VerificationReport(
            identity=self.identity,
            samples=self.samples,
            max_residual_terms=self.max_terms,
            seed=self.seed,
            elapsed=time.perf_counter() - self._start,
            passed=self.max_terms == 0 if passed is None else passed,
            counterexample=self.counterexample,
            details=details,
        )


class Verifier(ABC):
    """Base class of the verification suites."""

    NAME: str

    SUITES: dict[str, type[Verifier]] = {}

    def __init__(self, config: VerifyConfig | None = None, limits: ResourceLimits | None = None) -> None:
        """Initialize with sample settings and resource limits."""
        self.config = config if config is not None else VerifyConfig()
        self.limits = limits if limits is not None else ResourceLimits.from_env()

    def __init_subclass__(cls, **kwargs):
        """Register suite subclasses."""
        super().__init_subclass__(**kwargs)
        cls.SUITES[cls.NAME] = cls

    def run(self) -> list[VerificationReport]:
        """Run the suite and collect its reports."""
        LOG.debug(
            "Running suite %s with %d samples, max length %d, seed %d",
            self.NAME,
            self.config.samples,
            self.config.max_len,
            self.config.seed,
        )
        reports = list(self._check())
        LOG.debug("Suite %s finished: %d/%d passed", self.NAME, sum(r.passed for r in reports), len(reports))
        return reports

    @abstractmethod
    def _check(self) -> Iterator[VerificationReport]:
        """Yield one report per identity."""

    def _tally(self, identity: str) -> Tally:
        return Tally(identity, self.config.seed)

    @classmethod
    def create(
        cls, name: str, config: VerifyConfig | None = None, limits: ResourceLimits | None = None
    ) -> Verifier:
        """Create a suite by name."""
        if name not in cls.SUITES:
            raise ValueError(f"Unknown verification suite: {name}")
        return cls.SUITES[name](config, limits)

    @classmethod
    def suites_info(cls) -> dict[str, str]:
        """Names and descriptions of the registered suites."""
        return {k: v.__doc__ for k, v in cls.SUITES.items() if v.__doc__}


class AllSuites(Verifier):
    """Run every registered suite."""

    NAME = "all"

    def _check(self) -> Iterator[VerificationReport]:
        for suite in self.SUITES.values():
            if suite is not AllSuites:
                yield from suite(self.config, self.limits).run()


class GeneratorSuite(Verifier):
    """Derived double brackets of all 16 letter pairs against the tabulated values."""

    NAME = "generators"

    def _check(self) -> Iterator[VerificationReport]:
        tally = self._tally("generator table")
        for key, value in GENERATOR_TABLE.entries.items():
            expected = PRINTED_GENERATOR_VALUES.get(key, TensorElement.zero())
            tally.record(value - expected, lambda key=key: f"<<{key[0].symbol} (x) {key[1].symbol}>>")
        yield tally.report()


class MotionSuite(Verifier):
    """Equations of motion, the double bracket of h with itself, and the Lax form of {h, h}."""

    NAME = "motion"

    def _check(self) -> Iterator[VerificationReport]:
        u, v = letter("u"), letter("v")
        ui, vi = letter("u", -1), letter("v", -1)
        flows = equations_of_motion()
        tally = self._tally("equations of motion")
        tally.record(flows["du/dt"] - (u * v - u * vi - vi), lambda: "{h, u}")
        tally.record(flows["dv/dt"] - (-(v * u) + v * ui + ui), lambda: "{h, v}")
        yield tally.report(**{k: str(e) for k, e in flows.items()})

        h, one = hamiltonian_h(), AlgebraElement.one()
        a, b, e = hh_decomposition()
        tally = self._tally("double bracket of h with h")
        expected = TensorElement.pure(one, a) - TensorElement.pure(h, b) + TensorElement.pure(e, one)
        tally.record(double_bracket(h, h) - expected, lambda: "<<h (x) h>>")
        yield tally.report()

        tally = self._tally("{h, h} is a commutator")
        tally.record(flows["dh/dt"] - commutator(h, lax_partner()), lambda: "{h, h} - [h, v + u^-1]")
        yield tally.report(**{"dh/dt": str(flows["dh/dt"])})


class LeibnizSuite(Verifier):
    """Leibniz rules of the double bracket and of the multiplied bracket on random words."""

    NAME = "leibniz"

    def _check(self) -> Iterator[VerificationReport]:
        rng = exact_rng(self.config.seed)
        double = self._tally("double bracket Leibniz rules")
        oracle = self._tally("explicit formula matches recursive Leibniz expansion")
        multiplied = self._tally("{a, bc} = {a, b} c + b {a, c}")
        for _ in range(self.config.samples):
            a, b, c = (random_monomial(rng, self.config.max_len) for _ in range(3))
            double.record(verify_leibniz(a, b, c), lambda a=a, b=b, c=c: f"a={a}, b={b}, c={c}")
            oracle.record(
                double_bracket(a, b) - double_bracket_recursive(a, b), lambda a=a, b=b: f"a={a}, b={b}"
            )
            x, y, z = (random_element(rng, self.config.max_len) for _ in range(3))
            multiplied.record(verify_loday_leibniz(x, y, z), lambda x=x, y=y, z=z: f"a={x}, b={y}, c={z}")
        yield double.report()
        yield oracle.report()
        yield multiplied.report()


class CyclicSuite(Verifier):
    """Invariance of the bracket under cyclic permutation of the first argument."""

    NAME = "cyclic"

    def _check(self) -> Iterator[VerificationReport]:
        rng = exact_rng(self.config.seed)
        first = self._tally("{ab, c} = {ba, c}")
        rotated = self._tally("flow of H depends only on the cyclic class of H")
        for _ in range(self.config.samples):
            a, b, c = (random_monomial(rng, self.config.max_len) for _ in range(3))
            first.record(verify_cyclic_first_arg(a, b, c), lambda a=a, b=b, c=c: f"a={a}, b={b}, c={c}")
            w = random_word(rng, self.config.max_len, min_len=1)
            shift = rng.randrange(len(w))
            x = random_element(rng, self.config.max_len)
            original, turned = AlgebraElement.word(w), AlgebraElement.word(w[shift:] + w[:shift])
            rotated.record(
                flow_derivative(original, x) - flow_derivative(turned, x),
                lambda original=original, turned=turned, x=x: f"H={original}, rotated={turned}, x={x}",
            )
        yield first.report()
        yield rotated.report()


class SkewSuite(Verifier):
    """Skew symmetry modulo commutators, with the sign variant observed on each pair."""

    NAME = "skew"

    def _check(self) -> Iterator[VerificationReport]:
        rng = exact_rng(self.config.seed)
        tally = self._tally("pi({a, b} + {b, a}) = 0")
        antisymmetric = symmetric = 0
        for _ in range(self.config.samples):
            a, b = (random_element(rng, self.config.max_len) for _ in range(2))
            tally.record(verify_skew_mod_commutator(a, b), lambda a=a, b=b: f"a={a}, b={b}")
            signs = skew_signs(a, b)
            antisymmetric += signs.antisymmetric
            symmetric += signs.symmetric
        yield tally.report(antisymmetric_pairs=antisymmetric, symmetric_pairs=symmetric)


class JacobiSuite(Verifier):
    """Exact Jacobi identity of the multiplied bracket on random words with inverse letters."""

    NAME = "jacobi"

    def _check(self) -> Iterator[VerificationReport]:
        rng = exact_rng(self.config.seed)
        tally = self._tally("{H1, {H2, x}} - {H2, {H1, x}} = {{H1, H2}, x}")
        h = hamiltonian_h()
        tally.record(verify_jacobi(h, h**2, letter("u")), lambda: "H1=h, H2=h^2, x=u")
        for _ in range(self.config.samples):
            h1, h2, x = (random_monomial(rng, self.config.max_len) for _ in range(3))
            tally.record(verify_jacobi(h1, h2, x), lambda h1=h1, h2=h2, x=x: f"H1={h1}, H2={h2}, x={x}")
        yield tally.report()


class CasimirSuite(Verifier):
    """c is a right Casimir, not a left one, and its class is central in the cyclic space."""

    NAME = "casimir"

    def _check(self) -> Iterator[VerificationReport]:
        rng = exact_rng(self.config.seed)
        right = self._tally("<<a (x) c>> = (1 (x) a) r - r (a (x) 1) and {a, c} = 0")
        traces = self._tally("pi({H, c}) = pi({c, H}) = 0")
        for _ in range(self.config.samples):
            a = random_element(rng, self.config.max_len)
            right.record(verify_right_casimir(a), lambda a=a: f"a={a}")
            traces.record(verify_casimir_traces(a), lambda a=a: f"H={a}")
        yield right.report()
        yield traces.report()

        u, v = letter("u"), letter("v")
        ui, vi = letter("u", -1), letter("v", -1)
        left = self._tally("{c, u} is the known non-zero element")
        value = left_casimir_bracket()
        left.record(value - (u * v * ui * vi * u - u * u * v * ui * vi), lambda: "{c, u}")
        yield left.report(**{"{c, u}": str(value)})


class InvolutionSuite(Verifier):
    """pi({h^N, h^M}) = 0 for all N, M >= 1 with N + M up to the configured maximum, in both orders."""

    NAME = "involution"

    def _check(self) -> Iterator[VerificationReport]:
        tally = self._tally("powers of h are in involution")
        top = self.config.involution_max
        for n in range(1, top):
            for m in range(1, top - n + 1):
                tally.record(verify_involution(n, m, self.limits), lambda n=n, m=m: f"N={n}, M={m}")
        yield tally.report(max_sum=top)


class IndependenceSuite(Verifier):
    """Classes of h, h^2, ..., h^6 are linearly independent."""

    NAME = "independence"

    def _check(self) -> Iterator[VerificationReport]:
        tally = self._tally("rank of pi(h^k), k <= 6")
        h = hamiltonian_h()
        powers, power = [], AlgebraElement.one()
        for _ in range(6):
            power = power * h
            powers.append(project(power))
        found = rank(powers)
        tally.samples = len(powers)
        yield tally.report(passed=found == len(powers), rank=found)


class LaxSuite(Verifier):
    """Lax equation for L, M and conservation of the trace integrals of L^k."""

    NAME = "lax"

    def _check(self) -> Iterator[VerificationReport]:
        tally = self._tally("dL/dt = [M, L]")
        tally.record(lax_residual(), lambda: "dL/dt - [M, L]")
        yield tally.report()

        traces = self._tally("pi({h, Tr L^k}) = 0")
        for k in range(1, self.config.trace_power_max + 1):
            for exponent, residual in trace_integral_residuals(k, self.limits).items():
                traces.record(residual, lambda k=k, exponent=exponent: f"k={k}, lambda^{exponent}")
        yield traces.report(k_max=self.config.trace_power_max)


class QuadrupleSuite(Verifier):
    """Closed formula of the four-letter potential against its table."""

    NAME = "quadruple"

    def _check(self) -> Iterator[VerificationReport]:
        start = time.perf_counter()
        result = verify_quadruple_potential()
        yield VerificationReport(
            identity="four-letter potential",
            samples=result.checked,
            max_residual_terms=len(result.mismatches),
            seed=self.config.seed,
            elapsed=time.perf_counter() - start,
            passed=result.passed,
            counterexample=json.dumps(result.mismatches[0]) if result.mismatches else None,
        )


class ClassicalSuite(Verifier):
    """Abelianization carries the bracket to the log-canonical Poisson bracket."""

    NAME = "classical"

    def _check(self) -> Iterator[VerificationReport]:
        rng = exact_rng(self.config.seed)
        tally = self._tally("abelianize {a, b} = {ab(a), ab(b)}")
        axioms = self._tally("classical bracket is antisymmetric and satisfies Jacobi")
        for _ in range(self.config.samples):
            a, b, c = (random_element(rng, self.config.max_len) for _ in range(3))
            f, g, k = abelianize(a), abelianize(b), abelianize(c)
            tally.record(
                abelianize(loday_bracket(a, b)) - classical_poisson(f, g), lambda a=a, b=b: f"a={a}, b={b}"
            )
            jacobi = (
                classical_poisson(f, classical_poisson(g, k))
                + classical_poisson(g, classical_poisson(k, f))
                + classical_poisson(k, classical_poisson(f, g))
            )
            axioms.record(
                (classical_poisson(f, g) + classical_poisson(g, f), jacobi),
                lambda f=f, g=g, k=k: f"f={f}, g={g}, k={k}",
            )
        yield tally.report()
        yield axioms.report()


class QuantumSuite(Verifier):
    """q-Weyl normal form is multiplicative, the flow descends to it, and q = 1 is the classical limit."""

    NAME = "quantum"

    def _check(self) -> Iterator[VerificationReport]:
        rng = exact_rng(self.config.seed)
        product = self._tally("nf(ab) = nf(a) nf(b)")
        descends = self._tally("flow of h preserves the ideal (c - q)")
        limit = self._tally("nf at q = 1 equals abelianization")
        for _ in range(self.config.samples):
            a, b = (random_element(rng, self.config.max_len) for _ in range(2))
            product.record(
                qweyl_normal_form(a * b) - qweyl_normal_form(a) * qweyl_normal_form(b),
                lambda a=a, b=b: f"a={a}, b={b}",
            )
            left, right = (random_monomial(rng, self.config.max_len) for _ in range(2))
            perturbed = ideal_perturbation(a, left, right)
            descends.record(
                verify_flow_descends(a, perturbed),
                lambda a=a, left=left, right=right: f"x={a}, perturbation {left} (c - q) {right}",
            )
            limit.record(qweyl_normal_form(a).at_q_one() - abelianize(a), lambda a=a: f"a={a}")
        yield product.report()
        yield descends.report()
        yield limit.report()


class StrongAxiomsSuite(Verifier):
    """Negative control: strong antisymmetry and the triple-bracket Jacobi identity both fail."""

    NAME = "strong-axioms"

    def _check(self) -> Iterator[VerificationReport]:
        u, v = letter("u"), letter("v")
        antisymmetry = self._tally("strong antisymmetry fails for (u, v)")
        residual = strong_antisymmetry_residual(u, v)
        antisymmetry.samples = 1
        antisymmetry.max_terms = term_count(residual)
        yield antisymmetry.report(passed=bool(residual), residual=str(residual))

        jacobi = self._tally("triple-bracket Jacobi fails for (u, v, v)")
        triple = strong_jacobi_residual(u, v, v)
        jacobi.samples = 1
        jacobi.max_terms = len(triple)
        yield jacobi.report(passed=bool(triple), residual=render_triple(triple))


def run_suite(
    name: str, config: VerifyConfig | None = None, limits: ResourceLimits | None = None
) -> list[VerificationReport]:
    """Run the named suite."""
    return Verifier.create(name, config, limits).run()

