"""Kontsevich system: noncommutative Hamiltonian formalism on the free group algebra."""

from .algebra import (
    AlgebraElement,
    LaurentPolynomial,
    TensorElement,
    casimir_c,
    commutator,
    hamiltonian_h,
)
from .cyclic import CyclicElement, project
from .dbracket import double_bracket, flow_derivative, loday_bracket, taylor_flow
from .lax import LaxMatrix, build_L, build_M
from .main import cli
from .models import Letter, Word
from .parsers import parse, render
from .verifiers import VerificationReport, Verifier

__all__ = [
    "AlgebraElement",
    "CyclicElement",
    "LaurentPolynomial",
    "LaxMatrix",
    "Letter",
    "TensorElement",
    "VerificationReport",
    "Verifier",
    "Word",
    "build_L",
    "build_M",
    "casimir_c",
    "cli",
    "commutator",
    "double_bracket",
    "flow_derivative",
    "hamiltonian_h",
    "loday_bracket",
    "parse",
    "project",
    "render",
    "taylor_flow",
]
