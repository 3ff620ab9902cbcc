"""Matrix representations: evaluation, RK4 integration of the equations of motion, drift checks.

A representation sends u, v to invertible complex N x N matrices U, V. The
equations of motion become the matrix ODE

    dU/dt = UV - UV^-1 - V^-1,    dV/dt = -VU + VU^-1 + U^-1

whose exact invariants (traces of powers of h, the Casimir matrix, spectra of
h and of L(lambda)) measure the integrator error.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import polars as pl

from .algebra import AlgebraElement, casimir_c, hamiltonian_h
from .lax import LaxMatrix, build_L
from .models import Letter
from .schema import DRIFT_SCHEMA
from .specialize import CommutativeLaurent

LOG = logging.getLogger(__name__)

SINGULAR_CONDITION = 1e12
"""Condition number above which a matrix is treated as singular."""


class SingularRepresentationError(ArithmeticError):
    """U, V or a transformed generator is numerically singular."""


class BlowUpError(ArithmeticError):
    """The trajectory left the configured norm bound."""


def _solve_inverse(a: np.ndarray, what: str) -> np.ndarray:
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > SINGULAR_CONDITION:
        raise SingularRepresentationError(f"{what} is singular (condition number {cond:.3g})")
    return np.linalg.solve(a, np.eye(a.shape[0], dtype=a.dtype))


@dataclass(frozen=True, eq=False)
class NumericRep:
    """Images U, V of the generators."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        """Check shapes."""
        square = self.u.ndim == 2 and self.u.shape[0] == self.u.shape[1]  # noqa: PLR2004
        if self.u.shape != self.v.shape or not square:
            raise ValueError(f"U and V must be square of equal size, got {self.u.shape} and {self.v.shape}")

    @property
    def n(self) -> int:
        """Matrix dimension."""
        return self.u.shape[0]

    def inverses(self) -> tuple[np.ndarray, np.ndarray]:
        """``U^-1`` and ``V^-1`` by linear solves.

        Raises:
            SingularRepresentationError: U or V is numerically singular.
        """
        return _solve_inverse(self.u, "U"), _solve_inverse(self.v, "V")

    @cached_property
    def letter_images(self) -> dict[Letter, np.ndarray]:
        """Matrices of the four letters, computed once."""
        u_inv, v_inv = self.inverses()
        return {Letter.U: self.u, Letter.U_INV: u_inv, Letter.V: self.v, Letter.V_INV: v_inv}

    @classmethod
    def scalar(cls, u: complex, v: complex) -> NumericRep:
        """One-dimensional representation, i.e. the commutative case."""
        return cls(np.array([[u]], dtype=complex), np.array([[v]], dtype=complex))


def _unit_disc(rng: np.random.Generator, n: int) -> np.ndarray:
    radius = np.sqrt(rng.uniform(0.0, 1.0, size=(n, n)))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=(n, n))
    return radius * np.exp(1j * angle)


def random_rep(
    n: int,
    rng: np.random.Generator,
    *,
    condition_bound: float = 1e3,
    max_attempts: int = 100,
) -> NumericRep:
    """Sample U, V with entries uniform on the unit disc shifted by 2I.

    Samples whose condition number exceeds ``condition_bound`` are rejected.
    """
    shift = 2.0 * np.eye(n)
    for attempt in range(max_attempts):
        u = _unit_disc(rng, n) + shift
        v = _unit_disc(rng, n) + shift
        if max(np.linalg.cond(u), np.linalg.cond(v)) <= condition_bound:
            LOG.debug("Random %dx%d representation accepted after %d attempts", n, n, attempt + 1)
            return NumericRep(u, v)
    raise SingularRepresentationError(
        f"No representation with condition number <= {condition_bound} in {max_attempts} attempts"
    )


def evaluate(e: AlgebraElement, rep: NumericRep) -> np.ndarray:
    """Homomorphic image of an element: words become matrix products."""
    images = rep.letter_images
    out = np.zeros((rep.n, rep.n), dtype=complex)
    for w, c in e.terms.items():
        m = np.eye(rep.n, dtype=complex)
        for x in w:
            m = m @ images[x]
        out += float(c) * m
    return out


def evaluate_commutative(f: CommutativeLaurent, u: complex, v: complex) -> complex:
    """Value of a commutative Laurent polynomial at a point."""
    return complex(sum(float(c) * u**m * v**n for (m, n), c in f.terms.items()))


def evaluate_lax(matrix: LaxMatrix, rep: NumericRep, spectral: complex) -> np.ndarray:
    """Block matrix of a Lax matrix at a numeric spectral parameter."""
    blocks = []
    for row in matrix.rows():
        blocks.append(
            [
                sum(
                    (spectral**k * evaluate(c, rep) for k, c in entry.coefficients.items()),
                    np.zeros((rep.n, rep.n), dtype=complex),
                )
                for entry in row
            ]
        )
    return np.block(blocks)


def vector_field(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Right-hand side of the matrix equations of motion."""
    u_inv = _solve_inverse(u, "U")
    v_inv = _solve_inverse(v, "V")
    return u @ v - u @ v_inv - v_inv, -v @ u + v @ u_inv + u_inv


@dataclass
class Trajectory:
    """States of a fixed-step integration at every step."""

    times: np.ndarray
    u: np.ndarray
    """Stacked U matrices, shape (steps + 1, N, N)."""

    v: np.ndarray
    dt: float
    method: str = "rk4"

    def state(self, i: int) -> NumericRep:
        """Representation at step i."""
        return NumericRep(self.u[i], self.v[i])

    def __len__(self) -> int:
        return len(self.times)


def integrate(
    rep0: NumericRep,
    t_final: float,
    dt: float,
    *,
    blow_up_norm: float = 1e8,
) -> Trajectory:
    """Classical fixed-step RK4 from ``rep0`` up to ``t_final``.

    The step is adjusted to ``t_final / round(t_final / dt)`` so the grid is uniform.

    Raises:
        BlowUpError: a state norm exceeds ``blow_up_norm``.
        SingularRepresentationError: U or V becomes numerically singular.
    """
    if dt <= 0 or t_final <= 0:
        raise ValueError("T and dt must be positive")
    steps = max(1, round(t_final / dt))
    h = t_final / steps
    us = np.empty((steps + 1, rep0.n, rep0.n), dtype=complex)
    vs = np.empty_like(us)
    us[0], vs[0] = rep0.u, rep0.v
    u, v = rep0.u.astype(complex), rep0.v.astype(complex)
    for i in range(steps):
        k1u, k1v = vector_field(u, v)
        k2u, k2v = vector_field(u + 0.5 * h * k1u, v + 0.5 * h * k1v)
        k3u, k3v = vector_field(u + 0.5 * h * k2u, v + 0.5 * h * k2v)
        k4u, k4v = vector_field(u + h * k3u, v + h * k3v)
        u = u + h / 6.0 * (k1u + 2.0 * (k2u + k3u) + k4u)
        v = v + h / 6.0 * (k1v + 2.0 * (k2v + k3v) + k4v)
        norm = max(np.linalg.norm(u), np.linalg.norm(v))
        if not np.isfinite(norm) or norm > blow_up_norm:
            raise BlowUpError(f"State norm {norm:.3g} exceeded {blow_up_norm:.3g} at t={(i + 1) * h:.6g}")
        us[i + 1], vs[i + 1] = u, v
    LOG.debug("Integrated %d RK4 steps of size %g for N=%d", steps, h, rep0.n)
    return Trajectory(times=np.linspace(0.0, t_final, steps + 1), u=us, v=vs, dt=h)


def _relative(delta: float, scale: float) -> float:
    return delta / scale if scale > np.finfo(float).tiny else delta


def spectrum_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two eigenvalue sets."""
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass
class DriftReport:
    """Relative drift series of conserved quantities."""

    times: np.ndarray
    series: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def max_drift(self) -> dict[str, float]:
        """Largest drift per quantity."""
        return {name: float(np.max(values)) for name, values in self.series.items()}

    def within(self, tolerance: float) -> bool:
        """Every quantity stays within ``tolerance``."""
        return all(d <= tolerance for d in self.max_drift.values())

    def to_frame(self) -> pl.DataFrame:
        """Long-format frame of (quantity, time, drift)."""
        frames = [
            pl.DataFrame(
                {"quantity": [name] * len(self.times), "time": self.times, "drift": values},
                schema=DRIFT_SCHEMA,
            )
            for name, values in self.series.items()
        ]
        return pl.concat(frames) if frames else pl.DataFrame(schema=DRIFT_SCHEMA)


def conservation_report(
    traj: Trajectory,
    k_max: int = 4,
    lambda_samples: Sequence[float] = (0.5, 1.0, 2.0),
) -> DriftReport:
    """Drift of ``Tr phi(h)^k``, the spectrum of phi(h), the Casimir matrix and L(lambda) spectra.

    Every drift is relative to the size of the initial value.
    """
    h, c, big_l = hamiltonian_h(), casimir_c(), build_L()
    states = [traj.state(i) for i in range(len(traj))]
    h_mats = [evaluate(h, s) for s in states]
    c_mats = [evaluate(c, s) for s in states]
    report = DriftReport(times=traj.times)

    for k in range(1, k_max + 1):
        values = np.array([np.trace(np.linalg.matrix_power(m, k)) for m in h_mats])
        report.series[f"tr_h^{k}"] = np.array(
            [_relative(abs(x - values[0]), abs(values[0])) for x in values]
        )

    eig0 = np.linalg.eigvals(h_mats[0])
    report.series["h_spectrum"] = np.array(
        [_relative(spectrum_distance(np.linalg.eigvals(m), eig0), np.max(np.abs(eig0))) for m in h_mats]
    )

    c0 = c_mats[0]
    report.series["casimir"] = np.array(
        [_relative(np.linalg.norm(m - c0), np.linalg.norm(c0)) for m in c_mats]
    )

    for spectral in lambda_samples:
        spectra = [np.linalg.eigvals(evaluate_lax(big_l, s, spectral)) for s in states]
        scale = np.max(np.abs(spectra[0]))
        report.series[f"L_spectrum@{spectral:g}"] = np.array(
            [_relative(spectrum_distance(s, spectra[0]), scale) for s in spectra]
        )
    LOG.debug("Conservation drift maxima: %s", report.max_drift)
    return report


def backlund_transform(rep: NumericRep) -> NumericRep:
    """``U -> U V U^-1``, ``V -> U^-1 + V^-1 U^-1``.

    Raises:
        SingularRepresentationError: the transformed V is numerically singular.
    """
    u_inv, v_inv = rep.inverses()
    new_v = u_inv + v_inv @ u_inv
    _solve_inverse(new_v, "transformed V")
    return NumericRep(rep.u @ rep.v @ u_inv, new_v)


@dataclass
class BacklundReport:
    """Deviation between transformed and independently integrated trajectories."""

    times: np.ndarray
    deviation: np.ndarray

    @property
    def max_deviation(self) -> float:
        """Largest relative deviation along the trajectory."""
        return float(np.max(self.deviation))


def backlund_check(
    rep0: NumericRep,
    t_final: float,
    dt: float,
    *,
    blow_up_norm: float = 1e8,
) -> BacklundReport:
    """Integrate ``rep0`` and its transform; compare the transform of the first with the second."""
    moved = integrate(rep0, t_final, dt, blow_up_norm=blow_up_norm)
    transformed = integrate(backlund_transform(rep0), t_final, dt, blow_up_norm=blow_up_norm)
    deviation = []
    for i in range(len(moved)):
        expected = backlund_transform(moved.state(i))
        actual = transformed.state(i)
        scale = max(np.linalg.norm(expected.u), np.linalg.norm(expected.v))
        delta = max(np.linalg.norm(expected.u - actual.u), np.linalg.norm(expected.v - actual.v))
        deviation.append(_relative(delta, scale))
    return BacklundReport(times=moved.times, deviation=np.array(deviation))


def convergence_order(rep0: NumericRep, t_final: float = 0.5, dt: float = 0.01) -> float:
    """Observed order from final states at steps dt, dt/2 and dt/4."""
    finals = []
    for step in (dt, dt / 2, dt / 4):
        traj = integrate(rep0, t_final, step)
        finals.append(np.concatenate([traj.u[-1].ravel(), traj.v[-1].ravel()]))
    coarse = np.linalg.norm(finals[0] - finals[1])
    fine = np.linalg.norm(finals[1] - finals[2])
    if fine == 0.0:
        return float("inf")
    order = float(np.log2(coarse / fine))
    LOG.debug("Convergence order estimate %.3f (differences %.3g, %.3g)", order, coarse, fine)
    return order
