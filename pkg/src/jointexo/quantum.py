"""Quantum instrumental network Z -> X -> Y with an entangled common source.

Node X measures its half of the shared state with a POVM selected by ``z``;
node Y measures the other half with a POVM selected by ``x`` only.  Outcome
statistics follow the Born rule
``P(x, y | z) = tr[(M[z][x] (x) N[x][y]) rho]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import linalg
from .errors import NumericalError, ValidationError

TOL = 1e-10
NORM_TOL = 1e-9
NEG_TOL = 1e-12
IMAG_TOL = 1e-10


@dataclass
class DensityOperator:
    mat: np.ndarray

    def __post_init__(self) -> None:
        self.mat = linalg.as_matrix(self.mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass
class Povm:
    """Measurement with one effect per outcome, ``effects[k]`` for outcome ``k``."""

    effects: list[np.ndarray]

    def __post_init__(self) -> None:
        self.effects = [linalg.as_matrix(e) for e in self.effects]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.effects[k]

    def __len__(self) -> int:
        return len(self.effects)


@dataclass
class QuantumInstrumentalScenario:
    """State plus measurements.

    ``measurements_a[z][x]`` is the effect of X-outcome ``x`` under setting
    ``z``; ``measurements_b[x][y]`` the effect of Y-outcome ``y`` under
    setting ``x``.
    """

    rho: DensityOperator
    measurements_a: list[Povm]
    measurements_b: list[Povm]
    dim_a: int = 2
    dim_b: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.rho, DensityOperator):
            self.rho = DensityOperator(self.rho)
        self.measurements_a = [p if isinstance(p, Povm) else Povm(list(p)) for p in self.measurements_a]
        self.measurements_b = [p if isinstance(p, Povm) else Povm(list(p)) for p in self.measurements_b]

    def effect_a(self, z: int, x: int) -> np.ndarray:
        return self.measurements_a[z][x]

    def effect_b(self, x: int, y: int) -> np.ndarray:
        return self.measurements_b[x][y]

    def to_json(self) -> dict[str, Any]:
        return {
            "dimA": self.dim_a,
            "dimB": self.dim_b,
            "rho": linalg.matrix_to_json(self.rho.mat),
            "measurementsA": [[linalg.matrix_to_json(e) for e in p.effects] for p in self.measurements_a],
            "measurementsB": [[linalg.matrix_to_json(e) for e in p.effects] for p in self.measurements_b],
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "QuantumInstrumentalScenario":
        try:
            return cls(
                rho=DensityOperator(linalg.matrix_from_json(doc["rho"])),
                measurements_a=[Povm([linalg.matrix_from_json(e) for e in p]) for p in doc["measurementsA"]],
                measurements_b=[Povm([linalg.matrix_from_json(e) for e in p]) for p in doc["measurementsB"]],
                dim_a=int(doc["dimA"]),
                dim_b=int(doc["dimB"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed scenario document: {exc!r}") from exc


@dataclass
class ObservedDistribution:
    """Table ``p[z, x, y] = P(X=x, Y=y | Z=z)``."""

    p: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=float)
        if p.shape != (2, 2, 2):
            raise ValidationError(f"distribution must have shape (2, 2, 2), got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValidationError("distribution has non-finite entries")
        if p.min() < -NEG_TOL:
            raise ValidationError(f"negative probability {p.min():.3e}")
        sums = p.sum(axis=(1, 2))
        dev = float(np.max(np.abs(sums - 1.0)))
        if dev > NORM_TOL:
            raise ValidationError(f"per-z sums {sums.tolist()} deviate from 1 by {dev:.3e}")
        self.p = np.clip(p, 0.0, None)

    def __call__(self, x: int, y: int, z: int) -> float:
        return float(self.p[z, x, y])

    def normalized(self) -> np.ndarray:
        """Entries renormalized to sum exactly to one per ``z`` arm."""
        return self.p / self.p.sum(axis=(1, 2), keepdims=True)

    def to_json(self) -> dict[str, Any]:
        return {"p": self.p.tolist()}

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "ObservedDistribution":
        try:
            return cls(np.asarray(doc["p"], dtype=float))
        except ValidationError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed distribution document: {exc!r}") from exc


@dataclass
class InterventionalDistribution:
    """``q[z', x', y] = Q_xz(X=x', Y=y | Z=z')`` for Y's settings reset to ``(x, z)``."""

    q: np.ndarray
    intervention_x: int
    intervention_z: int


@dataclass
class Violation:
    obj: str
    check: str
    residual: float

    def __str__(self) -> str:
        return f"{self.obj}: {self.check} (residual {self.residual:.3e})"


@dataclass
class MarginalExogeneityReport:
    holds: bool
    max_deviation: float

    def to_json(self) -> dict[str, Any]:
        return {"holds": self.holds, "maxDeviation": self.max_deviation}


def _check_effect(name: str, e: np.ndarray, dim: int, out: list[Violation]) -> None:
    if e.shape != (dim, dim):
        out.append(Violation(name, f"shape {e.shape} != ({dim}, {dim})", float("nan")))
        return
    herm = linalg.hermiticity_residual(e)
    if herm > TOL:
        out.append(Violation(name, "hermiticity", herm))
        return
    lam = linalg.min_eigenvalue(e)
    if lam < -TOL:
        out.append(Violation(name, "positive semidefinite", -lam))


def _check_povm(name: str, povm: Povm, dim: int, out: list[Violation]) -> None:
    if len(povm) != 2:
        out.append(Violation(name, f"expected 2 outcomes, got {len(povm)}", float("nan")))
        return
    before = len(out)
    for k, e in enumerate(povm.effects):
        _check_effect(f"{name}[{k}]", e, dim, out)
    if any(v.check.startswith("shape") for v in out[before:]):
        return
    resid = linalg.max_abs_diff(sum(povm.effects), np.eye(dim))
    if resid > TOL:
        out.append(Violation(name, "completeness", resid))


def validate_scenario(s: QuantumInstrumentalScenario) -> list[Violation]:
    """All invariant violations of ``s``; empty when the scenario is valid."""
    out: list[Violation] = []
    if s.dim_a < 1 or s.dim_b < 1:
        out.append(Violation("scenario", "dimensions must be positive", float("nan")))
        return out
    d = s.dim_a * s.dim_b
    rho = s.rho.mat
    if rho.shape != (d, d):
        out.append(Violation("rho", f"shape {rho.shape} != ({d}, {d})", float("nan")))
    else:
        herm = linalg.hermiticity_residual(rho)
        if herm > TOL:
            out.append(Violation("rho", "hermiticity", herm))
        else:
            lam = linalg.min_eigenvalue(rho)
            if lam < -TOL:
                out.append(Violation("rho", "positive semidefinite", -lam))
        tr_dev = abs(linalg.trace(rho) - 1.0)
        if tr_dev > TOL:
            out.append(Violation("rho", "unit trace", tr_dev))
    for label, povms, dim in (("measurementsA", s.measurements_a, s.dim_a),
                              ("measurementsB", s.measurements_b, s.dim_b)):
        if len(povms) != 2:
            out.append(Violation(label, f"expected 2 settings, got {len(povms)}", float("nan")))
            continue
        for k, povm in enumerate(povms):
            _check_povm(f"{label}[{k}]", povm, dim, out)
    return out


def require_valid(s: QuantumInstrumentalScenario) -> None:
    problems = validate_scenario(s)
    if problems:
        raise ValidationError("invalid scenario: " + "; ".join(map(str, problems)))


def _born(rho: np.ndarray, effect: np.ndarray) -> float:
    val = linalg.trace(effect @ rho)
    if abs(val.imag) > IMAG_TOL:
        raise NumericalError(f"Born trace has imaginary part {val.imag:.3e}")
    return val.real


def bell_preset() -> QuantumInstrumentalScenario:
    """Phi-minus state with Z/X measurements at X and rotated measurements at Y.

    Outcome 0 (1) is the +1 (-1) eigenspace of the observables
    ``A0 = sigma_Z``, ``A1 = sigma_X`` at node X and
    ``B0 = (sigma_Z + sigma_X)/sqrt2``, ``B1 = (sigma_Z - sigma_X)/sqrt2`` at node Y.
    """
    r2 = math.sqrt(2.0)
    phi = np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) / r2
    rho = np.outer(phi, phi.conj())
    m = [
        [np.array([[1, 0], [0, 0]]), np.array([[0, 0], [0, 1]])],
        [0.5 * np.array([[1, 1], [1, 1]]), 0.5 * np.array([[1, -1], [-1, 1]])],
    ]
    lo, hi = 1.0 / (4.0 - 2.0 * r2), 1.0 / (4.0 + 2.0 * r2)
    n = [
        [lo * np.array([[1, r2 - 1], [r2 - 1, 3 - 2 * r2]]),
         hi * np.array([[1, -r2 - 1], [-r2 - 1, 3 + 2 * r2]])],
        [lo * np.array([[1, 1 - r2], [1 - r2, 3 - 2 * r2]]),
         hi * np.array([[1, r2 + 1], [r2 + 1, 3 + 2 * r2]])],
    ]
    return QuantumInstrumentalScenario(
        rho=DensityOperator(rho),
        measurements_a=[Povm(row) for row in m],
        measurements_b=[Povm(row) for row in n],
    )


def born_distribution(s: QuantumInstrumentalScenario) -> ObservedDistribution:
    require_valid(s)
    p = np.empty((2, 2, 2))
    for z in range(2):
        for x in range(2):
            for y in range(2):
                p[z, x, y] = _born(s.rho.mat, linalg.kron(s.effect_a(z, x), s.effect_b(x, y)))
    return ObservedDistribution(p)


def interventional_distribution(s: QuantumInstrumentalScenario, x: int, z: int) -> InterventionalDistribution:
    """Statistics when Y's measurement setting is reset to ``(x, z)``.

    Y's POVM depends on the reset ``x`` alone, so the table does not vary
    with ``z``.
    """
    require_valid(s)
    if x not in (0, 1) or z not in (0, 1):
        raise ValidationError(f"intervention values must be bits, got x={x}, z={z}")
    q = np.empty((2, 2, 2))
    for zp in range(2):
        for xp in range(2):
            for y in range(2):
                q[zp, xp, y] = _born(s.rho.mat, linalg.kron(s.effect_a(zp, xp), s.effect_b(x, y)))
    return InterventionalDistribution(np.clip(q, 0.0, None), x, z)


def potential_outcome_marginal(s: QuantumInstrumentalScenario, x: int) -> tuple[float, float]:
    """``(P(Y(x, z) = 0), P(Y(x, z) = 1))`` from ``tr[(I (x) N[x][y]) rho]``."""
    require_valid(s)
    eye = np.eye(s.dim_a)
    p0, p1 = (max(_born(s.rho.mat, linalg.kron(eye, s.effect_b(x, y))), 0.0) for y in range(2))
    if abs(p0 + p1 - 1.0) > TOL:
        raise NumericalError(f"potential-outcome marginal sums to {p0 + p1!r}")
    return p0, p1


def true_ace(s: QuantumInstrumentalScenario) -> float:
    """``P(Y(1, 0) = 1) - P(Y(0, 0) = 1)``."""
    return potential_outcome_marginal(s, 1)[1] - potential_outcome_marginal(s, 0)[1]


def check_marginal_exogeneity(s: QuantumInstrumentalScenario, tol: float = TOL) -> MarginalExogeneityReport:
    """Compare ``Q_xz(Y = y | Z = 1)`` with ``Q_xz(Y = y | Z = 0)`` for every ``x, z, y``."""
    dev = 0.0
    for x in range(2):
        for z in range(2):
            y_given_z = interventional_distribution(s, x, z).q.sum(axis=1)
            dev = max(dev, float(np.max(np.abs(y_given_z[1] - y_given_z[0]))))
    return MarginalExogeneityReport(dev <= tol, dev)


# -- random generation ----------------------------------------------------


def _random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def _random_binary_povm(rng: np.random.Generator, dim: int) -> Povm:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    e0 = g @ g.conj().T
    e0 = 0.5 * (e0 + e0.conj().T)
    scale = linalg.eig_hermitian(e0)[-1] * (1.0 + rng.uniform())
    e0 /= scale
    return Povm([e0, np.eye(dim) - e0])


def random_scenario(seed: int, dim_a: int = 2, dim_b: int = 2) -> QuantumInstrumentalScenario:
    """Random valid scenario: Gaussian pure state and scaled random-PSD binary POVMs."""
    rng = np.random.default_rng(seed)
    return QuantumInstrumentalScenario(
        rho=DensityOperator(_random_pure_state(rng, dim_a * dim_b)),
        measurements_a=[_random_binary_povm(rng, dim_a) for _ in range(2)],
        measurements_b=[_random_binary_povm(rng, dim_b) for _ in range(2)],
        dim_a=dim_a,
        dim_b=dim_b,
    )


def with_rho(s: QuantumInstrumentalScenario, rho: Any) -> QuantumInstrumentalScenario:
    """Copy of ``s`` with the state replaced."""
    return QuantumInstrumentalScenario(DensityOperator(rho), s.measurements_a, s.measurements_b, s.dim_a, s.dim_b)
