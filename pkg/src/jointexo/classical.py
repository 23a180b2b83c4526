"""Classical response-function models of the instrumental network.

A hidden type ``(f, g)`` fixes ``X = f(Z)`` and ``Y = g(X)``.  Weights are
stored fType-major: index ``4 * f + g`` with

    f: 0 -> X=0, 1 -> X=1, 2 -> X=Z, 3 -> X=1-Z
    g: 0 -> Y=0, 1 -> Y=1, 2 -> Y=X, 3 -> Y=1-X

Because ``g`` ignores ``Z`` these models satisfy the individual exclusion
restriction by construction, so their true ACE must lie inside every LP
bound computed from their observed distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ValidationError
from .quantum import ObservedDistribution

F_NAMES = ("X=0", "X=1", "X=Z", "X=1-Z")
G_NAMES = ("Y=0", "Y=1", "Y=X", "Y=1-X")
WEIGHT_TOL = 1e-12


def f_response(f_type: int, z: int) -> int:
    return (0, 1, z, 1 - z)[f_type]


def g_response(g_type: int, x: int) -> int:
    return (0, 1, x, 1 - x)[g_type]


@dataclass
class ResponseFunctionModel:
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.size != 16:
            raise ValidationError(f"need 16 weights, got {w.size}")
        if not np.all(np.isfinite(w)) or w.min() < 0:
            raise ValidationError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"weights sum to {w.sum()!r}, not 1")
        self.weights = w

    @classmethod
    def point_mass(cls, f_type: int, g_type: int) -> "ResponseFunctionModel":
        w = np.zeros(16)
        w[4 * f_type + g_type] = 1.0
        return cls(w)

    def weight(self, f_type: int, g_type: int) -> float:
        return float(self.weights[4 * f_type + g_type])

    def to_json(self) -> dict[str, Any]:
        return {"weights": [float(v) for v in self.weights]}

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "ResponseFunctionModel":
        try:
            return cls(np.asarray(doc["weights"], dtype=float))
        except ValidationError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed model document: {exc!r}") from exc


def classical_observed(m: ResponseFunctionModel) -> ObservedDistribution:
    p = np.zeros((2, 2, 2))
    for z in (0, 1):
        for f in range(4):
            x = f_response(f, z)
            for g in range(4):
                p[z, x, g_response(g, x)] += m.weight(f, g)
    return ObservedDistribution(p)


def classical_true_ace(m: ResponseFunctionModel) -> float:
    """``P(g(1) = 1) - P(g(0) = 1)``, marginalised over the X-response."""
    g_marg = m.weights.reshape(4, 4).sum(axis=0)
    return float((g_marg[1] + g_marg[2]) - (g_marg[1] + g_marg[3]))


def random_model(seed: int) -> ResponseFunctionModel:
    """Uniform draw from the 15-simplex (normalized standard exponentials)."""
    rng = np.random.default_rng(seed)
    e = rng.standard_exponential(16)
    return ResponseFunctionModel(e / e.sum())


@dataclass
class SampledDataset:
    """Counts indexed ``counts[z, x, y]``."""

    counts: np.ndarray
    n: int
    seed: int

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64).reshape(2, 2, 2)
        if self.counts.min() < 0 or int(self.counts.sum()) != self.n:
            raise ValidationError("counts must be nonnegative and sum to n")

    def empirical(self) -> ObservedDistribution:
        per_z = self.counts.sum(axis=(1, 2))
        if np.any(per_z == 0):
            raise ValidationError("an instrument arm has no samples; empirical distribution undefined")
        return ObservedDistribution(self.counts / per_z[:, None, None])

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "seed": self.seed, "counts": self.counts.tolist()}

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "SampledDataset":
        try:
            return cls(np.asarray(doc["counts"]), int(doc["n"]), int(doc["seed"]))
        except ValidationError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed dataset document: {exc!r}") from exc


def sample_dataset(m: ResponseFunctionModel, n: int, seed: int) -> SampledDataset:
    """``n`` i.i.d. units: fair-coin ``z``, hidden type drawn from the weights."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    z = rng.integers(0, 2, size=n)
    types = rng.choice(16, size=n, p=m.weights)
    f, g = np.divmod(types, 4)
    x = np.choose(f, [np.zeros_like(z), np.ones_like(z), z, 1 - z])
    y = np.choose(g, [np.zeros_like(x), np.ones_like(x), x, 1 - x])
    counts = np.zeros((2, 2, 2), dtype=np.int64)
    np.add.at(counts, (z, x, y), 1)
    return SampledDataset(counts, n, seed)
