"""ACE bounds from a linear program over joint counterfactual probabilities.

Decision variables are the 64 conditional probabilities
``q(x, y00, y01, y10, y11 | z)`` where ``y_xz`` is the value of the
potential outcome ``Y(x, z)``.  Column ``x*32 + y00*16 + y01*8 + y10*4 +
y11*2 + z`` holds ``q(x, y00, y01, y10, y11 | z)``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from .errors import SolverError, ValidationError
from .quantum import ObservedDistribution
from .simplex import LinearProgram, Sense, Solution, Status, solve

NUM_VARS = 64
WITNESS_TOL = 1e-8


class AssumptionSet(str, enum.Enum):
    JE_ONLY = "JE_ONLY"
    JE_STRATIFIED_ER = "JE_STRATIFIED_ER"
    JE_INDIVIDUAL_ER = "JE_INDIVIDUAL_ER"


SHORT_NAMES = {
    "je": AssumptionSet.JE_ONLY,
    "strat": AssumptionSet.JE_STRATIFIED_ER,
    "indiv": AssumptionSet.JE_INDIVIDUAL_ER,
}


class CounterfactualIndex(NamedTuple):
    x: int
    y00: int
    y01: int
    y10: int
    y11: int
    z: int

    def outcome(self, x: int, z: int) -> int:
        """Value of the potential outcome ``Y(x, z)`` in this cell."""
        return (self.y00, self.y01, self.y10, self.y11)[2 * x + z]


def encode_index(idx: CounterfactualIndex) -> int:
    for name, v in zip(idx._fields, idx):
        if v not in (0, 1):
            raise ValueError(f"{name}={v!r} is not a bit")
    x, y00, y01, y10, y11, z = idx
    return x * 32 + y00 * 16 + y01 * 8 + y10 * 4 + y11 * 2 + z


def decode_index(c: int) -> CounterfactualIndex:
    if not 0 <= c < NUM_VARS:
        raise IndexError(f"column {c} outside 0..{NUM_VARS - 1}")
    return CounterfactualIndex(*((c >> s) & 1 for s in (5, 4, 3, 2, 1, 0)))


ALL_CELLS = [decode_index(c) for c in range(NUM_VARS)]
Y_PATTERNS = list(itertools.product((0, 1), repeat=4))


def ace_objective() -> np.ndarray:
    """``P(Y(1,0)=1 | Z=0) - P(Y(0,0)=1 | Z=0)`` as a coefficient vector."""
    c = np.zeros(NUM_VARS)
    for col, cell in enumerate(ALL_CELLS):
        if cell.z == 0:
            c[col] = cell.y10 - cell.y00
    return c


def observation_rows(obs: ObservedDistribution | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Consistency rows ``P(X=x, Y(x,z)=y | z) = p(x, y | z)``.

    Order: ``(z=0, x=0)``, ``(z=0, x=1)``, ``(z=1, x=0)``, ``(z=1, x=1)``,
    each for ``y = 0, 1``.  The right-hand side is zero when ``obs`` is None.
    """
    p = obs.normalized() if obs is not None else np.zeros((2, 2, 2))
    rows, rhs = [], []
    for z, x, y in itertools.product((0, 1), repeat=3):
        r = np.zeros(NUM_VARS)
        for col, cell in enumerate(ALL_CELLS):
            if cell.x == x and cell.z == z and cell.outcome(x, z) == y:
                r[col] = 1.0
        rows.append(r)
        rhs.append(p[z, x, y])
    return np.array(rows), np.array(rhs)


def build_lp(obs: ObservedDistribution, assumptions: AssumptionSet | str, sense: Sense | str = Sense.MIN) -> LinearProgram:
    """Assemble the bounding program for one assumption set.

    Row families, in order: joint exogeneity (16), stratified exclusion
    restriction (8, omitted for ``JE_ONLY``), normalization (2),
    observations (8), and for ``JE_INDIVIDUAL_ER`` one zero-forcing row per
    column with ``y00 != y01`` or ``y10 != y11`` (48).
    """
    if not isinstance(obs, ObservedDistribution):
        raise ValidationError(f"expected ObservedDistribution, got {type(obs).__name__}")
    assumptions = AssumptionSet(assumptions)
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    labels: list[str] = []

    def add(row: np.ndarray, value: float, label: str) -> None:
        rows.append(row)
        rhs.append(value)
        labels.append(label)

    # joint exogeneity: P(Y-vector | Z=0) = P(Y-vector | Z=1)
    for ys in Y_PATTERNS:
        r = np.zeros(NUM_VARS)
        for x in (0, 1):
            r[encode_index(CounterfactualIndex(x, *ys, 0))] += 1.0
            r[encode_index(CounterfactualIndex(x, *ys, 1))] -= 1.0
        add(r, 0.0, "je[{}{}{}{}]".format(*ys))

    if assumptions is not AssumptionSet.JE_ONLY:
        for x, z in itertools.product((0, 1), repeat=2):
            r0, r1 = np.zeros(NUM_VARS), np.zeros(NUM_VARS)
            for col, cell in enumerate(ALL_CELLS):
                if cell.x != x or cell.z != z:
                    continue
                r0[col] = (cell.y00 == 0) - (cell.y01 == 0)
                r1[col] = (cell.y10 == 1) - (cell.y11 == 1)
            add(r0, 0.0, f"ser[Y(0,.)=0,x={x},z={z}]")
            add(r1, 0.0, f"ser[Y(1,.)=1,x={x},z={z}]")

    for z in (0, 1):
        add(np.array([1.0 if cell.z == z else 0.0 for cell in ALL_CELLS]), 1.0, f"norm[z={z}]")

    obs_rows, obs_rhs = observation_rows(obs)
    for (z, x, y), r, v in zip(itertools.product((0, 1), repeat=3), obs_rows, obs_rhs):
        add(r, float(v), f"obs[x={x},y={y}|z={z}]")

    if assumptions is AssumptionSet.JE_INDIVIDUAL_ER:
        for col, cell in enumerate(ALL_CELLS):
            if cell.y00 != cell.y01 or cell.y10 != cell.y11:
                r = np.zeros(NUM_VARS)
                r[col] = 1.0
                add(r, 0.0, f"ier[{col}]")

    return LinearProgram(ace_objective(), np.array(rows), np.array(rhs), Sense(sense), labels)


@dataclass
class BoundsResult:
    assumptions: AssumptionSet
    lower: float | None
    upper: float | None
    lower_status: Status
    upper_status: Status
    rows: int
    lower_witness: np.ndarray | None = None
    upper_witness: np.ndarray | None = None

    @property
    def optimal(self) -> bool:
        return self.lower_status is Status.OPTIMAL and self.upper_status is Status.OPTIMAL

    def contains(self, value: float, slack: float = 1e-9) -> bool:
        return self.optimal and self.lower - slack <= value <= self.upper + slack

    def to_json(self) -> dict[str, Any]:
        def wit(w: np.ndarray | None) -> list[float] | None:
            return None if w is None else [float(v) for v in w]

        return {
            "assumptions": self.assumptions.value,
            "lower": self.lower,
            "upper": self.upper,
            "lowerStatus": self.lower_status.value,
            "upperStatus": self.upper_status.value,
            "rows": self.rows,
            "witnessLower": wit(self.lower_witness),
            "witnessUpper": wit(self.upper_witness),
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "BoundsResult":
        def wit(w: list[float] | None) -> np.ndarray | None:
            return None if w is None else np.asarray(w, dtype=float)

        try:
            return cls(
                assumptions=AssumptionSet(doc["assumptions"]),
                lower=None if doc["lower"] is None else float(doc["lower"]),
                upper=None if doc["upper"] is None else float(doc["upper"]),
                lower_status=Status(doc["lowerStatus"]),
                upper_status=Status(doc["upperStatus"]),
                rows=int(doc["rows"]),
                lower_witness=wit(doc.get("witnessLower")),
                upper_witness=wit(doc.get("witnessUpper")),
            )
        except ValidationError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed bounds document: {exc!r}") from exc


def _checked(sol: Solution, lp: LinearProgram) -> Solution:
    if sol.status is Status.UNBOUNDED:
        raise SolverError(f"{lp.sense.value} program reported UNBOUNDED; the feasible set is bounded")
    if sol.status is Status.OPTIMAL:
        resid = float(np.max(np.abs(lp.eq_matrix @ sol.x - lp.eq_rhs), initial=0.0))
        if resid > WITNESS_TOL or sol.x.min() < -1e-9:
            raise SolverError(f"witness violates constraints (residual {resid:.3e}, min {sol.x.min():.3e})")
    return sol


def ace_bounds(obs: ObservedDistribution, assumptions: AssumptionSet | str) -> BoundsResult:
    """Sharpest ACE interval compatible with ``obs`` under ``assumptions``."""
    assumptions = AssumptionSet(assumptions)
    lo_lp = build_lp(obs, assumptions, Sense.MIN)
    hi_lp = build_lp(obs, assumptions, Sense.MAX)
    lo = _checked(solve(lo_lp), lo_lp)
    hi = _checked(solve(hi_lp), hi_lp)
    return BoundsResult(
        assumptions=assumptions,
        lower=lo.objective_value,
        upper=hi.objective_value,
        lower_status=lo.status,
        upper_status=hi.status,
        rows=lo_lp.num_rows,
        lower_witness=lo.x,
        upper_witness=hi.x,
    )
