"""Dense two-phase primal simplex for equality-form LPs, plus a brute-force oracle.

Problems have the form ``min/max c.x  s.t.  A x = b, x >= 0``.  The solver
uses a full tableau with Bland's rule, which is slow in general but safe on
the heavily degenerate counterfactual polytopes this package builds.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, NumericalError, ShapeError, SolverStallError

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
ZERO_TOL = 1e-11
ORACLE_MAX_VARS = 24
ORACLE_MAX_ROWS = 12


class Sense(str, enum.Enum):
    MIN = "MIN"
    MAX = "MAX"


class Status(str, enum.Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"


@dataclass
class LinearProgram:
    """``sense c.x  s.t.  eq_matrix x = eq_rhs, x >= 0``."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    sense: Sense = Sense.MIN
    row_labels: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        n = self.objective.size
        self.eq_matrix = np.asarray(self.eq_matrix, dtype=float).reshape(-1, n)
        self.eq_rhs = np.asarray(self.eq_rhs, dtype=float).reshape(-1)
        self.sense = Sense(self.sense)
        if self.eq_matrix.shape[0] != self.eq_rhs.size:
            raise ShapeError(
                f"{self.eq_matrix.shape[0]} constraint rows but {self.eq_rhs.size} right-hand sides"
            )
        for name in ("objective", "eq_matrix", "eq_rhs"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NumericalError(f"non-finite entries in {name}")

    @property
    def num_vars(self) -> int:
        return self.objective.size

    @property
    def num_rows(self) -> int:
        return self.eq_rhs.size

    def minimization_objective(self) -> np.ndarray:
        return self.objective if self.sense is Sense.MIN else -self.objective


@dataclass
class Solution:
    status: Status
    objective_value: float | None = None
    x: np.ndarray | None = None
    iterations: int = 0


def dump_tableau(tableau: np.ndarray, basis: list[int]) -> str:
    """Tab-separated text rendering; last row is the reduced-cost row."""
    lines = []
    for i, row in enumerate(tableau[:-1]):
        lines.append("\t".join([f"x{basis[i]}"] + [f"{v:.6g}" for v in row]))
    lines.append("\t".join(["z"] + [f"{v:.6g}" for v in tableau[-1]]))
    return "\n".join(lines)


class _Tableau:
    """Scratch tableau: rows ``[B^-1 A | B^-1 b]`` plus a reduced-cost row."""

    def __init__(self, body: np.ndarray, basis: list[int]):
        self.t = body
        self.basis = basis

    @property
    def m(self) -> int:
        return self.t.shape[0] - 1

    def set_costs(self, costs: np.ndarray) -> None:
        row = np.zeros(self.t.shape[1])
        row[: costs.size] = costs
        # price out the basic columns
        for i, j in enumerate(self.basis):
            if row[j] != 0.0:
                row -= row[j] * self.t[i]
        self.t[-1] = row

    def pivot(self, r: int, j: int) -> None:
        t = self.t
        t[r] /= t[r, j]
        factors = t[:, j].copy()
        factors[r] = 0.0
        t -= factors[:, None] * t[r]
        t[np.abs(t) <= ZERO_TOL] = 0.0
        t[:, j] = 0.0
        t[r, j] = 1.0
        self.basis[r] = j

    def entering(self, allowed: int, tol: float, bland: bool) -> int | None:
        """Lowest-index improving column (Bland) or most negative reduced cost,
        ties to the lowest index (Dantzig)."""
        costs = self.t[-1, :allowed]
        if bland:
            neg = np.flatnonzero(costs < -tol)
            return int(neg[0]) if neg.size else None
        j = int(np.argmin(costs))
        return j if costs[j] < -tol else None

    def leaving(self, j: int) -> int | None:
        """Minimum-ratio row; ties broken by lowest basic variable index."""
        col, rhs = self.t[:-1, j], self.t[:-1, -1]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return None
        ratios = rhs[rows] / col[rows]
        tied = rows[ratios <= ratios.min() + ZERO_TOL]
        return int(min(tied, key=lambda i: self.basis[i]))

    def run(self, allowed: int, tol: float, cap: int, phase: str, bland: bool = True) -> tuple[bool, int]:
        """Pivot to optimality; returns ``(bounded, pivots)``.

        With ``bland=False`` the Dantzig rule is used until a run of
        ``allowed`` consecutive degenerate pivots, after which Bland's rule
        takes over so the phase cannot cycle.
        """
        stalled = 0
        for it in range(cap + 1):
            j = self.entering(allowed, tol, bland or stalled >= allowed)
            if j is None:
                return True, it
            if it == cap:
                break
            r = self.leaving(j)
            if r is None:
                return False, it
            stalled = stalled + 1 if self.t[r, -1] <= ZERO_TOL else 0
            self.pivot(r, j)
            if not np.isfinite(self.t).all():
                raise NumericalError(f"{phase}: NaN encountered during pivot")
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("%s pivot %d: x%d enters, row %d\n%s", phase, it + 1, j, r,
                             dump_tableau(self.t, self.basis))
        raise SolverStallError(f"{phase}: iteration cap of {cap} pivots exceeded")


def solve(lp: LinearProgram, tol: float = 1e-9) -> Solution:
    """Two-phase primal simplex.

    Phase 1 minimises the sum of one artificial variable per row (rows with
    negative right-hand side are negated first).  A phase-1 optimum above
    ``tol`` means the program is infeasible.  Artificials left basic at zero
    are pivoted out where possible; rows where no pivot exists are
    linearly dependent and are dropped.  Phase 2 then optimises the real
    objective, with maximisation handled as minimisation of ``-c``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = lp.eq_matrix.copy(), lp.eq_rhs.copy()
    m, n = a.shape
    cap = 10 * (m + n)
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0

    body = np.zeros((m + 1, n + m + 1))
    body[:m, :n] = a
    body[:m, n : n + m] = np.eye(m)
    body[:m, -1] = b
    tab = _Tableau(body, list(range(n, n + m)))

    # phase 1
    tab.set_costs(np.concatenate([np.zeros(n), np.ones(m)]))
    _, it1 = tab.run(n + m, tol, cap, "phase 1", bland=False)
    infeasibility = -tab.t[-1, -1]
    if infeasibility > tol:
        return Solution(Status.INFEASIBLE, iterations=it1)

    keep = []
    for i in range(m):
        if tab.basis[i] < n:
            keep.append(i)
            continue
        row = tab.t[i, :n]
        candidates = np.nonzero(np.abs(row) > PIVOT_TOL)[0]
        if candidates.size:
            tab.pivot(i, int(candidates[0]))
            keep.append(i)
        else:
            logger.debug("dropping redundant row %d", i)
    body2 = np.vstack([tab.t[keep][:, list(range(n)) + [-1]], np.zeros(n + 1)])
    tab = _Tableau(body2, [tab.basis[i] for i in keep])

    # phase 2
    c = lp.minimization_objective()
    tab.set_costs(c)
    bounded, it2 = tab.run(n, tol, cap, "phase 2")
    if not bounded:
        return Solution(Status.UNBOUNDED, iterations=it1 + it2)

    x = np.zeros(n)
    for i, j in enumerate(tab.basis):
        x[j] = tab.t[i, -1]
    return Solution(Status.OPTIMAL, float(lp.objective @ x), x, it1 + it2)


def _row_reduce(a: np.ndarray, b: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray, bool]:
    """Gaussian elimination with partial pivoting to a full-row-rank system.

    Returns ``(a', b', consistent)`` where ``a'`` has independent rows and the
    same solution set as ``a x = b`` when ``consistent``.
    """
    aug = np.hstack([a, b[:, None]]).astype(float)
    m, n = a.shape
    r = 0
    for j in range(n):
        if r == m:
            break
        p = r + int(np.argmax(np.abs(aug[r:, j])))
        if abs(aug[p, j]) <= tol:
            continue
        aug[[r, p]] = aug[[p, r]]
        aug[r] /= aug[r, j]
        for i in range(m):
            if i != r:
                aug[i] -= aug[i, j] * aug[r]
        r += 1
    consistent = bool(np.all(np.abs(aug[r:, -1]) <= tol * max(1.0, np.abs(b).max(initial=0.0))))
    return aug[:r, :n], aug[:r, -1], consistent


def _solve_square(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray | None:
    """Gaussian elimination with partial pivoting; ``None`` when singular."""
    k = a.shape[0]
    rhs = b if b.ndim == 2 else b.reshape(k, 1)
    aug = np.hstack([a, rhs]).astype(float)
    for j in range(k):
        p = j + int(np.argmax(np.abs(aug[j:, j])))
        if abs(aug[p, j]) <= tol:
            return None
        aug[[j, p]] = aug[[p, j]]
        for i in range(j + 1, k):
            aug[i] -= (aug[i, j] / aug[j, j]) * aug[j]
    out = np.zeros_like(aug[:, k:])
    for j in range(k - 1, -1, -1):
        out[j] = (aug[j, k:] - aug[j, j + 1 : k] @ out[j + 1 :]) / aug[j, j]
    return out


def enumerate_vertices(lp: LinearProgram, tol: float = 1e-9) -> Solution:
    """Exhaustive basic-solution enumeration, as an independent check on ``solve``.

    Every basis of the (row-reduced) constraint matrix is solved directly.
    Feasible basic solutions are vertices; basic directions that are
    nonnegative and improve the objective are extreme rays and certify
    unboundedness.
    """
    if lp.num_vars > ORACLE_MAX_VARS or lp.num_rows > ORACLE_MAX_ROWS:
        raise CapacityError(
            f"vertex enumeration limited to n <= {ORACLE_MAX_VARS}, m <= {ORACLE_MAX_ROWS};"
            f" got n={lp.num_vars}, m={lp.num_rows}"
        )
    n = lp.num_vars
    c = lp.minimization_objective()
    a, b, consistent = _row_reduce(lp.eq_matrix, lp.eq_rhs, 1e-10)
    if not consistent:
        return Solution(Status.INFEASIBLE)
    k = a.shape[0]

    best_x, best_val, tried = None, np.inf, 0
    has_ray = False
    for cols in itertools.combinations(range(n), k):
        tried += 1
        cols = list(cols)
        sol = _solve_square(a[:, cols], b, 1e-10)
        if sol is None:
            continue
        xb = sol[:, 0]
        if np.any(xb < -tol):
            continue
        x = np.zeros(n)
        x[cols] = xb
        val = c @ x
        if val < best_val:
            best_val, best_x = val, x
    for cols in itertools.combinations(range(n), k) if best_x is not None else ():
        cols = list(cols)
        rest = [j for j in range(n) if j not in cols]
        sol = _solve_square(a[:, cols], a[:, rest], 1e-10)
        if sol is None:
            continue
        # extreme rays of {A d = 0, d >= 0} are basic directions
        for idx, j in enumerate(rest):
            d_b = -sol[:, idx]
            if np.all(d_b >= -tol) and c[j] + c[cols] @ d_b < -tol:
                has_ray = True
                break
        if has_ray:
            break
    if best_x is None:
        return Solution(Status.INFEASIBLE, iterations=tried)
    if has_ray:
        return Solution(Status.UNBOUNDED, iterations=tried)
    return Solution(Status.OPTIMAL, float(lp.objective @ best_x), best_x, tried)
