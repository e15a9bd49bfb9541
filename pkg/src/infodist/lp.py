"""Deterministic linear programming with primal and dual extraction.

Thin adapter over scipy's HiGHS backend.  The contract the rest of the
package relies on:

- ``solve`` is deterministic for identical input (HiGHS, single thread),
- optimal solutions carry row duals oriented so that ``dual[i]`` is the
  derivative of the *reported* objective with respect to ``rhs[i]``,
- primal feasibility residual <= 1e-8, duality gap <= 1e-8 * (1 + |obj|),
  else ``NumericalFailure`` so the caller can retry with a perturbation.

For a minimization problem the Lagrange multiplier of a ``<=`` row is
``-dual[i] >= 0``; witness-game extraction consumes these directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .config import LP_TOL
from .errors import NumericalFailure, ShapeMismatch

LEQ = "<="
EQ = "=="
GEQ = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# HiGHS reports duals at slightly looser precision than primals on degenerate
# problems; the dual gate is therefore one order looser than LP_TOL.
_DUAL_GATE = LP_TOL * 10


@dataclass(frozen=True)
class LpProblem:
    """min/max c.x subject to triplet-sparse rows with mixed senses.

    ``(row_idx, col_idx, coefficients)`` hold the constraint matrix in
    triplet form; ``senses[i]`` in {"<=", "==", ">="}; ``bounds`` per
    variable, None meaning infinite.
    """

    objective: np.ndarray
    row_idx: np.ndarray
    col_idx: np.ndarray
    coefficients: np.ndarray
    senses: tuple[str, ...]
    rhs: np.ndarray
    bounds: tuple[tuple[float | None, float | None], ...]
    maximize: bool = False

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float)
        vals = np.asarray(self.coefficients, dtype=float)
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(rhs)) and np.all(np.isfinite(vals))):
            raise ShapeMismatch("LP coefficients must be finite")
        if len(self.senses) != rhs.size:
            raise ShapeMismatch("senses and rhs lengths differ")
        if any(s not in (LEQ, EQ, GEQ) for s in self.senses):
            raise ShapeMismatch("row sense must be <=, == or >=")
        if len(self.bounds) != c.size:
            raise ShapeMismatch("bounds and objective lengths differ")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "coefficients", vals)
        object.__setattr__(self, "row_idx", np.asarray(self.row_idx, dtype=int))
        object.__setattr__(self, "col_idx", np.asarray(self.col_idx, dtype=int))

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.rhs.size

    def matrix(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.coefficients, (self.row_idx, self.col_idx)),
            shape=(self.n_rows, self.n_vars),
        )


@dataclass(frozen=True)
class LpSolution:
    status: str
    primal: np.ndarray = field(default_factory=lambda: np.zeros(0))
    dual: np.ndarray = field(default_factory=lambda: np.zeros(0))
    objective: float = float("nan")


class LpBuilder:
    """Incremental triplet assembly for LpProblem.

    Variables default to bounds (0, inf); adjust ``bounds`` entries for free
    variables before ``build``.
    """

    def __init__(self, n_vars: int, maximize: bool = False):
        self.n_vars = n_vars
        self.maximize = maximize
        self.objective = np.zeros(n_vars)
        self._rows: list[np.ndarray] = []
        self._cols: list[np.ndarray] = []
        self._vals: list[np.ndarray] = []
        self._senses: list[str] = []
        self._rhs: list[float] = []
        self.bounds: list[tuple[float | None, float | None]] = [(0.0, None)] * n_vars

    def add_row(self, cols, vals, sense: str, rhs: float) -> int:
        row = len(self._rhs)
        cols = np.atleast_1d(np.asarray(cols, dtype=int))
        vals = np.atleast_1d(np.asarray(vals, dtype=float))
        self._rows.append(np.full(cols.size, row))
        self._cols.append(cols)
        self._vals.append(vals)
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        return row

    def build(self) -> LpProblem:
        return LpProblem(
            objective=self.objective,
            row_idx=np.concatenate(self._rows) if self._rows else np.zeros(0, dtype=int),
            col_idx=np.concatenate(self._cols) if self._cols else np.zeros(0, dtype=int),
            coefficients=np.concatenate(self._vals) if self._vals else np.zeros(0),
            senses=tuple(self._senses),
            rhs=np.asarray(self._rhs, dtype=float),
            bounds=tuple(self.bounds),
            maximize=self.maximize,
        )


def _residuals(problem: LpProblem, x: np.ndarray, duals_min: np.ndarray) -> tuple[float, float, float]:
    """(primal, dual-sign, relative-gap) residuals, minimization orientation."""
    a = problem.matrix()
    ax = a @ x
    primal = 0.0
    for sense, lhs, rhs in zip(problem.senses, ax, problem.rhs):
        if sense == LEQ:
            primal = max(primal, lhs - rhs)
        elif sense == GEQ:
            primal = max(primal, rhs - lhs)
        else:
            primal = max(primal, abs(lhs - rhs))
    lower = np.array([-np.inf if lo is None else lo for lo, _ in problem.bounds])
    upper = np.array([np.inf if hi is None else hi for _, hi in problem.bounds])
    if x.size:
        primal = max(primal, float(np.max(lower - x)), float(np.max(x - upper)))

    c_min = -problem.objective if problem.maximize else problem.objective
    lam = -duals_min  # legal: >= 0 on <= rows, <= 0 on >= rows
    dual_sign = 0.0
    for sense, l in zip(problem.senses, lam):
        if sense == LEQ and l < 0:
            dual_sign = max(dual_sign, -l)
        elif sense == GEQ and l > 0:
            dual_sign = max(dual_sign, l)
    reduced = c_min + a.T @ lam
    finite_lo = np.isfinite(lower)
    finite_up = np.isfinite(upper)
    rho_lo = np.where(finite_lo, np.maximum(reduced, 0.0), 0.0)
    rho_up = np.where(finite_up, np.maximum(-reduced, 0.0), 0.0)
    # Stationarity violations that bound multipliers cannot absorb.
    leftover = reduced - rho_lo + rho_up
    dual_sign = max(dual_sign, float(np.abs(leftover).max(initial=0.0)))

    dual_obj = -(problem.rhs @ lam)
    dual_obj += float(np.sum(np.where(finite_lo, lower, 0.0) * rho_lo))
    dual_obj -= float(np.sum(np.where(finite_up, upper, 0.0) * rho_up))
    primal_obj = float(c_min @ x)
    gap = abs(primal_obj - dual_obj) / (1.0 + abs(primal_obj))
    return primal, dual_sign, gap


def solve(problem: LpProblem) -> LpSolution:
    """Solve with HiGHS; returns status, primal, row duals, objective."""
    senses = np.asarray(problem.senses)
    a = problem.matrix().tocsr()
    leq_mask = senses == LEQ
    geq_mask = senses == GEQ
    ub_rows = np.flatnonzero(leq_mask | geq_mask)
    eq_rows = np.flatnonzero(senses == EQ)
    sign = np.where(geq_mask[ub_rows], -1.0, 1.0)

    a_ub = sp.diags(sign) @ a[ub_rows] if ub_rows.size else None
    b_ub = sign * problem.rhs[ub_rows] if ub_rows.size else None
    a_eq = a[eq_rows] if eq_rows.size else None
    b_eq = problem.rhs[eq_rows] if eq_rows.size else None

    c = -problem.objective if problem.maximize else problem.objective
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=list(problem.bounds),
        method="highs",
    )
    if res.status == 2:
        return LpSolution(status=INFEASIBLE)
    if res.status == 3:
        return LpSolution(status=UNBOUNDED)
    if res.status != 0:
        raise NumericalFailure(f"HiGHS failed: {res.message}")

    duals_min = np.zeros(problem.n_rows)
    if ub_rows.size:
        duals_min[ub_rows] = sign * res.ineqlin.marginals
    if eq_rows.size:
        duals_min[eq_rows] = res.eqlin.marginals

    primal_res, dual_res, gap = _residuals(problem, res.x, duals_min)
    if primal_res > LP_TOL or dual_res > _DUAL_GATE or gap > LP_TOL:
        raise NumericalFailure(
            f"residuals beyond gates: primal={primal_res:g} dual={dual_res:g} gap={gap:g}"
        )

    objective = float(problem.objective @ res.x)
    duals = -duals_min if problem.maximize else duals_min
    return LpSolution(status=OPTIMAL, primal=res.x, dual=duals, objective=objective)


def complementary_slackness(problem: LpProblem, solution: LpSolution) -> float:
    """max over inequality rows of |dual_i * slack_i|."""
    slack = problem.rhs - problem.matrix() @ solution.primal
    worst = 0.0
    for sense, s, y in zip(problem.senses, slack, solution.dual):
        if sense != EQ:
            worst = max(worst, abs(s * y))
    return worst


def solve_matrix_game(matrix: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Value and optimal mixed strategies of a zero-sum matrix game.

    ``matrix[i, j]`` is the payoff to the row maximizer.  Returns
    ``(value, row_strategy, col_strategy)``; the column strategy comes from
    the duals of the value constraints, which sum to 1 by stationarity in v.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or min(a.shape) < 1:
        raise ShapeMismatch(f"matrix game needs a 2-D payoff array, got {a.shape}")
    m, n = a.shape
    # Variables (v, x_1..x_m); max v s.t. v <= x.A[:, j] for all j, sum x = 1.
    builder = LpBuilder(1 + m, maximize=True)
    builder.objective[0] = 1.0
    builder.bounds[0] = (None, None)
    for j in range(n):
        builder.add_row(
            np.concatenate(([0], 1 + np.arange(m))),
            np.concatenate(([1.0], -a[:, j])),
            LEQ,
            0.0,
        )
    builder.add_row(1 + np.arange(m), np.ones(m), EQ, 1.0)
    sol = solve(builder.build())
    if sol.status != OPTIMAL:
        raise NumericalFailure(f"matrix game LP ended with status {sol.status}")
    x = np.clip(sol.primal[1:], 0.0, None)
    x /= x.sum()
    y = np.clip(sol.dual[:n], 0.0, None)
    total = y.sum()
    y = np.full(n, 1.0 / n) if total <= 0 else y / total
    return sol.objective, x, y
