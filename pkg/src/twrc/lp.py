"""Dense linear programming: a deterministic two-phase simplex and mechanical duals.

Sized for the small programs (a few dozen variables) generated by the
rate-region computations.  Determinism, vertex (basic) solutions and explicit
dual multipliers matter more here than speed, so the solver is a plain
tableau simplex: Bland's lowest-index entering rule, a stability-biased
ratio test (largest pivot among minimal ratios, ties on the lowest basic
index), and a hard pivot budget against cycling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ValidationError

FEASIBILITY_TOL = 1e-9
PIVOT_TOL = 1e-12
_RATIO_ELIG_TOL = 1e-9  # pivots smaller than this amplify round-off too much
_COST_TOL = 1e-10
_MAX_PIVOTS = 20_000

_RELATIONS = ("<=", "=", ">=")
_INF = math.inf


class SolverError(RuntimeError):
    """The simplex could not make progress (numerical breakdown)."""


@dataclass(frozen=True)
class LinearProgram:
    """A dense LP: optimize ``objective @ x`` subject to ``matrix @ x (<=|=|>=) rhs``.

    Variables default to x >= 0; ``bounds`` entries may use -inf / +inf to
    declare free or sign-flipped variables and finite values for box bounds.
    ``sense`` is "max" (default) or "min".
    """

    objective: np.ndarray
    matrix: np.ndarray
    relations: tuple[str, ...]
    rhs: np.ndarray
    bounds: tuple[tuple[float, float], ...] = ()
    sense: str = "max"

    def __post_init__(self) -> None:
        obj = np.atleast_1d(np.asarray(self.objective, dtype=float))
        mat = np.asarray(self.matrix, dtype=float)
        if mat.size == 0:
            mat = np.zeros((len(tuple(self.relations)), obj.size))
        mat = np.atleast_2d(mat)
        rhs = np.atleast_1d(np.asarray(self.rhs, dtype=float))
        rel = tuple(self.relations)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "relations", rel)

        if self.sense not in ("max", "min"):
            raise ValidationError(f"sense must be 'max' or 'min', got {self.sense!r}")
        if mat.shape != (len(rel), obj.size):
            raise ValidationError(
                f"matrix shape {mat.shape} does not match "
                f"{len(rel)} relations x {obj.size} objective coefficients"
            )
        if rhs.size != len(rel):
            raise ValidationError(f"rhs length {rhs.size} != {len(rel)} relations")
        for r in rel:
            if r not in _RELATIONS:
                raise ValidationError(f"unknown relation {r!r}")
        if not (np.isfinite(obj).all() and np.isfinite(mat).all() and np.isfinite(rhs).all()):
            raise ValidationError("objective, matrix and rhs must be finite")

        bounds = tuple(self.bounds) or tuple((0.0, _INF) for _ in range(obj.size))
        if len(bounds) != obj.size:
            raise ValidationError(f"bounds length {len(bounds)} != {obj.size} variables")
        norm = []
        for j, (lo, hi) in enumerate(bounds):
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi) or lo == _INF or hi == -_INF or lo > hi:
                raise ValidationError(f"invalid bounds for variable {j}: ({lo}, {hi})")
            norm.append((lo, hi))
        object.__setattr__(self, "bounds", tuple(norm))

    @property
    def n_vars(self) -> int:
        return int(self.objective.size)

    @property
    def n_rows(self) -> int:
        return len(self.relations)


@dataclass(frozen=True)
class LpSolution:
    """Result of ``solve_lp``.

    ``x`` is the primal point in the original variables; ``basis`` lists the
    standardized-form columns that are basic at the returned vertex; ``duals``
    holds one multiplier per input row (value = objective @ x = duals @ rhs
    for programs with plain x >= 0 variables).
    """

    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float
    x: np.ndarray
    basis: tuple[int, ...]
    duals: np.ndarray

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve a dense LP with the deterministic two-phase primal simplex.

    Returns a vertex optimum with its basis and per-row dual multipliers.
    The pivot rule is fixed, so identical inputs give bit-identical output.
    """
    n_in = lp.n_vars
    m_in = lp.n_rows
    sense_sign = 1.0 if lp.sense == "max" else -1.0

    c, A, b, rel, recover = _to_nonneg_form(lp, sense_sign)
    m, n_struct = A.shape

    # Slack columns per row; flip rows to make the rhs non-negative first.
    row_sign = np.ones(m)
    rel = list(rel)
    for i in range(m):
        if b[i] < 0.0:
            A[i] *= -1.0
            b[i] = -b[i]
            row_sign[i] = -1.0
            if rel[i] != "=":
                rel[i] = "<=" if rel[i] == ">=" else ">="

    slack_cols = []
    for i, r in enumerate(rel):
        if r == "<=":
            slack_cols.append((i, 1.0))
        elif r == ">=":
            slack_cols.append((i, -1.0))
    n_slack = len(slack_cols)

    ident_col = np.full(m, -1, dtype=int)  # column whose tableau entries are B^-1 e_i
    art_rows = []
    for pos, (i, sgn) in enumerate(slack_cols):
        if sgn > 0:
            ident_col[i] = n_struct + pos
    for i in range(m):
        if ident_col[i] < 0:
            art_rows.append(i)
    n_art = len(art_rows)

    ncols = n_struct + n_slack + n_art
    table = np.zeros((m, ncols + 1))
    table[:, :n_struct] = A
    for pos, (i, sgn) in enumerate(slack_cols):
        table[i, n_struct + pos] = sgn
    for pos, i in enumerate(art_rows):
        table[i, n_struct + n_slack + pos] = 1.0
        ident_col[i] = n_struct + n_slack + pos
    table[:, -1] = b

    artificial = np.zeros(ncols, dtype=bool)
    artificial[n_struct + n_slack:] = True

    basis = np.array([ident_col[i] for i in range(m)], dtype=int)

    # Phase 1: drive the artificial variables to zero.
    if n_art:
        cost1 = np.zeros(ncols)
        cost1[artificial] = -1.0
        status = _simplex(table, basis, cost1, np.ones(ncols, dtype=bool))
        if status != "optimal":
            raise SolverError("phase-1 subproblem reported unbounded")
        infeas = -float(cost1[basis] @ table[:, -1])
        if infeas > FEASIBILITY_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpSolution("infeasible", math.nan, np.full(n_in, math.nan),
                              (), np.zeros(m_in))
        table, basis = _purge_artificials(table, basis, artificial)

    # Phase 2: original objective, artificial columns barred from entering.
    cost2 = np.zeros(ncols)
    cost2[:n_struct] = c
    allowed = ~artificial
    status = _simplex(table, basis, cost2, allowed)
    if status == "unbounded":
        return LpSolution("unbounded", math.inf if lp.sense == "max" else -math.inf,
                          np.full(n_in, math.nan), (), np.zeros(m_in))

    u = np.zeros(ncols)
    u[basis] = table[:, -1]
    x = recover(u[:n_struct])
    value = float(lp.objective @ x)

    # Duals: each row's identity column (its slack or artificial) currently
    # holds that row's component of the basis inverse, so y_i = c_B @ column.
    # This stays valid for rows whose tableau row was dropped as redundant.
    cb = cost2[basis]
    duals = np.zeros(m_in)
    for r in range(m_in):
        duals[r] = row_sign[r] * float(cb @ table[:, ident_col[r]])
    if lp.sense == "min":
        duals = -duals

    return LpSolution("optimal", value, x, tuple(int(j) for j in sorted(basis)), duals)


def _to_nonneg_form(lp: LinearProgram, sense_sign: float):
    """Rewrite the program over non-negative variables.

    Shifts finite lower bounds, mirrors upper-bounded-only variables, splits
    free variables, and appends explicit rows for finite upper bounds.
    Returns (cost, matrix, rhs, relations, recover) where ``recover`` maps the
    non-negative vector back to the original variables.
    """
    A_in = lp.matrix
    b = lp.rhs.copy()
    cols = []
    costs = []
    specs = []      # per original variable: how to undo the rewrite
    ub_rows = []    # (structural column, upper value) rows appended at the end

    for j in range(lp.n_vars):
        lo, hi = lp.bounds[j]
        a = A_in[:, j]
        cj = sense_sign * lp.objective[j]
        if lo == -_INF and hi == _INF:
            specs.append(("split", len(cols), len(cols) + 1))
            cols.append(a.copy())
            costs.append(cj)
            cols.append(-a)
            costs.append(-cj)
        elif lo == -_INF:
            # x = hi - u with u >= 0
            specs.append(("mirror", len(cols), hi))
            b = b - a * hi
            cols.append(-a)
            costs.append(-cj)
        else:
            # x = lo + u with u >= 0 (and optionally u <= hi - lo)
            specs.append(("shift", len(cols), lo))
            if lo != 0.0:
                b = b - a * lo
            if hi != _INF:
                ub_rows.append((len(cols), hi - lo))
            cols.append(a.copy())
            costs.append(cj)

    n_struct = len(cols)
    A = np.column_stack(cols) if cols else np.zeros((lp.n_rows, 0))
    rel = list(lp.relations)
    if ub_rows:
        extra = np.zeros((len(ub_rows), n_struct))
        extra_b = np.zeros(len(ub_rows))
        for i, (col, ub) in enumerate(ub_rows):
            extra[i, col] = 1.0
            extra_b[i] = ub
        A = np.vstack([A, extra])
        b = np.concatenate([b, extra_b])
        rel += ["<="] * len(ub_rows)

    def recover(u: np.ndarray) -> np.ndarray:
        x = np.zeros(lp.n_vars)
        for j, spec in enumerate(specs):
            if spec[0] == "split":
                x[j] = u[spec[1]] - u[spec[2]]
            elif spec[0] == "mirror":
                x[j] = spec[2] - u[spec[1]]
            else:
                x[j] = spec[2] + u[spec[1]]
        return x

    return np.asarray(costs), A, b, rel, recover


def _simplex(table: np.ndarray, basis: np.ndarray, cost: np.ndarray, allowed: np.ndarray) -> str:
    """Run primal simplex iterations in place; the start basis must be feasible."""
    m, w = table.shape
    ncols = w - 1
    for _ in range(_MAX_PIVOTS):
        reduced = cost[:ncols] - cost[basis] @ table[:, :ncols]
        reduced[~allowed] = -1.0
        reduced[basis] = -1.0
        entering = np.nonzero(reduced > _COST_TOL)[0]
        if entering.size == 0:
            return "optimal"
        j = int(entering[0])  # Bland: lowest-index improving column

        col = table[:, j]
        rows = np.nonzero(col > _RATIO_ELIG_TOL)[0]
        if rows.size == 0:
            if bool((col > PIVOT_TOL).any()):
                raise SolverError("only near-singular pivots available")
            return "unbounded"
        ratios = table[rows, -1] / col[rows]
        rmin = float(ratios.min())
        ties = rows[ratios <= rmin + 1e-7 * (1.0 + abs(rmin))]
        # stability first: the largest pivot among (near-)minimal ratios;
        # deterministic tie-break on the basic-variable index
        piv_mag = col[ties]
        big = ties[piv_mag >= piv_mag.max() * (1.0 - 1e-9)]
        i = int(big[np.argmin(basis[big])])

        _pivot(table, basis, i, j)
        rhs = table[:, -1]
        np.clip(rhs, 0.0, None, out=rhs)
    raise SolverError("simplex exceeded the pivot budget (numerical breakdown)")


def _pivot(table: np.ndarray, basis: np.ndarray, i: int, j: int) -> None:
    piv = table[i, j]
    if abs(piv) < PIVOT_TOL:
        raise SolverError(f"pivot element {piv!r} below tolerance")
    row = table[i] / piv
    colv = table[:, j].copy()
    table -= np.outer(colv, row)
    table[i] = row
    basis[i] = j


def _purge_artificials(table, basis, artificial):
    """Pivot zero-level artificials out of the basis; drop redundant rows."""
    drop = []
    for pos in range(table.shape[0]):
        if not artificial[basis[pos]]:
            continue
        row = table[pos, :-1]
        eligible = ~artificial
        eligible[basis] = False  # a column can be basic in one row only
        cand = np.nonzero((np.abs(row) > FEASIBILITY_TOL) & eligible)[0]
        if cand.size:
            _pivot(table, basis, pos, int(cand[0]))
        else:
            drop.append(pos)
    if drop:
        table = np.delete(table, drop, axis=0)
        basis = np.delete(basis, drop)
    return table, basis


def dual_of(lp: LinearProgram) -> LinearProgram:
    """Construct the standard dual program.

    Follows the textbook correspondence: constraint relations map to dual
    variable signs and variable signs map to dual constraint relations, so
    ``dual_of(dual_of(lp))`` is equivalent to ``lp`` and a feasible, bounded
    pair has equal optimal values.  Variables must be sign-constrained or
    free (box bounds other than (0, inf), (-inf, 0], (-inf, inf) are not
    supported here).
    """
    var_kind = []
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo == 0.0 and hi == _INF:
            var_kind.append("nonneg")
        elif lo == -_INF and hi == 0.0:
            var_kind.append("nonpos")
        elif lo == -_INF and hi == _INF:
            var_kind.append("free")
        else:
            raise ValidationError(
                f"dual_of supports sign-constrained or free variables only; "
                f"variable {j} has bounds ({lo}, {hi})"
            )

    maximize = lp.sense == "max"
    # Dual variable bounds from primal row relations.
    y_bounds = []
    for r in lp.relations:
        if r == "=":
            y_bounds.append((-_INF, _INF))
        elif (r == "<=") == maximize:
            y_bounds.append((0.0, _INF))
        else:
            y_bounds.append((-_INF, 0.0))
    # Dual row relations from primal variable signs.
    d_rel = []
    for kind in var_kind:
        if kind == "free":
            d_rel.append("=")
        elif (kind == "nonneg") == maximize:
            d_rel.append(">=")
        else:
            d_rel.append("<=")

    return LinearProgram(
        objective=lp.rhs.copy(),
        matrix=lp.matrix.T.copy(),
        relations=tuple(d_rel),
        rhs=lp.objective.copy(),
        bounds=tuple(y_bounds),
        sense="min" if maximize else "max",
    )
