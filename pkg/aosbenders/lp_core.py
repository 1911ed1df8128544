#!/usr/bin/env python3
'''
Dense revised simplex with dual prices.

LinearProgram is the general form the other modules build. standardize()
rewrites it as equality rows over nonnegative columns, RevisedSimplex
solves that form with a two-phase primal method, or with a dual simplex
pass when it is warm started from a dual feasible basis.
'''
from dataclasses import dataclass, replace
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np

from . import log
from .errors import InputError, InvalidBasisError, IterationLimitError, WarmStartError


class Sense(StrEnum):
    MINIMIZE = 'minimize'
    MAXIMIZE = 'maximize'


class RowSense(StrEnum):
    LE = '<='
    EQ = '='
    GE = '>='


class LpStatus(StrEnum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'


_ROW_SENSES = {
    '<=': RowSense.LE, '≤': RowSense.LE, 'le': RowSense.LE,
    '=': RowSense.EQ, '==': RowSense.EQ, 'eq': RowSense.EQ,
    '>=': RowSense.GE, '≥': RowSense.GE, 'ge': RowSense.GE,
}

_SENSES = {
    'min': Sense.MINIMIZE, 'minimize': Sense.MINIMIZE,
    'max': Sense.MAXIMIZE, 'maximize': Sense.MAXIMIZE,
}


def row_sense(value):
    try:
        return _ROW_SENSES[str(value).strip().lower()]
    except KeyError:
        raise InputError(f"unknown constraint sense {value!r}, expected '<=', '=' or '>='")


def objective_sense(value):
    try:
        return _SENSES[str(value).strip().lower()]
    except KeyError:
        raise InputError(f"unknown objective sense {value!r}, expected 'minimize' or 'maximize'")


@dataclass(eq=False)
class LinearProgram:
    objective_coeffs: np.ndarray
    constraint_matrix: np.ndarray = None
    constraint_senses: tuple = ()
    rhs: np.ndarray = None
    var_lower: np.ndarray = None
    var_upper: np.ndarray = None
    sense: Sense = Sense.MINIMIZE
    objective_const: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.objective_coeffs, dtype=float).ravel()
        n = c.size
        senses = tuple(row_sense(s) for s in self.constraint_senses)
        m = len(senses)
        if self.constraint_matrix is None:
            A = np.zeros((m, n))
        else:
            A = np.asarray(self.constraint_matrix, dtype=float)
            if A.size == 0:
                A = np.zeros((m, n))
        if A.ndim != 2 or A.shape != (m, n):
            raise InputError(f"constraint matrix has shape {A.shape}, expected ({m}, {n})")
        b = np.zeros(m) if self.rhs is None else np.asarray(self.rhs, dtype=float).ravel()
        if b.size != m:
            raise InputError(f"rhs has {b.size} entries for {m} rows")
        lower = np.zeros(n) if self.var_lower is None else np.asarray(self.var_lower, dtype=float).ravel()
        upper = np.full(n, np.inf) if self.var_upper is None else np.asarray(self.var_upper, dtype=float).ravel()
        if lower.size != n or upper.size != n:
            raise InputError("variable bounds do not match the number of variables")
        if np.any(lower > upper):
            bad = int(np.flatnonzero(lower > upper)[0])
            raise InputError(f"variable {bad} has lower bound {lower[bad]} above upper bound {upper[bad]}")
        if np.any(np.isnan(A)) or np.any(np.isnan(b)) or np.any(np.isnan(c)):
            raise InputError("linear program contains NaN entries")

        self.objective_coeffs = c
        self.constraint_matrix = A
        self.constraint_senses = senses
        self.rhs = b
        self.var_lower = lower
        self.var_upper = upper
        self.sense = objective_sense(self.sense)
        self.objective_const = float(self.objective_const)

    @property
    def n_vars(self):
        return self.objective_coeffs.size

    @property
    def n_rows(self):
        return len(self.constraint_senses)

    def evaluate(self, x):
        return float(self.objective_coeffs @ np.asarray(x, dtype=float) + self.objective_const)

    def violation(self, x):
        '''Largest constraint or bound violation of x (0 when feasible).'''
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.n_rows:
            lhs = self.constraint_matrix @ x
            for value, sense, b in zip(lhs, self.constraint_senses, self.rhs):
                if sense == RowSense.LE:
                    worst = max(worst, value - b)
                elif sense == RowSense.GE:
                    worst = max(worst, b - value)
                else:
                    worst = max(worst, abs(value - b))
        if x.size:
            worst = max(worst, float(np.max(self.var_lower - x)), float(np.max(x - self.var_upper)))
        return worst

    def with_rows(self, matrix, senses, rhs):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        if matrix.size == 0:
            return self
        return replace(
            self,
            constraint_matrix=np.vstack([self.constraint_matrix, matrix]),
            constraint_senses=self.constraint_senses + tuple(senses),
            rhs=np.concatenate([self.rhs, np.asarray(rhs, dtype=float).ravel()]),
        )

    def with_bounds(self, lower=None, upper=None):
        return replace(
            self,
            var_lower=self.var_lower if lower is None else lower,
            var_upper=self.var_upper if upper is None else upper,
        )

    def with_objective(self, coeffs, sense=None, const=None):
        return replace(
            self,
            objective_coeffs=coeffs,
            sense=self.sense if sense is None else sense,
            objective_const=self.objective_const if const is None else const,
        )


@dataclass(eq=False)
class StandardForm:
    '''Equality form of a LinearProgram plus the map back to its variables.

    Original variable j equals shift[j] + sum(sign * z[col]) over the
    structural columns that belong to j. The equality program always
    minimizes; objective = objective_sign * (c @ z) + offset.
    '''
    lp: LinearProgram
    column_var: np.ndarray
    column_sign: np.ndarray
    shift: np.ndarray
    objective_sign: float
    offset: float
    n_original_rows: int

    @property
    def A(self):
        return self.lp.constraint_matrix

    @property
    def b(self):
        return self.lp.rhs

    @property
    def c(self):
        return self.lp.objective_coeffs

    @property
    def n_structural(self):
        return self.column_var.size

    def recover(self, z):
        x = self.shift.copy()
        np.add.at(x, self.column_var, self.column_sign * np.asarray(z)[:self.n_structural])
        return x

    def direction(self, dz):
        dx = np.zeros_like(self.shift)
        np.add.at(dx, self.column_var, self.column_sign * np.asarray(dz)[:self.n_structural])
        return dx


def standardize(lp):
    n, m = lp.n_vars, lp.n_rows
    column_var, column_sign, upper_rows = [], [], []
    shift = np.zeros(n)
    for j in range(n):
        lower, upper = lp.var_lower[j], lp.var_upper[j]
        if np.isfinite(lower):
            shift[j] = lower
            column_var.append(j)
            column_sign.append(1.0)
            if np.isfinite(upper):
                upper_rows.append((len(column_var) - 1, upper - lower))
        elif np.isfinite(upper):
            # x = u - z
            shift[j] = upper
            column_var.append(j)
            column_sign.append(-1.0)
        else:
            column_var += [j, j]
            column_sign += [1.0, -1.0]
    column_var = np.asarray(column_var, dtype=int)
    column_sign = np.asarray(column_sign, dtype=float)
    n_struct = column_var.size

    slack_rows = [i for i, s in enumerate(lp.constraint_senses) if s != RowSense.EQ]
    n_cols = n_struct + len(slack_rows) + len(upper_rows)
    n_std_rows = m + len(upper_rows)

    A = np.zeros((n_std_rows, n_cols))
    A[:m, :n_struct] = lp.constraint_matrix[:, column_var] * column_sign
    b = np.zeros(n_std_rows)
    b[:m] = lp.rhs - lp.constraint_matrix @ shift

    col = n_struct
    for i in slack_rows:
        A[i, col] = 1.0 if lp.constraint_senses[i] == RowSense.LE else -1.0
        col += 1
    for k, (struct_col, width) in enumerate(upper_rows):
        A[m + k, struct_col] = 1.0
        A[m + k, col] = 1.0
        b[m + k] = width
        col += 1

    objective_sign = 1.0 if lp.sense == Sense.MINIMIZE else -1.0
    c = np.zeros(n_cols)
    c[:n_struct] = objective_sign * lp.objective_coeffs[column_var] * column_sign

    std = LinearProgram(
        objective_coeffs=c,
        constraint_matrix=A,
        constraint_senses=(RowSense.EQ,) * n_std_rows,
        rhs=b,
        sense=Sense.MINIMIZE,
    )
    offset = float(lp.objective_coeffs @ shift) + lp.objective_const
    return StandardForm(std, column_var, column_sign, shift, objective_sign, offset, m)


@dataclass(eq=False)
class LpSolution:
    status: LpStatus
    primal: np.ndarray = None
    duals: np.ndarray = None
    objective: float = None
    basis: tuple = ()
    iterations: int = 0
    standard: StandardForm = None
    dual_objective: float = None
    nodes: int = 0

    @property
    def is_optimal(self):
        return self.status == LpStatus.OPTIMAL

    @property
    def dual_gap(self):
        if not self.is_optimal:
            return None
        return abs(self.objective - self.dual_objective)


class RevisedSimplex():
    '''Two-phase revised simplex on min c@z, A z = b, z >= 0.

    Columns n..n+m-1 are artificials. They never enter once they have
    left, and an artificial that cannot be pivoted out after phase 1 marks
    a redundant row and stays basic at zero, so the basis always has one
    column per row.
    '''
    FEASIBILITY_TOL = 1e-8
    REDUCED_COST_TOL = 1e-9
    PIVOT_TOL = 1e-9
    DUAL_GAP_TOL = 1e-7
    REFACTOR_EVERY = 50
    # consecutive degenerate pivots before switching to Bland's rule
    DEGENERATE_STREAK = 10
    MAX_PIVOTS = 50000

    def __init__(self, A, b, c):
        self.A = np.asarray(A, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.c = np.asarray(c, dtype=float)
        self.m, self.n = self.A.shape
        self.feas_tol = self.FEASIBILITY_TOL * max(1.0, float(np.max(np.abs(self.b), initial=0.0)))
        self.pivots = 0
        self.bland = False
        self.basis = []
        self.B_inv = np.eye(self.m)
        self._streak = 0
        self._since_refactor = 0
        self._set_row_signs(np.ones(self.m))

    def _set_row_signs(self, signs):
        self.row_sign = signs
        self.b_work = self.b * signs
        self.A_full = np.hstack([self.A * signs[:, None], np.eye(self.m)])
        self.cost = np.concatenate([self.c, np.zeros(self.m)])
        self.real = np.zeros(self.n + self.m, dtype=bool)
        self.real[:self.n] = True

    def solve(self):
        # negative rhs rows are flipped so the artificial basis starts feasible
        self._set_row_signs(np.where(self.b < 0, -1.0, 1.0))
        self.basis = list(range(self.n, self.n + self.m))
        self.B_inv = np.eye(self.m)
        self._since_refactor = 0

        phase_one = np.concatenate([np.zeros(self.n), np.ones(self.m)])
        self._primal(phase_one)
        infeasibility = float(phase_one[self.basis] @ self._basic_values()) if self.m else 0.0
        if infeasibility > self.feas_tol:
            return LpStatus.INFEASIBLE
        self._drive_out_artificials()
        return self._primal(self.cost)

    def solve_from(self, basis):
        basis = [int(j) for j in basis]
        if len(basis) != self.m or len(set(basis)) != self.m:
            raise InvalidBasisError(f"warm basis has {len(set(basis))} distinct columns, expected {self.m}")
        if any(j < 0 or j >= self.n + self.m for j in basis):
            raise InvalidBasisError("warm basis references a column outside the standardized program")
        self.basis = basis
        if self.m:
            B = self.A_full[:, self.basis]
            if np.linalg.matrix_rank(B) < self.m:
                raise InvalidBasisError("warm basis matrix is singular")
            self._refactor()
        x_B = self._basic_values()
        for r, j in enumerate(self.basis):
            if j >= self.n and abs(x_B[r]) > self.feas_tol:
                raise InvalidBasisError(f"artificial column of row {j - self.n} is basic at a nonzero level")

        if self.m == 0 or x_B.min() >= -self.feas_tol:
            return self._primal(self.cost)
        if self._dual_feasible():
            status = self._dual()
            if status != LpStatus.OPTIMAL:
                return status
            return self._primal(self.cost)
        raise WarmStartError("warm basis is neither primal nor dual feasible")

    def primal_values(self):
        z = np.zeros(self.n + self.m)
        if self.m:
            z[self.basis] = self._basic_values()
        z = z[:self.n]
        z[np.abs(z) <= 1e-12 * max(1.0, float(np.max(np.abs(z), initial=0.0)))] = 0.0
        return np.where(z < 0.0, 0.0, z)

    def duals(self):
        if not self.m:
            return np.zeros(0)
        return (self.cost[self.basis] @ self.B_inv) * self.row_sign

    def _basic_values(self):
        return self.B_inv @ self.b_work

    def _reduced_costs(self, cost):
        y = cost[self.basis] @ self.B_inv if self.m else np.zeros(0)
        return cost - y @ self.A_full

    def _nonbasic_real(self):
        mask = self.real.copy()
        mask[self.basis] = False
        return mask

    def _dual_feasible(self):
        d = self._reduced_costs(self.cost)
        return bool(np.all(d[self._nonbasic_real()] >= -self.REDUCED_COST_TOL))

    def _primal(self, cost):
        while True:
            x_B = self._basic_values()
            d = self._reduced_costs(cost)
            candidates = np.flatnonzero(self._nonbasic_real() & (d < -self.REDUCED_COST_TOL))
            if candidates.size == 0:
                return LpStatus.OPTIMAL
            if self.bland:
                q = candidates[0]
            else:
                q = candidates[np.argmin(d[candidates])]
            u = self.B_inv @ self.A_full[:, q]
            r = self._ratio_test(x_B, u)
            if r is None:
                return LpStatus.UNBOUNDED
            self._pivot(r, q, u, degenerate=x_B[r] <= self.feas_tol)

    def _ratio_test(self, x_B, u):
        rows = np.flatnonzero(u > self.PIVOT_TOL)
        if rows.size == 0:
            return None
        ratios = np.maximum(x_B[rows], 0.0) / u[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * (1.0 + best)]
        if self.bland:
            return min(tied, key=lambda r: self.basis[r])
        return tied[np.argmax(u[tied])]

    def _dual(self):
        while True:
            x_B = self._basic_values()
            infeasible = np.flatnonzero(x_B < -self.feas_tol)
            if infeasible.size == 0:
                return LpStatus.OPTIMAL
            if self.bland:
                r = int(min(infeasible, key=lambda i: self.basis[i]))
            else:
                r = int(infeasible[np.argmin(x_B[infeasible])])
            d = self._reduced_costs(self.cost)
            alpha = self.B_inv[r] @ self.A_full
            candidates = np.flatnonzero(self._nonbasic_real() & (alpha < -self.PIVOT_TOL))
            if candidates.size == 0:
                return LpStatus.INFEASIBLE
            ratios = np.maximum(d[candidates], 0.0) / -alpha[candidates]
            if self.bland:
                best = ratios.min()
                q = candidates[np.flatnonzero(ratios <= best + 1e-12 * (1.0 + best))[0]]
            else:
                q = candidates[np.argmin(ratios)]
            u = self.B_inv @ self.A_full[:, q]
            self._pivot(r, q, u, degenerate=ratios.min() <= self.REDUCED_COST_TOL)

    def _drive_out_artificials(self):
        for r in range(self.m):
            if self.basis[r] < self.n:
                continue
            row = self.B_inv[r] @ self.A_full[:, :self.n]
            row[[j for j in self.basis if j < self.n]] = 0.0
            candidates = np.flatnonzero(np.abs(row) > self.PIVOT_TOL)
            if candidates.size == 0:
                continue  # redundant row
            q = candidates[np.argmax(np.abs(row[candidates]))]
            u = self.B_inv @ self.A_full[:, q]
            self._pivot(r, q, u, degenerate=False)
        self._streak = 0

    def _pivot(self, r, q, u, degenerate):
        row = self.B_inv[r] / u[r]
        self.B_inv -= np.outer(u, row)
        self.B_inv[r] = row
        self.basis[r] = int(q)
        self.pivots += 1

        if degenerate:
            self._streak += 1
            if self._streak >= self.DEGENERATE_STREAK and not self.bland:
                log.debug(f"simplex: {self._streak} degenerate pivots, switching to Bland's rule")
                self.bland = True
        else:
            self._streak = 0

        self._since_refactor += 1
        if self._since_refactor >= self.REFACTOR_EVERY:
            self._refactor()
        if self.pivots > self.MAX_PIVOTS:
            raise IterationLimitError(f"simplex exceeded {self.MAX_PIVOTS} pivots")

    def _refactor(self):
        self.B_inv = np.linalg.inv(self.A_full[:, self.basis])
        self._since_refactor = 0


def _package(lp, sf, solver, status):
    if status != LpStatus.OPTIMAL:
        return LpSolution(status, basis=tuple(solver.basis), iterations=solver.pivots, standard=sf)
    z = solver.primal_values()
    x = sf.recover(z)
    objective = lp.evaluate(x)
    duals = sf.objective_sign * solver.duals()
    dual_objective = float(sf.offset + duals @ sf.b)
    if abs(objective - dual_objective) > RevisedSimplex.DUAL_GAP_TOL * (1.0 + abs(objective)):
        log.warn(f"simplex: duality gap {abs(objective - dual_objective):.3e} at objective {objective:.10g}")
    return LpSolution(
        status=status,
        primal=x,
        duals=duals,
        objective=objective,
        basis=tuple(solver.basis),
        iterations=solver.pivots,
        standard=sf,
        dual_objective=dual_objective,
    )


def solve_lp(lp):
    sf = standardize(lp)
    solver = RevisedSimplex(sf.A, sf.b, sf.c)
    return _package(lp, sf, solver, solver.solve())


def solve_lp_from(lp, warm_basis):
    '''Solve lp starting from warm_basis (column indices of the standardized form).

    Primal feasible bases continue with primal simplex, dual feasible ones
    with dual simplex. Anything else raises instead of silently restarting.
    '''
    sf = standardize(lp)
    solver = RevisedSimplex(sf.A, sf.b, sf.c)
    return _package(lp, sf, solver, solver.solve_from(warm_basis))
