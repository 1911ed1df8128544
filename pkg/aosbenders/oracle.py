#!/usr/bin/env python3
'''
Brute-force ground truth for the decomposition results.

    brute_force_binary      every feasible binary x, recourse by shortest
                            path (networkx) when the problem carries a graph
    solve_ef_direct         the extensive form solved in one piece
    brute_force_vertices    polytope vertices from all n-row subsystems
    counterexample_absQ     the Q(x) = |x| instance and its partial cut pools

The in_level_* predicates test membership in the sublevel sets of the
epigraph, master, value-function and extensive-form formulations at one
point; the test suite checks the inclusions between them.
'''
import itertools
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import NamedTuple

import numpy as np

from .benders_engine import CutPool
from .binary_solver import MixedBinaryProgram, solve_bip
from .errors import InputError, ModelError
from .lp_core import LpStatus, RowSense, solve_lp
from .two_stage import CutForm, Cut, Domain, Scenario, TwoStageProblem, build_extensive_form, evaluate_Q, first_stage_cost
from .workers import thread_map

MAX_BINARIES = 20
MAX_VERTEX_VARS = 6
MEMBERSHIP_TOL = 1e-7


class OracleMethod(StrEnum):
    BINARY_EXHAUSTIVE = 'binary_exhaustive'
    EF_DIRECT = 'ef_direct'
    VERTEX_BRUTEFORCE = 'vertex_bruteforce'


@dataclass(eq=False)
class OraclePoint:
    x: np.ndarray
    objective: float


@dataclass(eq=False)
class OracleReport:
    tau: float
    exact_set: list
    method: OracleMethod

    def __len__(self):
        return len(self.exact_set)

    def keys(self, decimals=6):
        return {tuple(np.round(point.x, decimals).tolist()) for point in self.exact_set}


def _mask_to_x(mask, n):
    return np.array([(mask >> j) & 1 for j in range(n)], dtype=float)


def _recourse_value(p, x):
    if p.graph is not None:
        return -p.graph.shortest_path_length(x)
    return evaluate_Q(p, x).q_value


def brute_force_binary(p, tau):
    if not p.is_binary:
        raise InputError("binary brute force needs an all-binary first stage")
    if p.n1 > MAX_BINARIES:
        raise InputError(f"refusing to enumerate 2^{p.n1} points, the limit is {MAX_BINARIES} binaries")
    n = p.n1
    scale = 1.0 + float(np.max(np.abs(p.x_rhs), initial=0.0))
    tol = 1e-6 * (1.0 + abs(tau))

    def check(mask):
        x = _mask_to_x(mask, n)
        if p.first_stage_violation(x) > 1e-9 * scale:
            return None
        objective = first_stage_cost(p, x) + _recourse_value(p, x)
        return OraclePoint(x, objective) if objective <= tau + tol else None

    chunk = 256
    chunks = [range(start, min(start + chunk, 2 ** n)) for start in range(0, 2 ** n, chunk)]
    results = thread_map(lambda masks: [check(mask) for mask in masks], chunks, name='aos-oracle')
    points = [point for batch in results for point in batch if point is not None]
    points.sort(key=lambda point: (point.objective, tuple(point.x.tolist())))
    return OracleReport(tau, points, OracleMethod.BINARY_EXHAUSTIVE)


@dataclass(eq=False)
class EfSolution:
    x: np.ndarray
    recourse: list
    objective: float


class EfDirectResult(NamedTuple):
    z_star: float
    solution: EfSolution


def solve_ef_direct(p):
    ef = build_extensive_form(p)
    sol = solve_bip(ef.model) if isinstance(ef.model, MixedBinaryProgram) else solve_lp(ef.model)
    if sol.status == LpStatus.INFEASIBLE:
        raise ModelError("extensive form is infeasible")
    if sol.status == LpStatus.UNBOUNDED:
        raise ModelError("extensive form is unbounded")
    x, recourse = ef.split(sol.primal)
    return EfDirectResult(sol.objective, EfSolution(x, recourse, sol.objective))


def ef_oracle_report(p):
    z_star, solution = solve_ef_direct(p)
    return OracleReport(z_star, [OraclePoint(solution.x, z_star)], OracleMethod.EF_DIRECT)


def brute_force_vertices(lp, tau=np.inf):
    '''Vertices of {constraints, bounds, objective <= tau} by solving every n-row subsystem.'''
    n = lp.n_vars
    if n > MAX_VERTEX_VARS:
        raise InputError(f"vertex brute force is limited to {MAX_VERTEX_VARS} variables")
    if np.isfinite(tau):
        lp = lp.with_rows(lp.objective_coeffs[None, :], [RowSense.LE], [tau - lp.objective_const])
    rows, rhs = [], []
    for a, b in zip(lp.constraint_matrix, lp.rhs):
        rows.append(a)
        rhs.append(b)
    for j in range(n):
        for bound in (lp.var_lower[j], lp.var_upper[j]):
            if np.isfinite(bound):
                e = np.zeros(n)
                e[j] = 1.0
                rows.append(e)
                rhs.append(bound)
    rows, rhs = np.array(rows), np.array(rhs)

    found = {}
    for subset in itertools.combinations(range(len(rows)), n):
        M = rows[list(subset)]
        if np.linalg.matrix_rank(M) < n:
            continue
        x = np.linalg.solve(M, rhs[list(subset)])
        if lp.violation(x) > 1e-9 * (1.0 + np.max(np.abs(x), initial=0.0)):
            continue
        key = tuple(np.round(x, 6).tolist())
        found.setdefault(key, OraclePoint(x, lp.evaluate(x)))
    points = sorted(found.values(), key=lambda point: (point.objective, tuple(np.round(point.x, 6).tolist())))
    return OracleReport(tau, points, OracleMethod.VERTEX_BRUTEFORCE)


def in_level_ev(p, x, theta, tau, tol=MEMBERSHIP_TOL):
    '''(x, theta) with x in X, theta >= Q(x) and g(x) + theta <= tau.'''
    if p.first_stage_violation(x) > tol:
        return False
    return theta >= evaluate_Q(p, x).q_value - tol and first_stage_cost(p, x) + theta <= tau + tol


def in_level_bm(p, pool, x, theta, tau, tol=MEMBERSHIP_TOL):
    '''(x, theta) with x in X, theta above every cut in pool and g(x) + theta <= tau.'''
    if p.first_stage_violation(x) > tol:
        return False
    return theta >= pool.value(x) - tol and first_stage_cost(p, x) + theta <= tau + tol


def in_level_pv(p, x, tau, tol=MEMBERSHIP_TOL):
    if p.first_stage_violation(x) > tol:
        return False
    return first_stage_cost(p, x) + evaluate_Q(p, x).q_value <= tau + tol


def in_level_ef(p, x, recourse, tau, tol=MEMBERSHIP_TOL):
    '''(x, y_1..y_N) feasible for the extensive form with objective <= tau.

    recourse holds the minimize-form recourse vectors (the dual potentials
    for primal_path problems).
    '''
    if p.first_stage_violation(x) > tol:
        return False
    total = first_stage_cost(p, x)
    for sc, y in zip(p.min_form_scenarios(), recourse):
        lp = sc.subproblem(x)
        if lp.violation(y) > tol * (1.0 + float(np.max(np.abs(lp.rhs), initial=0.0))):
            return False
        total += sc.probability * lp.evaluate(y)
    return total <= tau + tol


def in_proj_level_ef(p, x, tau, tol=MEMBERSHIP_TOL):
    '''Whether some recourse completes x to an EF point with objective <= tau.

    Solved on the extensive form with x fixed, independent of evaluate_Q.
    '''
    if p.first_stage_violation(x) > tol:
        return False
    ef = build_extensive_form(p)
    lp = ef.lp
    lower, upper = lp.var_lower.copy(), lp.var_upper.copy()
    lower[:p.n1] = upper[:p.n1] = np.asarray(x, dtype=float)
    sol = solve_lp(lp.with_bounds(lower, upper))
    return sol.status == LpStatus.OPTIMAL and sol.objective <= tau + tol


@dataclass(eq=False)
class AbsValueCounterexample:
    '''min_x Q(x) with Q(x) = |x|, x free.

    The dual feasible set is the interval [-1, 1]; its vertices -1 and +1
    give the cuts theta >= -x and theta >= x.
    '''
    problem: TwoStageProblem
    dual_interval: tuple = (-1.0, 1.0)
    dual_vertices: tuple = (-1.0, 1.0)

    def q(self, x):
        return evaluate_Q(self.problem, [x]).q_value

    def q_hat(self, x, vertices):
        sc = self.problem.scenarios[0]
        return max(float(pi * (sc.h[0] - sc.T[0, 0] * x)) for pi in vertices)

    def cut_pool(self, vertices):
        sc = self.problem.scenarios[0]
        return CutPool(Cut(pi * sc.h[0], [-pi * sc.T[0, 0]]) for pi in vertices)

    def vertex_subsets(self):
        return [subset for size in (1, 2) for subset in itertools.combinations(self.dual_vertices, size)]

    def in_epi_q(self, x, theta):
        return theta >= self.q(x) - MEMBERSHIP_TOL

    def in_epi_q_hat(self, x, theta, vertices):
        return theta >= self.q_hat(x, vertices) - MEMBERSHIP_TOL


def counterexample_absQ():
    scenario = Scenario(
        probability=1.0,
        q=[1.0, 1.0],
        W=[[1.0, -1.0]],
        T=[[-1.0]],
        h=[0.0],
        senses=(RowSense.EQ,),
    )
    problem = TwoStageProblem(
        g_coeffs=[0.0],
        x_matrix=np.zeros((0, 1)),
        x_senses=(),
        x_rhs=[],
        x_domains=(Domain.FREE,),
        scenarios=[scenario],
        cut_form=CutForm.DUAL_STANDARD,
        theta_floor=0.0,
        name='abs-value',
    )
    return AbsValueCounterexample(problem)
