#!/usr/bin/env python3
'''
Single-cut Benders loop.

Each iteration solves the master min g(x) + theta over X and the current
cuts, evaluates the true recourse Q at the master point and adds the
aggregated supporting cut, until theta matches Q(x) within benders_tol.
'''
from dataclasses import dataclass, field

import numpy as np

from . import log
from .binary_solver import MixedBinaryProgram, solve_bip
from .errors import InputError, ModelError
from .lp_core import LinearProgram, LpStatus, RowSense, solve_lp
from .two_stage import Cut, evaluate_Q, first_stage_cost

__all__ = [
    'Cut', 'CutPool', 'IterationRecord', 'BendersResult',
    'add_cut', 'build_master', 'solve_master', 'solve_benders',
]


class CutPool():
    '''Ordered, duplicate-free list of cuts.'''
    ROUNDING = 1e-9

    def __init__(self, cuts=()):
        self.cuts = []
        self.dedupe_index = set()
        self.stalls = 0
        for cut in cuts:
            self.add(cut)

    def __len__(self):
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def __getitem__(self, index):
        return self.cuts[index]

    def add(self, cut, converged=False):
        key = cut.key(self.ROUNDING)
        if key in self.dedupe_index:
            if not converged:
                self.stalls += 1
                log.warn(f"cut pool: duplicate cut alpha={cut.alpha:.10g} added before convergence, "
                         "tolerances are probably mismatched")
            return False
        self.dedupe_index.add(key)
        self.cuts.append(cut)
        return True

    def value(self, x):
        '''max over cuts of alpha + beta @ x, -inf for an empty pool.'''
        if not self.cuts:
            return -np.inf
        return max(cut.value(x) for cut in self.cuts)


def add_cut(pool, cut, converged=False):
    pool.add(cut, converged=converged)
    return pool


@dataclass(eq=False)
class IterationRecord:
    iteration: int
    master_objective: float
    theta: float
    q_value: float
    upper_bound: float
    gap: float
    x: np.ndarray
    cut: Cut


@dataclass(eq=False)
class BendersResult:
    x_star: np.ndarray
    theta: float
    z_star: float
    cut_pool: CutPool
    iterations: int
    converged: bool
    q_star: float = None
    best_upper: float = None
    trace: list = field(default_factory=list)


def build_master(p, pool):
    '''min g(x) + theta over X with theta >= alpha_i + beta_i @ x.

    theta is the last variable. With an empty pool theta_floor keeps the
    master bounded, so it must be set.
    '''
    n1 = p.n1
    if p.theta_floor is None and len(pool) == 0:
        raise InputError("theta_floor is required to bound the master before the first cut")

    x_lower, x_upper = p.first_stage_bounds()
    theta_lower = -np.inf if p.theta_floor is None else p.theta_floor
    lp = LinearProgram(
        objective_coeffs=np.concatenate([p.g_coeffs, [1.0]]),
        constraint_matrix=np.hstack([p.x_matrix, np.zeros((p.x_matrix.shape[0], 1))]),
        constraint_senses=p.x_senses,
        rhs=p.x_rhs,
        var_lower=np.concatenate([x_lower, [theta_lower]]),
        var_upper=np.concatenate([x_upper, [np.inf]]),
        objective_const=p.g_const,
    )
    if len(pool):
        rows = np.array([np.concatenate([-cut.beta, [1.0]]) for cut in pool])
        lp = lp.with_rows(rows, [RowSense.GE] * len(pool), [cut.alpha for cut in pool])
    if p.has_binaries:
        return MixedBinaryProgram(lp, p.binary_indices)
    return lp


def solve_master(master):
    if isinstance(master, MixedBinaryProgram):
        sol = solve_bip(master)
    else:
        sol = solve_lp(master)
    if sol.status == LpStatus.INFEASIBLE:
        raise ModelError("master problem is infeasible, the first-stage set X is empty")
    if sol.status == LpStatus.UNBOUNDED:
        raise ModelError("master problem is unbounded, set a valid theta_floor")
    return sol


def solve_benders(p, benders_tol=1e-6, iter_limit=100, on_iteration=None):
    '''Run the Benders loop from an empty cut pool.

    Returns a BendersResult; hitting iter_limit (or a stall) yields
    converged=False rather than raising.
    '''
    if iter_limit < 1:
        raise InputError(f"iter_limit must be at least 1, got {iter_limit}")
    pool = CutPool()
    trace = []
    warm = None
    best_upper = np.inf
    n1 = p.n1

    for iteration in range(1, iter_limit + 1):
        master = solve_master(build_master(p, pool))
        x = master.primal[:n1]
        theta = float(master.primal[n1])
        value = evaluate_Q(p, x, warm_bases=warm)
        warm = value.bases

        upper = first_stage_cost(p, x) + value.q_value
        if upper < best_upper:
            best_upper = upper
        gap = abs(value.q_value - theta)

        record = IterationRecord(iteration, master.objective, theta, value.q_value, upper, gap, x.copy(), value.cut)
        trace.append(record)
        log.debug(f"benders {iteration:3d}: lower {master.objective:.10g}  upper {upper:.10g}  gap {gap:.3e}")
        if on_iteration is not None:
            on_iteration(record)

        # a repeated cut means theta already supports Q at x, the gap is round-off
        repeated = gap <= benders_tol * (1.0 + abs(value.q_value)) and value.cut.key(pool.ROUNDING) in pool.dedupe_index
        if gap <= benders_tol or repeated:
            log.info(f"benders converged after {iteration} iterations, z* = {master.objective:.10g}")
            return BendersResult(x.copy(), theta, master.objective, pool, iteration, True,
                                 q_star=value.q_value, best_upper=best_upper, trace=trace)
        if not pool.add(value.cut):
            log.warn(f"benders stalled at iteration {iteration}: the new cut is already in the pool")
            break

    log.warn(f"benders did not converge in {len(trace)} iterations, gap {trace[-1].gap:.3e}")
    last = trace[-1]
    return BendersResult(last.x.copy(), last.theta, last.master_objective, pool, len(trace), False,
                         q_star=last.q_value, best_upper=best_upper, trace=trace)
