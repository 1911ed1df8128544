#!/usr/bin/env python3
'''
Branch and bound over LP relaxations for programs whose integer variables
are all binary (plus any number of continuous ones, such as the theta
column of a Benders master).

Nodes are explored best bound first and branch on the most fractional
binary, lowest index on ties, so the search is deterministic.
'''
import heapq
from dataclasses import dataclass

import numpy as np

from . import log
from .errors import InputError, ModelError
from .lp_core import LinearProgram, LpSolution, LpStatus, RowSense, Sense, row_sense, solve_lp


@dataclass(eq=False)
class MixedBinaryProgram:
    base_lp: LinearProgram
    binary_vars: tuple

    def __post_init__(self):
        n = self.base_lp.n_vars
        binaries = tuple(sorted(int(j) for j in self.binary_vars))
        if len(set(binaries)) != len(binaries) or any(j < 0 or j >= n for j in binaries):
            raise InputError(f"binary variable indices {binaries} are not valid for {n} variables")
        idx = list(binaries)
        if np.any(self.base_lp.var_lower[idx] != 0.0) or np.any(self.base_lp.var_upper[idx] != 1.0):
            raise InputError("binary variables must carry bounds [0, 1] in the base program")
        self.binary_vars = binaries

    @property
    def n_vars(self):
        return self.base_lp.n_vars

    @property
    def sense(self):
        return self.base_lp.sense

    def is_integral(self, x, tol=1e-6):
        values = np.asarray(x, dtype=float)[list(self.binary_vars)]
        return bool(np.all(np.abs(values - np.round(values)) <= tol))


@dataclass(eq=False)
class LinearCut:
    '''coeffs @ x (sense) rhs over all variables of the program.'''
    coeffs: np.ndarray
    sense: RowSense
    rhs: float

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float).ravel()
        self.sense = row_sense(self.sense)
        self.rhs = float(self.rhs)

    def violation(self, x):
        lhs = float(self.coeffs @ np.asarray(x, dtype=float))
        if self.sense == RowSense.LE:
            return max(0.0, lhs - self.rhs)
        if self.sense == RowSense.GE:
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


class BranchAndBound():
    INT_TOL = 1e-6
    GAP_TOL = 1e-9

    def __init__(self, program, cuts=()):
        self.program = program
        lp = program.base_lp
        cuts = list(cuts)
        for cut in cuts:
            if cut.coeffs.size != lp.n_vars:
                raise InputError(f"cut has {cut.coeffs.size} coefficients for {lp.n_vars} variables")
        if cuts:
            lp = lp.with_rows(
                np.vstack([cut.coeffs for cut in cuts]),
                [cut.sense for cut in cuts],
                [cut.rhs for cut in cuts],
            )
        self.lp = lp
        self.sign = 1.0 if lp.sense == Sense.MINIMIZE else -1.0
        self.nodes = 0
        self.pivots = 0

    def solve(self):
        binaries = np.asarray(self.program.binary_vars, dtype=int)
        best = np.inf
        incumbent = None
        counter = 0
        heap = [(-np.inf, counter, self.lp.var_lower.copy(), self.lp.var_upper.copy())]

        while heap:
            bound, _, lower, upper = heapq.heappop(heap)
            if bound >= best - self.GAP_TOL * (1.0 + abs(best)):
                break

            sol = solve_lp(self.lp.with_bounds(lower, upper))
            self.nodes += 1
            self.pivots += sol.iterations
            if sol.status == LpStatus.UNBOUNDED:
                raise ModelError("LP relaxation is unbounded, the program has no finite optimum")
            if sol.status == LpStatus.INFEASIBLE:
                continue

            value = self.sign * sol.objective
            if value >= best - self.GAP_TOL * (1.0 + abs(best)):
                continue
            values = sol.primal[binaries]
            frac = np.abs(values - np.round(values))
            if frac.size == 0 or frac.max() <= self.INT_TOL:
                best, incumbent = value, sol
                log.debug(f"branch and bound: incumbent {sol.objective:.10g} at node {self.nodes}")
                continue

            j = binaries[int(np.argmax(frac))]
            for fixed in (0.0, 1.0):
                child_lower, child_upper = lower.copy(), upper.copy()
                child_lower[j] = child_upper[j] = fixed
                counter += 1
                heapq.heappush(heap, (value, counter, child_lower, child_upper))

        if incumbent is None:
            return LpSolution(LpStatus.INFEASIBLE, iterations=self.pivots, nodes=self.nodes)
        return self._rounded(incumbent, binaries)

    def _rounded(self, sol, binaries):
        x = sol.primal.copy()
        x[binaries] = np.round(x[binaries])
        return LpSolution(
            status=LpStatus.OPTIMAL,
            primal=x,
            duals=sol.duals,
            objective=self.lp.evaluate(x),
            basis=sol.basis,
            iterations=self.pivots,
            standard=sol.standard,
            dual_objective=sol.dual_objective,
            nodes=self.nodes,
        )


def solve_bip(p):
    return BranchAndBound(p).solve()


def solve_bip_with_extra_cuts(p, cuts):
    return BranchAndBound(p, cuts).solve()
