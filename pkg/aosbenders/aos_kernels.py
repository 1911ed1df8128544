#!/usr/bin/env python3
'''
Alternative-solution generators.

enumerate_linear_solutions walks the vertex graph of the sublevel polytope
{x : constraints, objective <= tau} best first. A sublevel set of a linear
objective is connected on that graph, so starting from an optimal basis
and following every feasible single pivot reaches all of its vertices.

enumerate_binary_solutions re-solves the program with one no-good cut per
emitted binary point until nothing within tau is left.

Both return points in nondecreasing objective order, ties ordered
lexicographically by the solution vector.
'''
import heapq
from dataclasses import dataclass, field

import numpy as np

from . import log
from .binary_solver import LinearCut, MixedBinaryProgram, solve_bip_with_extra_cuts
from .errors import InputError, UnboundedSublevelError
from .lp_core import LinearProgram, LpStatus, RowSense, Sense, solve_lp, standardize


@dataclass(eq=False)
class EnumerationRequest:
    model: object
    tau: float
    k_limit: int = 50
    dedupe_tol: float = 1e-6

    def __post_init__(self):
        self.tau = float(self.tau)
        if not np.isfinite(self.tau):
            raise InputError(f"sublevel bound must be finite, got {self.tau}")
        if int(self.k_limit) < 1:
            raise InputError(f"k_limit must be at least 1, got {self.k_limit}")
        self.k_limit = int(self.k_limit)
        if self.dedupe_tol <= 0:
            raise InputError("dedupe_tol must be positive")


@dataclass(eq=False)
class Candidate:
    x: np.ndarray
    objective: float
    basis: tuple = ()


@dataclass(eq=False)
class CandidateSet:
    points: list
    exhausted: bool
    tau: float = None

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index):
        return self.points[index]

    @property
    def objectives(self):
        return [c.objective for c in self.points]


def round_key(x, tol):
    return tuple((np.round(np.asarray(x, dtype=float) / tol) + 0.0).tolist())


def _tie_tol(value):
    return 1e-9 * (1.0 + abs(value))


class VertexEnumerator():
    PIVOT_TOL = 1e-9
    RAY_TOL = 1e-9

    def __init__(self, lp, tau, k_limit, dedupe_tol=1e-6):
        # the sublevel row is part of the polytope, vertices on it count
        self.lp = lp.with_rows(lp.objective_coeffs[None, :], [RowSense.LE], [tau - lp.objective_const])
        self.tau = tau
        self.k_limit = k_limit
        self.dedupe_tol = dedupe_tol
        self.sf = standardize(self.lp)
        self.m, self.n = self.sf.A.shape
        self.A_full = np.hstack([self.sf.A, np.eye(self.m)])
        self.bases = 0
        self._factors = {}

    def run(self):
        start = solve_lp(self.lp)
        if start.status == LpStatus.INFEASIBLE:
            return CandidateSet([], True, self.tau)
        if start.status == LpStatus.UNBOUNDED:
            raise UnboundedSublevelError("sublevel set is unbounded, its vertices cannot be exhausted")

        heap = []
        root = tuple(sorted(start.basis))
        seen = {root}
        self._push(heap, root)
        emitted, points = set(), []

        while heap:
            level = heap[0][0]
            group = {}
            while heap and heap[0][0] <= level + _tie_tol(level):
                objective, key, basis = heapq.heappop(heap)
                if key not in emitted and key not in group:
                    group[key] = Candidate(self._factors[basis][2], objective, basis)
                for neighbor in self._neighbors(basis):
                    if neighbor not in seen:
                        seen.add(neighbor)
                        self._push(heap, neighbor)
            for key in sorted(group):
                if len(points) == self.k_limit:
                    log.debug(f"vertex enumeration: stopped at k_limit={self.k_limit} after {self.bases} bases")
                    return CandidateSet(points, False, self.tau)
                emitted.add(key)
                points.append(group[key])

        log.debug(f"vertex enumeration: {len(points)} vertices from {self.bases} bases")
        return CandidateSet(points, True, self.tau)

    def _push(self, heap, basis):
        B_inv = np.linalg.inv(self.A_full[:, list(basis)])
        x_B = B_inv @ self.sf.b
        z = np.zeros(self.n + self.m)
        z[list(basis)] = np.maximum(x_B, 0.0)
        x = self.sf.recover(z[:self.n])
        objective = self.lp.evaluate(x)
        self._factors[basis] = (B_inv, np.maximum(x_B, 0.0), x)
        self.bases += 1
        heapq.heappush(heap, (objective, round_key(x, self.dedupe_tol), basis))

    def _neighbors(self, basis):
        B_inv, x_B, _ = self._factors[basis]
        basic = set(basis)
        for q in range(self.n):
            if q in basic:
                continue
            u = B_inv @ self.A_full[:, q]
            rows = np.flatnonzero(u > self.PIVOT_TOL)
            if rows.size == 0:
                self._check_ray(basis, q, u)
                continue
            ratios = x_B[rows] / u[rows]
            best = ratios.min()
            for r in rows[ratios <= best + 1e-9 * (1.0 + best)]:
                neighbor = list(basis)
                neighbor[r] = q
                yield tuple(sorted(neighbor))

    def _check_ray(self, basis, q, u):
        dz = np.zeros(self.n + self.m)
        dz[q] = 1.0
        dz[list(basis)] -= u
        dx = self.sf.direction(dz[:self.n])
        if np.max(np.abs(dx), initial=0.0) > self.RAY_TOL:
            raise UnboundedSublevelError("sublevel set is unbounded, its vertices cannot be exhausted")


def enumerate_linear_solutions(req):
    lp = req.model
    if isinstance(lp, MixedBinaryProgram):
        raise InputError("vertex enumeration needs a linear program, use enumerate_binary_solutions")
    if lp.sense != Sense.MINIMIZE:
        raise InputError("sublevel enumeration expects a minimize-sense program")
    return VertexEnumerator(lp, req.tau, req.k_limit, req.dedupe_tol).run()


def no_good_cut(n_vars, binaries, point):
    '''sum_{x_i=1} (1 - x_i) + sum_{x_i=0} x_i >= 1 over the binaries.'''
    coeffs = np.zeros(n_vars)
    ones = 0
    for i in binaries:
        if round(point[i]) == 1:
            coeffs[i] = -1.0
            ones += 1
        else:
            coeffs[i] = 1.0
    return LinearCut(coeffs, RowSense.GE, 1.0 - ones)


def _order_by_level(points, binaries):
    ordered, level, rank = [], None, -1
    for c in points:
        if level is None or c.objective > level + _tie_tol(level):
            level, rank = c.objective, rank + 1
        ordered.append((rank, tuple(c.x[binaries].tolist()), c))
    ordered.sort(key=lambda item: item[:2])
    return [item[2] for item in ordered]


def enumerate_binary_solutions(req):
    model = req.model
    if not isinstance(model, MixedBinaryProgram):
        raise InputError("no-good enumeration needs a mixed-binary program")
    lp = model.base_lp
    if lp.sense != Sense.MINIMIZE:
        raise InputError("sublevel enumeration expects a minimize-sense program")

    binaries = list(model.binary_vars)
    slack = 1e-7 * (1.0 + abs(req.tau))
    cuts = [LinearCut(lp.objective_coeffs, RowSense.LE, req.tau - lp.objective_const + slack)]
    points = []
    exhausted = False
    while True:
        sol = solve_bip_with_extra_cuts(model, cuts)
        if sol.status != LpStatus.OPTIMAL or sol.objective > req.tau + slack:
            exhausted = True
            break
        if len(points) == req.k_limit:
            break
        points.append(Candidate(sol.primal, sol.objective))
        cuts.append(no_good_cut(lp.n_vars, binaries, sol.primal))

    log.debug(f"no-good enumeration: {len(points)} points, exhausted={exhausted}")
    return CandidateSet(_order_by_level(points, binaries), exhausted, req.tau)
