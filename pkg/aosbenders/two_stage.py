#!/usr/bin/env python3
'''
Two-stage problems: min g(x) + Q(x) over x in X, where Q is the
probability weighted recourse value of the scenarios.

Two recourse shapes are supported:

    dual_standard   Q_w(x) = min q'y  s.t. W y + T x (senses) h, y >= 0
                    cuts come from the optimal duals of the subproblem.

    primal_path     Q_w(x) = max (q + C x)'y  s.t. W y (senses) h, y >= 0
                    x only moves the objective, so every optimal y gives
                    a cut (q'y) + (C'y)'x directly.
'''
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np

from . import log
from .binary_solver import MixedBinaryProgram
from .errors import InputError, ModelError, PreconditionError, WarmStartError
from .lp_core import LinearProgram, LpStatus, RowSense, Sense, objective_sense, row_sense, solve_lp, solve_lp_from
from .workers import thread_map


class Domain(StrEnum):
    CONTINUOUS = 'continuous'
    BINARY = 'binary'
    FREE = 'free'


class CutForm(StrEnum):
    DUAL_STANDARD = 'dual_standard'
    PRIMAL_PATH = 'primal_path'


def domain(value):
    try:
        return Domain(str(value).strip().lower())
    except ValueError:
        raise InputError(f"unknown variable domain {value!r}, expected one of {[d.value for d in Domain]}")


def cut_form(value):
    try:
        return CutForm(str(value).strip().lower())
    except ValueError:
        raise InputError(f"unknown cut form {value!r}, expected one of {[f.value for f in CutForm]}")


@dataclass(eq=False)
class Cut:
    '''theta >= alpha + beta @ x'''
    alpha: float
    beta: np.ndarray
    source: CutForm = CutForm.DUAL_STANDARD
    generating_x: np.ndarray = None
    # per-scenario dual vertices (dual_standard) or recourse primals (primal_path)
    multipliers: tuple = ()

    def __post_init__(self):
        self.alpha = float(self.alpha)
        self.beta = np.asarray(self.beta, dtype=float).ravel()
        self.source = cut_form(self.source)
        if not np.isfinite(self.alpha) or not np.all(np.isfinite(self.beta)):
            raise ModelError("cut has non-finite coefficients")

    def value(self, x):
        return float(self.alpha + self.beta @ np.asarray(x, dtype=float))

    def key(self, rounding=1e-9):
        # float keys: an int64 cast wraps once |coefficient| / rounding passes 2**63
        coeffs = np.concatenate([[self.alpha], self.beta])
        return tuple((np.round(coeffs / rounding) + 0.0).tolist())


@dataclass(eq=False)
class Scenario:
    probability: float
    q: np.ndarray
    W: np.ndarray
    T: np.ndarray
    h: np.ndarray
    senses: tuple
    cost_x: np.ndarray = None
    recourse_sense: Sense = Sense.MINIMIZE
    y_lower: np.ndarray = None
    y_upper: np.ndarray = None

    def __post_init__(self):
        self.probability = float(self.probability)
        if not 0.0 <= self.probability <= 1.0:
            raise InputError(f"scenario probability {self.probability} is outside [0, 1]")
        self.q = np.asarray(self.q, dtype=float).ravel()
        self.h = np.asarray(self.h, dtype=float).ravel()
        self.senses = tuple(row_sense(s) for s in self.senses)
        n2, rows = self.q.size, self.h.size
        self.W = np.asarray(self.W, dtype=float).reshape(rows, n2)
        T = np.asarray(self.T, dtype=float)
        self.T = T.reshape(rows, -1) if T.size else np.zeros((rows, T.shape[-1] if T.ndim == 2 else 0))
        if len(self.senses) != rows:
            raise InputError(f"scenario has {rows} rows but {len(self.senses)} senses")
        if self.cost_x is not None:
            self.cost_x = np.asarray(self.cost_x, dtype=float).reshape(n2, -1)
        self.recourse_sense = objective_sense(self.recourse_sense)
        self.y_lower = np.zeros(n2) if self.y_lower is None else np.asarray(self.y_lower, dtype=float).ravel()
        self.y_upper = np.full(n2, np.inf) if self.y_upper is None else np.asarray(self.y_upper, dtype=float).ravel()

    @property
    def n_recourse(self):
        return self.q.size

    @property
    def n_rows(self):
        return self.h.size

    def recourse_cost(self, x):
        if self.cost_x is None:
            return self.q.copy()
        return self.q + self.cost_x @ np.asarray(x, dtype=float)

    def subproblem(self, x):
        x = np.asarray(x, dtype=float)
        return LinearProgram(
            objective_coeffs=self.recourse_cost(x),
            constraint_matrix=self.W,
            constraint_senses=self.senses,
            rhs=self.h - self.T @ x,
            var_lower=self.y_lower,
            var_upper=self.y_upper,
            sense=self.recourse_sense,
        )

    def dualized(self):
        '''LP dual of a maximize-sense scenario whose x enters only the cost.

        max (q + C x)'y, W y (senses) h, y >= 0 becomes
        min h'pi, W'pi - C x >= q, with pi >= 0 on '<=' rows, pi <= 0 on
        '>=' rows and pi free on '=' rows. Both have the same value.
        '''
        if self.recourse_sense != Sense.MAXIMIZE or np.any(self.T != 0.0):
            raise InputError("only maximize-sense scenarios with T = 0 can be dualized")
        if np.any(self.y_lower != 0.0) or np.any(np.isfinite(self.y_upper)):
            raise InputError("dualization expects recourse variables bounded only by y >= 0")
        n1 = self.T.shape[1]
        lower = np.array([0.0 if s == RowSense.LE else -np.inf for s in self.senses])
        upper = np.array([0.0 if s == RowSense.GE else np.inf for s in self.senses])
        cost_x = np.zeros((self.n_recourse, n1)) if self.cost_x is None else self.cost_x
        return Scenario(
            probability=self.probability,
            q=self.h,
            W=self.W.T,
            T=-cost_x,
            h=self.q,
            senses=(RowSense.GE,) * self.n_recourse,
            y_lower=lower,
            y_upper=upper,
        )


@dataclass(eq=False)
class TwoStageProblem:
    g_coeffs: np.ndarray
    x_matrix: np.ndarray
    x_senses: tuple
    x_rhs: np.ndarray
    x_domains: tuple
    scenarios: list
    cut_form: CutForm = CutForm.DUAL_STANDARD
    g_const: float = 0.0
    theta_floor: float = None
    name: str = 'two-stage'
    var_names: tuple = None
    # source graph of interdiction models, used by the shortest-path oracle
    graph: object = field(default=None, repr=False)

    FEASIBILITY_TOL = 1e-7
    PROBABILITY_TOL = 1e-12

    def __post_init__(self):
        self.g_coeffs = np.asarray(self.g_coeffs, dtype=float).ravel()
        n1 = self.g_coeffs.size
        self.x_senses = tuple(row_sense(s) for s in self.x_senses)
        self.x_rhs = np.asarray(self.x_rhs, dtype=float).ravel()
        A = np.asarray(self.x_matrix, dtype=float)
        self.x_matrix = A.reshape(len(self.x_senses), n1) if A.size else np.zeros((len(self.x_senses), n1))
        if self.x_rhs.size != len(self.x_senses):
            raise InputError("first-stage rhs and senses differ in length")
        self.x_domains = tuple(domain(d) for d in self.x_domains)
        if len(self.x_domains) != n1:
            raise InputError(f"{len(self.x_domains)} domains given for {n1} first-stage variables")
        self.cut_form = cut_form(self.cut_form)
        self.g_const = float(self.g_const)
        if self.theta_floor is not None:
            self.theta_floor = float(self.theta_floor)
        if self.var_names is None:
            self.var_names = tuple(f"x{j}" for j in range(n1))
        self.var_names = tuple(self.var_names)
        self._validate_scenarios()

    def _validate_scenarios(self):
        if not self.scenarios:
            raise InputError("a two-stage problem needs at least one scenario")
        total = sum(s.probability for s in self.scenarios)
        if abs(total - 1.0) > self.PROBABILITY_TOL:
            raise InputError(f"scenario probabilities sum to {total!r}, not 1")
        n1 = self.n1
        for k, sc in enumerate(self.scenarios):
            if sc.T.shape[1] != n1:
                raise InputError(f"scenario {k}: T has {sc.T.shape[1]} columns, expected {n1}")
            if sc.cost_x is not None and sc.cost_x.shape != (sc.n_recourse, n1):
                raise InputError(f"scenario {k}: cost_x has shape {sc.cost_x.shape}, expected {(sc.n_recourse, n1)}")
            if self.cut_form == CutForm.PRIMAL_PATH:
                if sc.recourse_sense != Sense.MAXIMIZE or np.any(sc.T != 0.0):
                    raise InputError(f"scenario {k}: primal_path cuts need a maximize-sense recourse with T = 0")
            else:
                if sc.recourse_sense != Sense.MINIMIZE or (sc.cost_x is not None and np.any(sc.cost_x != 0.0)):
                    raise InputError(f"scenario {k}: dual_standard cuts need a minimize-sense recourse without cost_x")

    @property
    def n1(self):
        return self.g_coeffs.size

    @property
    def n_scenarios(self):
        return len(self.scenarios)

    @property
    def binary_indices(self):
        return tuple(j for j, d in enumerate(self.x_domains) if d == Domain.BINARY)

    @property
    def is_binary(self):
        return len(self.binary_indices) == self.n1

    @property
    def has_binaries(self):
        return bool(self.binary_indices)

    @property
    def x_constraints(self):
        return self.x_matrix, self.x_senses, self.x_rhs

    def first_stage_bounds(self):
        lower = np.array([-np.inf if d == Domain.FREE else 0.0 for d in self.x_domains])
        upper = np.array([1.0 if d == Domain.BINARY else np.inf for d in self.x_domains])
        return lower, upper

    def first_stage_lp(self):
        lower, upper = self.first_stage_bounds()
        return LinearProgram(
            objective_coeffs=self.g_coeffs,
            constraint_matrix=self.x_matrix,
            constraint_senses=self.x_senses,
            rhs=self.x_rhs,
            var_lower=lower,
            var_upper=upper,
            objective_const=self.g_const,
        )

    def first_stage_violation(self, x):
        x = np.asarray(x, dtype=float)
        worst = self.first_stage_lp().violation(x)
        binaries = list(self.binary_indices)
        if binaries:
            worst = max(worst, float(np.max(np.abs(x[binaries] - np.round(x[binaries])))))
        return worst

    def check_first_stage(self, x):
        x = np.asarray(x, dtype=float)
        if x.size != self.n1:
            raise InputError(f"first-stage point has {x.size} entries, expected {self.n1}")
        scale = 1.0 + float(np.max(np.abs(self.x_rhs), initial=0.0))
        violation = self.first_stage_violation(x)
        if violation > self.FEASIBILITY_TOL * scale:
            raise PreconditionError(f"first-stage point violates X by {violation:.3e}")
        return x

    def min_form_scenarios(self):
        '''Scenarios written as minimize-sense programs with x in the rhs.'''
        if self.cut_form == CutForm.DUAL_STANDARD:
            return list(self.scenarios)
        return [sc.dualized() for sc in self.scenarios]


@dataclass(eq=False)
class ScenarioSolution:
    index: int
    value: float
    primal: np.ndarray
    duals: np.ndarray
    basis: tuple
    alpha: float
    beta: np.ndarray


@dataclass(eq=False)
class ValueFunctionResult:
    q_value: float
    cut: Cut
    per_scenario: list

    @property
    def per_scenario_primals(self):
        return [s.primal for s in self.per_scenario]

    @property
    def bases(self):
        return [s.basis for s in self.per_scenario]


def _solve_scenario(p, k, x, warm_basis):
    sc = p.scenarios[k]
    lp = sc.subproblem(x)
    if warm_basis is None:
        sol = solve_lp(lp)
    else:
        try:
            sol = solve_lp_from(lp, warm_basis)
        except WarmStartError as e:
            log.debug(f"scenario {k}: {e}, solving from scratch")
            sol = solve_lp(lp)

    if sol.status == LpStatus.INFEASIBLE:
        raise ModelError(
            f"scenario {k}: second-stage problem is infeasible at x = {np.array2string(x, precision=6)}; "
            "relatively complete recourse does not hold")
    if sol.status == LpStatus.UNBOUNDED:
        raise ModelError(f"scenario {k}: second-stage problem is unbounded; the finite-solution assumption does not hold")

    if p.cut_form == CutForm.DUAL_STANDARD:
        pi = sol.duals[:sc.n_rows]
        alpha = sol.dual_objective + float(pi @ (sc.T @ x))
        beta = -sc.T.T @ pi
        multiplier = pi
    else:
        y = sol.primal
        alpha = float(sc.q @ y)
        beta = sc.cost_x.T @ y if sc.cost_x is not None else np.zeros(p.n1)
        multiplier = y
    return ScenarioSolution(k, sol.objective, sol.primal, multiplier, sol.basis, alpha, beta)


def evaluate_Q(p, x, warm_bases=None):
    '''Recourse value at x plus the aggregated supporting cut.

    warm_bases, when given, holds one standardized basis per scenario from
    an earlier evaluation of the same problem.
    '''
    x = p.check_first_stage(x)
    warm = list(warm_bases) if warm_bases is not None else [None] * p.n_scenarios
    results = thread_map(lambda k: _solve_scenario(p, k, x, warm[k]), range(p.n_scenarios), name='aos-scenario')

    weights = np.array([sc.probability for sc in p.scenarios])
    q_value = float(weights @ np.array([r.value for r in results]))
    alpha = float(weights @ np.array([r.alpha for r in results]))
    beta = np.sum([w * r.beta for w, r in zip(weights, results)], axis=0)
    cut = Cut(alpha, beta, p.cut_form, x.copy(), tuple(r.duals for r in results))
    return ValueFunctionResult(q_value, cut, results)


def first_stage_cost(p, x):
    x = np.asarray(x, dtype=float).ravel()
    if x.size != p.n1:
        raise InputError(f"first-stage point has {x.size} entries, expected {p.n1}")
    return float(p.g_coeffs @ x + p.g_const)


@dataclass(eq=False)
class ExtensiveForm:
    model: object
    n1: int
    y_slices: list

    @property
    def lp(self):
        return self.model.base_lp if isinstance(self.model, MixedBinaryProgram) else self.model

    def split(self, z):
        z = np.asarray(z, dtype=float)
        return z[:self.n1], [z[s] for s in self.y_slices]


def build_extensive_form(p):
    '''Monolithic min g(x) + sum_w p_w q_w'y_w over all (x, y_1..y_N).'''
    scenarios = p.min_form_scenarios()
    n1 = p.n1
    sizes = [sc.n_recourse for sc in scenarios]
    n = n1 + sum(sizes)

    y_slices, start = [], n1
    for size in sizes:
        y_slices.append(slice(start, start + size))
        start += size

    c = np.zeros(n)
    c[:n1] = p.g_coeffs
    x_lower, x_upper = p.first_stage_bounds()
    lower = np.concatenate([x_lower] + [sc.y_lower for sc in scenarios])
    upper = np.concatenate([x_upper] + [sc.y_upper for sc in scenarios])

    blocks = [np.hstack([p.x_matrix, np.zeros((p.x_matrix.shape[0], n - n1))])]
    senses = list(p.x_senses)
    rhs = [p.x_rhs]
    for sc, ys in zip(scenarios, y_slices):
        c[ys] = sc.probability * sc.q
        block = np.zeros((sc.n_rows, n))
        block[:, :n1] = sc.T
        block[:, ys] = sc.W
        blocks.append(block)
        senses += sc.senses
        rhs.append(sc.h)

    lp = LinearProgram(
        objective_coeffs=c,
        constraint_matrix=np.vstack(blocks),
        constraint_senses=tuple(senses),
        rhs=np.concatenate(rhs),
        var_lower=lower,
        var_upper=upper,
        objective_const=p.g_const,
    )
    model = MixedBinaryProgram(lp, p.binary_indices) if p.has_binaries else lp
    return ExtensiveForm(model, n1, y_slices)
