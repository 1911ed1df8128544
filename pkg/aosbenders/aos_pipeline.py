#!/usr/bin/env python3
'''
AOS-Benders: alternative first-stage solutions from a converged Benders run.

    1. solve_benders to get z* and the terminal cut pool
    2. enumerate the terminal master at level tau (vertices or no-goods)
    3. certify every candidate against the true recourse value

plus second-stage alternatives for a certified x and extensive-form
reconstruction from per-scenario recourse choices.
'''
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import NamedTuple

import numpy as np

from . import log
from .aos_kernels import CandidateSet, EnumerationRequest, round_key, enumerate_binary_solutions, enumerate_linear_solutions
from .benders_engine import BendersResult, build_master, solve_benders
from .errors import InputError, NotConvergedError, PreconditionError, ReconstructionError
from .lp_core import Sense
from .two_stage import evaluate_Q, first_stage_cost
from .workers import thread_map

CERT_TOL = 1e-6
DEDUPE_TOL = 1e-6


def cert_tol(tau):
    return CERT_TOL * (1.0 + abs(tau))


class ToleranceKind(StrEnum):
    ABSOLUTE = 'abs'
    RELATIVE = 'rel'


@dataclass(frozen=True)
class ToleranceSpec:
    kind: ToleranceKind
    value: float

    def __post_init__(self):
        try:
            kind = ToleranceKind(self.kind)
        except ValueError:
            raise InputError(f"unknown tolerance kind {self.kind!r}, expected 'abs' or 'rel'")
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'value', float(self.value))
        if not np.isfinite(self.value) or self.value < 0:
            raise InputError(f"tolerance must be a finite nonnegative number, got {self.value}")

    @classmethod
    def absolute(cls, epsilon=0.0):
        return cls(ToleranceKind.ABSOLUTE, epsilon)

    @classmethod
    def relative(cls, alpha):
        return cls(ToleranceKind.RELATIVE, alpha)

    @classmethod
    def parse(cls, text):
        '''"abs:<epsilon>" or "rel:<alpha>"'''
        kind, sep, value = str(text).partition(':')
        if not sep:
            raise InputError(f"tolerance {text!r} must look like abs:<epsilon> or rel:<alpha>")
        try:
            number = float(value)
        except ValueError:
            raise InputError(f"tolerance value {value!r} is not a number")
        return cls(kind.strip().lower(), number)

    def resolve(self, z_star):
        # relative: z* + alpha |z*|, so the level loosens for negative optima too
        if self.kind == ToleranceKind.ABSOLUTE:
            return z_star + self.value
        return z_star + self.value * abs(z_star)

    def __str__(self):
        return f"{self.kind.value}:{self.value:g}"


class Certification(NamedTuple):
    accepted: bool
    true_objective: float


@dataclass(eq=False)
class CertifiedPoint:
    x: np.ndarray
    true_objective: float
    master_objective: float = None


@dataclass(eq=False)
class CertifiedSet:
    tau: float
    accepted: list
    rejected: list
    master_exhausted: bool
    tolerance: ToleranceSpec = None
    candidates: CandidateSet = None
    # candidates projected onto x and deduplicated, in emission order
    unique_candidates: list = field(default_factory=list)
    benders: BendersResult = None


def certify(p, x, tau):
    x = p.check_first_stage(x)
    true_objective = first_stage_cost(p, x) + evaluate_Q(p, x).q_value
    return Certification(true_objective <= tau + cert_tol(tau), true_objective)


def _unique_first_stage(candidates, p):
    seen, unique = set(), []
    for c in candidates:
        x = np.array(c.x[:p.n1], dtype=float)
        binaries = list(p.binary_indices)
        x[binaries] = np.round(x[binaries])
        key = round_key(x, DEDUPE_TOL)
        if key in seen:
            continue
        seen.add(key)
        unique.append(CertifiedPoint(x, None, c.objective))
    return unique


def aos_benders(p, benders_tol=1e-6, tol=ToleranceSpec.absolute(0.0), iter_limit=100, k_limit=50, on_iteration=None):
    if p.has_binaries and not p.is_binary:
        raise InputError("candidate enumeration supports all-continuous or all-binary first stages, not a mix")

    result = solve_benders(p, benders_tol=benders_tol, iter_limit=iter_limit, on_iteration=on_iteration)
    if not result.converged:
        raise NotConvergedError(
            f"benders did not converge within {result.iterations} iterations "
            f"(last gap {result.trace[-1].gap:.3e})", result)

    tau = tol.resolve(result.z_star)
    request = EnumerationRequest(build_master(p, result.cut_pool), tau, k_limit)
    if p.is_binary:
        candidates = enumerate_binary_solutions(request)
    else:
        candidates = enumerate_linear_solutions(request)

    unique = _unique_first_stage(candidates, p)
    checks = thread_map(lambda point: certify(p, point.x, tau), unique, name='aos-certify')
    accepted, rejected = [], []
    for point, check in zip(unique, checks):
        point.true_objective = check.true_objective
        (accepted if check.accepted else rejected).append(point)

    log.info(f"aos: tau {tau:.10g}, {len(candidates)} candidates, {len(unique)} distinct x, "
             f"{len(accepted)} accepted")
    return CertifiedSet(tau, accepted, rejected, candidates.exhausted, tol, candidates, unique, result)


def second_stage_alternatives(p, x, tau, scenario_index, k_limit=50):
    '''Recourse vertices of one scenario that keep the assembled point within tau.

    Other scenarios are held at their optimal recourse, so scenario w gets
    the budget Q_w(x) + (tau - g(x) - Q(x)) / p_w. Maximize-sense recourse
    is enumerated on its negated objective.
    '''
    x = p.check_first_stage(x)
    if not 0 <= scenario_index < p.n_scenarios:
        raise InputError(f"scenario index {scenario_index} out of range for {p.n_scenarios} scenarios")
    value = evaluate_Q(p, x)
    true_objective = first_stage_cost(p, x) + value.q_value
    if true_objective > tau + cert_tol(tau):
        raise PreconditionError(f"x is not certified at level {tau:.10g} (true objective {true_objective:.10g})")

    sc = p.scenarios[scenario_index]
    if sc.probability <= 0.0:
        raise PreconditionError(f"scenario {scenario_index} has zero probability, its recourse is unconstrained")
    budget = max(tau - true_objective, 0.0) / sc.probability
    q_w = value.per_scenario[scenario_index].value

    lp = sc.subproblem(x)
    if sc.recourse_sense == Sense.MINIMIZE:
        bound = q_w + budget
    else:
        lp = lp.with_objective(-lp.objective_coeffs, sense=Sense.MINIMIZE, const=-lp.objective_const)
        bound = -q_w + budget
    return enumerate_linear_solutions(EnumerationRequest(lp, bound, k_limit))


@dataclass(eq=False)
class EfReconstruction:
    x: np.ndarray
    recourse: list
    objective: float
    tau: float
    residual: float
    recourse_values: list
    gaps: list


def reconstruct_ef(p, x, recourse, tau):
    '''Assemble (x, y_1..y_N) and verify it lies in the EF sublevel set.

    Each scenario contributes Q_w(x) plus the gap of its recourse to the
    recourse optimum, which is q'y for minimize-sense recourse.
    '''
    x = p.check_first_stage(x)
    recourse = [np.asarray(y, dtype=float) for y in recourse]
    if len(recourse) != p.n_scenarios:
        raise InputError(f"{len(recourse)} recourse vectors given for {p.n_scenarios} scenarios")
    value = evaluate_Q(p, x)

    residual, values, gaps = 0.0, [], []
    for k, (sc, y) in enumerate(zip(p.scenarios, recourse)):
        lp = sc.subproblem(x)
        violation = lp.violation(y)
        if violation > 1e-7 * (1.0 + float(np.max(np.abs(lp.rhs), initial=0.0))):
            raise PreconditionError(f"recourse for scenario {k} violates its constraints by {violation:.3e}")
        residual = max(residual, violation)
        f = lp.evaluate(y)
        q_k = value.per_scenario[k].value
        gap = f - q_k if sc.recourse_sense == Sense.MINIMIZE else q_k - f
        values.append(f)
        gaps.append(max(gap, 0.0))

    weights = np.array([sc.probability for sc in p.scenarios])
    q_values = np.array([r.value for r in value.per_scenario])
    objective = first_stage_cost(p, x) + float(weights @ (q_values + np.array(gaps)))
    if objective > tau + cert_tol(tau):
        raise ReconstructionError(f"assembled objective {objective:.10g} exceeds tau {tau:.10g}")
    return EfReconstruction(x, recourse, objective, tau, residual, values, gaps)
