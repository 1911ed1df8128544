#!/usr/bin/env python3
'''
JSON documents: problem, graph and farmer inputs, and the run report.

The input models validate the raw JSON (pydantic reports the offending
field path) and convert into the solver types, whose own checks cover
dimensions and ranges.
'''
import json
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import InputError
from .models import Arc, FarmerConfig, InterdictionGraph
from .two_stage import Scenario, TwoStageProblem

SIGNIFICANT_DIGITS = 10


class Document(BaseModel):
    model_config = ConfigDict(extra='forbid', populate_by_name=True)


class ObjectiveDoc(Document):
    coeffs: list[float]
    const: float = 0.0


class FirstStageDoc(Document):
    A: list[list[float]] = Field(default_factory=list)
    senses: list[str] = Field(default_factory=list)
    b: list[float] = Field(default_factory=list)
    domains: list[str]


class ScenarioDoc(Document):
    p: float
    q: list[float]
    W: list[list[float]]
    T: list[list[float]]
    h: list[float]
    senses: list[str]
    cost_x: list[list[float]] | None = None
    recourse_sense: str = 'minimize'
    # null entries stand for unbounded
    y_lower: list[float | None] | None = None
    y_upper: list[float | None] | None = None


class ProblemDoc(Document):
    kind: Literal['two_stage'] = 'two_stage'
    name: str = 'two-stage'
    g: ObjectiveDoc
    X: FirstStageDoc
    scenarios: list[ScenarioDoc] = Field(min_length=1)
    cut_form: str = 'dual_standard'
    theta_floor: float | None = None
    var_names: list[str] | None = None


class ArcDoc(Document):
    tail: str = Field(alias='from')
    head: str = Field(alias='to')
    c: float = 1.0
    d: float = 3.0
    r: float = 1.0


class GraphDoc(Document):
    kind: Literal['graph'] = 'graph'
    nodes: list[str]
    s: str
    t: str
    arcs: list[ArcDoc] = Field(min_length=1)
    budget: float = 1.0
    cut_form: str = 'primal_path'


class FarmerScenarioDoc(Document):
    multiplier: float
    p: float


class FarmerDoc(Document):
    kind: Literal['farmer'] = 'farmer'
    plant_costs: list[float] = [150.0, 230.0, 260.0]
    purchase_prices: list[float] = [238.0, 210.0]
    sale_prices: list[float] = [170.0, 150.0, 36.0, 10.0]
    feed_requirements: list[float] = [200.0, 240.0]
    beet_quota: float = 6000.0
    land: float = 500.0
    mean_yields: list[float] = [2.5, 3.0, 20.0]
    scenarios: list[FarmerScenarioDoc] = [FarmerScenarioDoc(multiplier=1.0, p=1.0)]


INPUT_DOCUMENTS = {
    'two_stage': ProblemDoc,
    'graph': GraphDoc,
    'farmer': FarmerDoc,
}


def _bound(values, default):
    if values is None:
        return None
    return np.array([default if v is None else v for v in values], dtype=float)


def _finite_or_none(values, unbounded):
    return [None if v == unbounded else float(v) for v in values]


def format_validation_error(e):
    lines = []
    for err in e.errors():
        path = '.'.join(str(part) for part in err['loc']) or '<root>'
        lines.append(f"{path}: {err['msg']}")
    return '; '.join(lines)


def document_kind(data):
    if not isinstance(data, dict):
        raise InputError("<root>: expected a JSON object")
    if 'kind' in data:
        if data['kind'] not in INPUT_DOCUMENTS:
            raise InputError(f"kind: unknown document kind {data['kind']!r}, expected one of {list(INPUT_DOCUMENTS)}")
        return data['kind']
    if 'arcs' in data:
        return 'graph'
    if 'g' in data or 'scenarios' in data and 'X' in data:
        return 'two_stage'
    if data.keys() & set(FarmerDoc.model_fields):
        return 'farmer'
    raise InputError("<root>: cannot tell a problem, graph or farmer document apart, set 'kind'")


def parse_document(data):
    kind = document_kind(data)
    try:
        return INPUT_DOCUMENTS[kind].model_validate(data)
    except ValidationError as e:
        raise InputError(f"{kind} document: {format_validation_error(e)}")


def load_document(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    return parse_document(data)


def problem_from_document(doc):
    scenarios = []
    for k, sc in enumerate(doc.scenarios):
        try:
            scenarios.append(Scenario(
                probability=sc.p,
                q=sc.q,
                W=sc.W,
                T=sc.T,
                h=sc.h,
                senses=sc.senses,
                cost_x=sc.cost_x,
                recourse_sense=sc.recourse_sense,
                y_lower=_bound(sc.y_lower, -np.inf),
                y_upper=_bound(sc.y_upper, np.inf),
            ))
        except (ValueError, InputError) as e:
            raise InputError(f"scenarios.{k}: {e}")
    try:
        return TwoStageProblem(
            g_coeffs=doc.g.coeffs,
            x_matrix=doc.X.A,
            x_senses=doc.X.senses,
            x_rhs=doc.X.b,
            x_domains=doc.X.domains,
            scenarios=scenarios,
            cut_form=doc.cut_form,
            g_const=doc.g.const,
            theta_floor=doc.theta_floor,
            name=doc.name,
            var_names=doc.var_names,
        )
    except ValueError as e:
        raise InputError(f"X: {e}")


def graph_from_document(doc):
    arcs = tuple(Arc(a.tail, a.head, a.c, a.d, a.r) for a in doc.arcs)
    return InterdictionGraph(doc.nodes, doc.s, doc.t, arcs, doc.budget)


def farmer_from_document(doc):
    return FarmerConfig(
        plant_costs=doc.plant_costs,
        purchase_prices=doc.purchase_prices,
        sale_prices=doc.sale_prices,
        feed_requirements=doc.feed_requirements,
        beet_quota=doc.beet_quota,
        land=doc.land,
        mean_yields=doc.mean_yields,
        scenarios=tuple((s.multiplier, s.p) for s in doc.scenarios),
    )


def problem_to_document(p):
    scenarios = []
    for sc in p.scenarios:
        scenarios.append(ScenarioDoc(
            p=sc.probability,
            q=sc.q.tolist(),
            W=sc.W.tolist(),
            T=sc.T.tolist(),
            h=sc.h.tolist(),
            senses=[s.value for s in sc.senses],
            cost_x=None if sc.cost_x is None else sc.cost_x.tolist(),
            recourse_sense=sc.recourse_sense.value,
            y_lower=None if np.all(sc.y_lower == 0.0) else _finite_or_none(sc.y_lower, -np.inf),
            y_upper=None if np.all(np.isinf(sc.y_upper)) else _finite_or_none(sc.y_upper, np.inf),
        ))
    return ProblemDoc(
        name=p.name,
        g=ObjectiveDoc(coeffs=p.g_coeffs.tolist(), const=p.g_const),
        X=FirstStageDoc(
            A=p.x_matrix.tolist(),
            senses=[s.value for s in p.x_senses],
            b=p.x_rhs.tolist(),
            domains=[d.value for d in p.x_domains],
        ),
        scenarios=scenarios,
        cut_form=p.cut_form.value,
        theta_floor=p.theta_floor,
        var_names=list(p.var_names),
    )


def graph_to_document(graph):
    return GraphDoc(
        nodes=list(graph.nodes),
        s=graph.source,
        t=graph.sink,
        arcs=[ArcDoc(tail=a.tail, head=a.head, c=a.c, d=a.d, r=a.r) for a in graph.arcs],
        budget=graph.budget,
    )


def farmer_to_document(cfg):
    return FarmerDoc(
        plant_costs=list(cfg.plant_costs),
        purchase_prices=list(cfg.purchase_prices),
        sale_prices=list(cfg.sale_prices),
        feed_requirements=list(cfg.feed_requirements),
        beet_quota=cfg.beet_quota,
        land=cfg.land,
        mean_yields=list(cfg.mean_yields),
        scenarios=[FarmerScenarioDoc(multiplier=m, p=p) for m, p in cfg.scenarios],
    )


# ----------------------------------------------------------------------
# run report

class CutEntry(Document):
    alpha: float
    beta: list[float]
    source: str


class IterationEntry(Document):
    iteration: int
    master_objective: float
    theta: float
    q_value: float
    upper_bound: float
    gap: float
    x: list[float]
    cut: CutEntry


class ProblemInfo(Document):
    name: str
    n_first_stage: int
    n_scenarios: int
    cut_form: str
    var_names: list[str]
    # z_star, tau and point objectives are shown times scale (-1 turns min-form
    # interdiction values into costs); the benders block stays in min form
    scale: float = 1.0


class BendersInfo(Document):
    converged: bool
    iterations: int
    cuts: int
    z_star: float
    x_star: list[float]
    best_upper: float
    trace: list[IterationEntry]


class ToleranceInfo(Document):
    spec: str
    tau: float


class PointEntry(Document):
    x: list[float]
    objective: float | None = None
    true_objective: float | None = None
    label: str | None = None


class RecourseEntry(Document):
    y: list[float]
    objective: float
    label: str | None = None


class SecondStageEntry(Document):
    x: list[float]
    scenario: int
    budget: float
    exhausted: bool
    alternatives: list[RecourseEntry]
    label: str | None = None


class EfEntry(Document):
    x: list[float]
    objective: float
    residual: float
    recourse: list[list[float]]
    label: str | None = None


class RunReport(Document):
    version: str
    problem: ProblemInfo
    benders: BendersInfo
    z_star: float
    tolerance: ToleranceInfo
    master_exhausted: bool
    candidates: list[PointEntry]
    accepted: list[PointEntry]
    rejected: list[PointEntry]
    second_stage: list[SecondStageEntry] = Field(default_factory=list)
    extensive_form: list[EfEntry] = Field(default_factory=list)
    timing: dict[str, float] = Field(default_factory=dict)


def significant(value, digits=SIGNIFICANT_DIGITS):
    '''Round floats (also inside lists and dicts) to a fixed number of significant digits.'''
    if isinstance(value, dict):
        return {k: significant(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [significant(v, digits) for v in value]
    if isinstance(value, float):
        if not np.isfinite(value):
            return value
        rounded = float(f"{value:.{digits}g}")
        return 0.0 if rounded == 0.0 else rounded
    return value


def report_json(report, timing=True):
    data = significant(report.model_dump(mode='json'))
    if not timing:
        data.pop('timing', None)
    return json.dumps(data, indent=2)


SCHEMAS = {
    'problem': ProblemDoc,
    'graph': GraphDoc,
    'farmer': FarmerDoc,
    'report': RunReport,
}


def json_schema(name):
    if name not in SCHEMAS:
        raise InputError(f"unknown schema {name!r}, expected one of {list(SCHEMAS)}")
    return SCHEMAS[name].model_json_schema(by_alias=True)
