#!/usr/bin/env python3
'''
Bundled applications.

    build_farmer    crop planning with yield scenarios (continuous first stage)
    build_mxsp      max-min shortest path interdiction (binary first stage)
'''
from dataclasses import dataclass, replace

import networkx as nx
import numpy as np

from .errors import InputError
from .lp_core import RowSense, Sense
from .two_stage import CutForm, Domain, Scenario, TwoStageProblem, cut_form as parse_cut_form


@dataclass(eq=False)
class FarmerConfig:
    plant_costs: tuple = (150.0, 230.0, 260.0)
    purchase_prices: tuple = (238.0, 210.0)
    # wheat, corn, beets within quota, beets above quota
    sale_prices: tuple = (170.0, 150.0, 36.0, 10.0)
    feed_requirements: tuple = (200.0, 240.0)
    beet_quota: float = 6000.0
    land: float = 500.0
    mean_yields: tuple = (2.5, 3.0, 20.0)
    # (yield multiplier, probability)
    scenarios: tuple = ((1.0, 1.0),)

    CROPS = ('wheat', 'corn', 'sugar_beets')

    def __post_init__(self):
        self.plant_costs = self._vector('plant_costs', self.plant_costs, 3)
        self.purchase_prices = self._vector('purchase_prices', self.purchase_prices, 2)
        self.sale_prices = self._vector('sale_prices', self.sale_prices, 4)
        self.feed_requirements = self._vector('feed_requirements', self.feed_requirements, 2)
        self.mean_yields = self._vector('mean_yields', self.mean_yields, 3)
        self.beet_quota = float(self.beet_quota)
        self.land = float(self.land)
        if self.beet_quota < 0 or self.land < 0:
            raise InputError("farmer config: land and beet_quota must be nonnegative")
        self.scenarios = tuple((float(mult), float(prob)) for mult, prob in self.scenarios)
        if not self.scenarios:
            raise InputError("farmer config: at least one scenario is required")
        if any(mult < 0 or prob < 0 for mult, prob in self.scenarios):
            raise InputError("farmer config: yield multipliers and probabilities must be nonnegative")
        total = sum(prob for _, prob in self.scenarios)
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"farmer config: scenario probabilities sum to {total!r}, not 1")

    @staticmethod
    def _vector(name, values, size):
        values = tuple(float(v) for v in values)
        if len(values) != size:
            raise InputError(f"farmer config: {name} needs {size} entries, got {len(values)}")
        if any(v < 0 for v in values):
            raise InputError(f"farmer config: {name} must be nonnegative")
        return values

    @classmethod
    def with_scenarios(cls, count):
        if count == 1:
            return cls()
        if count == 3:
            third = 1.0 / 3.0
            return cls(scenarios=((1.0, third), (1.2, third), (0.8, third)))
        raise InputError(f"bundled farmer instances have 1 or 3 scenarios, not {count}")

    def yields(self, multiplier):
        return np.asarray(self.mean_yields) * multiplier


def build_farmer(cfg):
    '''Farmer planting problem, recourse y = (buy wheat, buy corn), w = (sales).

    Per scenario with yields xi:
        xi1 x1 + y1 - w1 >= 200
        xi2 x2 + y2 - w2 >= 240
        xi3 x3 - w3 - w4 >= 0
        w3 <= 6000
    '''
    buy_wheat, buy_corn = cfg.purchase_prices
    q = np.array([buy_wheat, buy_corn] + [-s for s in cfg.sale_prices])
    W = np.array([
        [1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -1.0, -1.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    ])
    h = np.array([cfg.feed_requirements[0], cfg.feed_requirements[1], 0.0, cfg.beet_quota])
    senses = (RowSense.GE, RowSense.GE, RowSense.GE, RowSense.LE)

    scenarios, floor = [], 0.0
    for multiplier, probability in cfg.scenarios:
        xi = cfg.yields(multiplier)
        T = np.zeros((4, 3))
        T[0, 0], T[1, 1], T[2, 2] = xi
        scenarios.append(Scenario(probability, q, W, T, h, senses))
        # no scenario earns more than selling a full field of its best crop
        best = max(cfg.sale_prices[0] * xi[0], cfg.sale_prices[1] * xi[1], cfg.sale_prices[2] * xi[2])
        floor += probability * -cfg.land * best

    return TwoStageProblem(
        g_coeffs=np.asarray(cfg.plant_costs),
        x_matrix=np.ones((1, 3)),
        x_senses=(RowSense.LE,),
        x_rhs=[cfg.land],
        x_domains=(Domain.CONTINUOUS,) * 3,
        scenarios=scenarios,
        cut_form=CutForm.DUAL_STANDARD,
        theta_floor=floor,
        name=f"farmer-{len(scenarios)}",
        var_names=FarmerConfig.CROPS,
    )


@dataclass(frozen=True)
class Arc:
    tail: str
    head: str
    c: float = 1.0
    d: float = 3.0
    r: float = 1.0

    @property
    def label(self):
        return f"{self.tail}->{self.head}"


@dataclass(eq=False)
class InterdictionGraph:
    nodes: tuple
    source: str
    sink: str
    arcs: tuple
    budget: float = 1.0

    def __post_init__(self):
        self.nodes = tuple(str(v) for v in self.nodes)
        self.arcs = tuple(self.arcs)
        self.budget = float(self.budget)
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError("graph: node names must be unique")
        for name in (self.source, self.sink):
            if name not in self.nodes:
                raise InputError(f"graph: terminal {name!r} is not a node")
        if self.source == self.sink:
            raise InputError("graph: source and sink must differ")
        if self.budget < 0:
            raise InputError(f"graph: budget must be nonnegative, got {self.budget}")
        pairs = set()
        for k, arc in enumerate(self.arcs):
            if arc.tail not in self.nodes or arc.head not in self.nodes:
                raise InputError(f"graph: arc {k} ({arc.label}) references an unknown node")
            if (arc.tail, arc.head) in pairs:
                raise InputError(f"graph: arc {arc.label} appears twice")
            pairs.add((arc.tail, arc.head))
            if arc.c < 0:
                raise InputError(f"graph: arc {arc.label} has negative base cost {arc.c}")
            if arc.d < 1:
                raise InputError(f"graph: arc {arc.label} has interdiction increment {arc.d} below 1")
            if arc.r < 1:
                raise InputError(f"graph: arc {arc.label} has interdiction cost {arc.r} below 1")
        if not nx.has_path(self.digraph(), self.source, self.sink):
            raise InputError(f"graph: no path from {self.source} to {self.sink}")

    @property
    def n_arcs(self):
        return len(self.arcs)

    @property
    def arc_labels(self):
        return tuple(arc.label for arc in self.arcs)

    def with_budget(self, budget):
        return replace(self, budget=budget)

    def digraph(self, x=None):
        '''networkx view with edge weight c_k + x_k d_k.'''
        x = np.zeros(self.n_arcs) if x is None else np.asarray(x, dtype=float)
        G = nx.DiGraph()
        G.add_nodes_from(self.nodes)
        for k, arc in enumerate(self.arcs):
            G.add_edge(arc.tail, arc.head, weight=arc.c + x[k] * arc.d, index=k)
        return G

    def shortest_path_length(self, x=None):
        return float(nx.dijkstra_path_length(self.digraph(x), self.source, self.sink, weight='weight'))

    def simple_paths(self):
        return sorted(nx.all_simple_paths(self.digraph(), self.source, self.sink))

    def chokepoints(self):
        paths = self.simple_paths()
        on_all = set(zip(paths[0], paths[0][1:]))
        for path in paths[1:]:
            on_all &= set(zip(path, path[1:]))
        return [arc.label for arc in self.arcs if (arc.tail, arc.head) in on_all]

    def interdicted(self, x):
        return [arc.label for arc, v in zip(self.arcs, x) if v >= 0.5]

    def path_from_flow(self, y):
        '''Node sequence of the s-t path carried by a 0/1 flow.'''
        succ = {arc.tail: arc.head for arc, v in zip(self.arcs, y) if v >= 0.5}
        path = [self.source]
        while path[-1] != self.sink and path[-1] in succ and len(path) <= len(self.nodes):
            path.append(succ[path[-1]])
        return path


def reference_graph(budget=1):
    '''Eight-node instance, c = 1, d = 3, r = 1 on every arc; c->d is on every s-t path.'''
    pairs = [
        ('s', 'a'), ('s', 'b'), ('s', 'c'), ('a', 'c'), ('b', 'c'), ('c', 'd'),
        ('d', 'e'), ('d', 'f'), ('d', 't'), ('e', 't'), ('f', 't'),
    ]
    return InterdictionGraph(
        nodes=('s', 'a', 'b', 'c', 'd', 'e', 'f', 't'),
        source='s',
        sink='t',
        arcs=tuple(Arc(tail, head) for tail, head in pairs),
        budget=budget,
    )


def build_mxsp(graph, cut_form=CutForm.PRIMAL_PATH):
    '''Shortest path interdiction in min form: min_x Q(x), Q(x) = -shortest path.

    The recourse is the unit s-t flow maximizing -(c + D x)'y. With
    dual_standard cuts the scenario is replaced by its dual, the node
    potential program.
    '''
    cut_form = parse_cut_form(cut_form)
    n = graph.n_arcs
    index = {v: i for i, v in enumerate(graph.nodes)}
    W = np.zeros((len(graph.nodes), n))
    for k, arc in enumerate(graph.arcs):
        W[index[arc.tail], k] = 1.0
        W[index[arc.head], k] = -1.0
    h = np.zeros(len(graph.nodes))
    h[index[graph.source]] = 1.0
    h[index[graph.sink]] = -1.0
    c = np.array([arc.c for arc in graph.arcs])
    d = np.array([arc.d for arc in graph.arcs])

    scenario = Scenario(
        probability=1.0,
        q=-c,
        W=W,
        T=np.zeros((len(graph.nodes), n)),
        h=h,
        senses=(RowSense.EQ,) * len(graph.nodes),
        cost_x=-np.diag(d),
        recourse_sense=Sense.MAXIMIZE,
    )
    if cut_form == CutForm.DUAL_STANDARD:
        scenario = scenario.dualized()

    return TwoStageProblem(
        g_coeffs=np.zeros(n),
        x_matrix=np.array([[arc.r for arc in graph.arcs]]),
        x_senses=(RowSense.LE,),
        x_rhs=[graph.budget],
        x_domains=(Domain.BINARY,) * n,
        scenarios=[scenario],
        cut_form=cut_form,
        theta_floor=-graph.shortest_path_length(np.ones(n)),
        name=f"mxsp-m{graph.budget:g}",
        var_names=graph.arc_labels,
        graph=graph,
    )


def max_min_cost(value):
    '''Interdiction objectives are minimized as -cost, reports show the cost.'''
    return -value
