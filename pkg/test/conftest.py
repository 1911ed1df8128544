import numpy as np
import pytest

from aosbenders.aos_pipeline import ToleranceSpec, aos_benders
from aosbenders.benders_engine import solve_benders
from aosbenders.models import FarmerConfig, build_farmer, build_mxsp, reference_graph
from aosbenders.two_stage import Cut, CutForm

# candidate and iteration counts follow from the terminal cut pool, which
# depends on LP tie-breaking
CUT_POOL_DEPENDENT = pytest.mark.xfail(strict=False, reason="count depends on the terminal cut pool")

ARC_INDEX = {label: k for k, label in enumerate(reference_graph().arc_labels)}


def attack(*labels):
    x = np.zeros(len(ARC_INDEX))
    for label in labels:
        x[ARC_INDEX[label]] = 1.0
    return x


def attack_key(x):
    return frozenset(label for label, k in ARC_INDEX.items() if x[k] >= 0.5)


def path_flow(*nodes):
    y = np.zeros(len(ARC_INDEX))
    for tail, head in zip(nodes, nodes[1:]):
        y[ARC_INDEX[f"{tail}->{head}"]] = 1.0
    return y


def path_cut(*nodes):
    '''min-form primal_path cut of one defender path: theta >= -c'y - (D y)'x.'''
    graph = reference_graph()
    y = path_flow(*nodes)
    c = np.array([arc.c for arc in graph.arcs])
    d = np.array([arc.d for arc in graph.arcs])
    return Cut(-c @ y, -d * y, CutForm.PRIMAL_PATH)


def sample_farmer_x(rng, count, land=500.0):
    '''Points of {x >= 0, x1 + x2 + x3 <= land}, corners included.'''
    points = [np.zeros(3)] + [land * e for e in np.eye(3)]
    while len(points) < count:
        points.append(land * rng.uniform() * rng.dirichlet(np.ones(3)))
    return points


@pytest.fixture(scope='session')
def farmer1():
    return build_farmer(FarmerConfig.with_scenarios(1))


@pytest.fixture(scope='session')
def farmer3():
    return build_farmer(FarmerConfig.with_scenarios(3))


@pytest.fixture(scope='session')
def farmer1_benders(farmer1):
    return solve_benders(farmer1)


@pytest.fixture(scope='session')
def farmer3_benders(farmer3):
    return solve_benders(farmer3)


@pytest.fixture(scope='session')
def mxsp():
    return {m: build_mxsp(reference_graph(m)) for m in (1, 2, 3)}


@pytest.fixture(scope='session')
def mxsp_benders(mxsp):
    return {m: solve_benders(p) for m, p in mxsp.items()}


@pytest.fixture(scope='session')
def farmer1_exact(farmer1):
    return aos_benders(farmer1, tol=ToleranceSpec.absolute(0.0))


@pytest.fixture(scope='session')
def farmer1_rel1(farmer1):
    return aos_benders(farmer1, tol=ToleranceSpec.relative(0.01), k_limit=10)


@pytest.fixture(scope='session')
def farmer3_rel1(farmer3):
    return aos_benders(farmer3, tol=ToleranceSpec.relative(0.01), k_limit=50)


@pytest.fixture(scope='session')
def farmer3_rel50(farmer3):
    return aos_benders(farmer3, tol=ToleranceSpec.relative(0.5), k_limit=50)


@pytest.fixture(scope='session')
def mxsp_exact(mxsp):
    return {m: aos_benders(p, tol=ToleranceSpec.absolute(0.0)) for m, p in mxsp.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

