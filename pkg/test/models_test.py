import numpy as np
import pytest
from numpy.testing import assert_allclose

from aosbenders.benders_engine import solve_benders
from aosbenders.errors import InputError
from aosbenders.models import Arc, FarmerConfig, InterdictionGraph, build_farmer, build_mxsp, max_min_cost, reference_graph
from aosbenders.two_stage import CutForm, Domain, evaluate_Q

from conftest import attack, path_flow


def test_reference_graph():
    graph = reference_graph()
    assert graph.n_arcs == 11
    assert graph.arc_labels[:3] == ('s->a', 's->b', 's->c')
    assert len(graph.simple_paths()) == 9
    assert graph.chokepoints() == ['c->d']
    assert graph.shortest_path_length() == 3.0
    assert graph.shortest_path_length(attack('c->d')) == 6.0


def test_graph_helpers():
    graph = reference_graph()
    assert graph.interdicted(attack('s->c', 'd->t')) == ['s->c', 'd->t']
    assert graph.path_from_flow(path_flow('s', 'b', 'c', 'd', 'f', 't')) == ['s', 'b', 'c', 'd', 'f', 't']
    G = graph.digraph(attack('c->d'))
    assert G['c']['d']['weight'] == 4.0
    assert G['c']['d']['index'] == 5
    assert graph.with_budget(3).budget == 3.0


def test_zero_budget_is_plain_shortest_path():
    result = solve_benders(build_mxsp(reference_graph(0)))
    assert result.converged
    assert max_min_cost(result.z_star) == pytest.approx(3.0)
    assert not result.x_star.any()


def test_interdiction_model_shape():
    p = build_mxsp(reference_graph(2))
    assert p.n1 == 11
    assert p.is_binary
    assert p.cut_form == CutForm.PRIMAL_PATH
    assert p.theta_floor == -12.0
    assert p.var_names == reference_graph().arc_labels
    assert_allclose(p.x_rhs, [2.0])


def test_flow_recourse_is_integral():
    p = build_mxsp(reference_graph(3))
    for labels in [(), ('c->d',), ('s->c', 'd->t'), ('s->a', 'b->c', 'e->t'), ('d->e', 'd->f', 'd->t')]:
        y = evaluate_Q(p, attack(*labels)).per_scenario_primals[0]
        assert_allclose(y, np.round(y), atol=1e-9)
        path = p.graph.path_from_flow(y)
        assert path[0] == 's' and path[-1] == 't'


@pytest.mark.parametrize('kwargs', [
    dict(nodes=('s', 's', 't')),
    dict(source='x'),
    dict(sink='s'),
    dict(budget=-1),
    dict(arcs=(Arc('s', 't'), Arc('s', 'q'))),
    dict(arcs=(Arc('s', 't'), Arc('s', 't'))),
    dict(arcs=(Arc('s', 't', c=-1.0),)),
    dict(arcs=(Arc('s', 't', d=0.5),)),
    dict(arcs=(Arc('s', 't', r=0.0),)),
    dict(arcs=(Arc('t', 's'),)),
])
def test_invalid_graphs(kwargs):
    spec = dict(nodes=('s', 't'), source='s', sink='t', arcs=(Arc('s', 't'),), budget=1)
    spec.update(kwargs)
    with pytest.raises(InputError):
        InterdictionGraph(**spec)


def test_farmer_model(farmer1, farmer3):
    assert farmer1.n1 == 3
    assert farmer1.x_domains == (Domain.CONTINUOUS,) * 3
    assert farmer1.theta_floor == pytest.approx(-360000.0)
    assert farmer3.theta_floor == pytest.approx(-360000.0)
    assert [sc.probability for sc in farmer3.scenarios] == pytest.approx([1 / 3] * 3)
    assert_allclose(farmer3.scenarios[1].T[2, 2], 24.0)
    assert farmer3.var_names == ('wheat', 'corn', 'sugar_beets')


def test_farmer_theta_floor_bounds_recourse(farmer3, rng):
    for _ in range(50):
        x = 500.0 * rng.dirichlet(np.ones(3))
        assert evaluate_Q(farmer3, x).q_value >= farmer3.theta_floor


@pytest.mark.parametrize('kwargs', [
    dict(plant_costs=(150.0, 230.0)),
    dict(sale_prices=(170.0, 150.0, 36.0, -10.0)),
    dict(land=-1.0),
    dict(scenarios=()),
    dict(scenarios=((1.0, 0.5), (1.2, 0.4))),
    dict(scenarios=((-1.0, 1.0),)),
])
def test_invalid_farmer_configs(kwargs):
    with pytest.raises(InputError):
        FarmerConfig(**kwargs)


def test_bundled_farmer_scenarios():
    assert len(FarmerConfig.with_scenarios(3).scenarios) == 3
    with pytest.raises(InputError):
        FarmerConfig.with_scenarios(2)


def test_custom_farmer_quota():
    # without a beet quota every beet is sold at the high price
    p = build_farmer(FarmerConfig(beet_quota=1e6))
    assert evaluate_Q(p, [0.0, 0.0, 100.0]).q_value == pytest.approx(238.0 * 200 + 210.0 * 240 - 36.0 * 2000)


def test_max_min_cost():
    assert max_min_cost(-6.0) == 6.0
