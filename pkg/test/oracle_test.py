from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from aosbenders.aos_pipeline import ToleranceSpec, aos_benders
from aosbenders.benders_engine import CutPool, solve_benders
from aosbenders.errors import InputError, UnboundedSublevelError
from aosbenders.lp_core import LinearProgram
from aosbenders.models import Arc, InterdictionGraph, build_mxsp
from aosbenders.oracle import (
    OracleMethod, brute_force_binary, brute_force_vertices, counterexample_absQ, ef_oracle_report,
    in_level_bm, in_level_ef, in_level_ev, in_level_pv, in_proj_level_ef, solve_ef_direct,
)
from aosbenders.two_stage import evaluate_Q

from conftest import attack_key, sample_farmer_x


def oracle_keys(report):
    return {attack_key(point.x) for point in report.exact_set}


def test_interdiction_exact_sets(mxsp):
    assert oracle_keys(brute_force_binary(mxsp[1], -6.0)) == {frozenset({'c->d'})}
    assert oracle_keys(brute_force_binary(mxsp[2], -7.0)) == {
        frozenset({'s->c', 'c->d'}), frozenset({'c->d', 'd->t'})}
    assert oracle_keys(brute_force_binary(mxsp[3], -8.0)) == {frozenset({'s->c', 'c->d', 'd->t'})}


def test_interdiction_nothing_below_optimum(mxsp):
    for m, best in [(1, -6.0), (2, -7.0), (3, -8.0)]:
        assert len(brute_force_binary(mxsp[m], best - 0.5)) == 0


def test_oracle_sorted_by_objective(mxsp):
    report = brute_force_binary(mxsp[2], -4.0)
    assert report.method == OracleMethod.BINARY_EXHAUSTIVE
    objectives = [point.objective for point in report.exact_set]
    assert objectives == sorted(objectives)
    assert objectives[0] == pytest.approx(-7.0)


def test_oracle_without_graph_uses_recourse_lp(mxsp):
    p = replace(mxsp[2], graph=None)
    assert oracle_keys(brute_force_binary(p, -7.0)) == oracle_keys(brute_force_binary(mxsp[2], -7.0))


def test_oracle_limits(farmer1):
    with pytest.raises(InputError):
        brute_force_binary(farmer1, 0.0)
    nodes = ['s'] + [f"v{k}" for k in range(21)] + ['t']
    arcs = [Arc('s', v) for v in nodes[1:-1]] + [Arc(v, 't') for v in nodes[1:-1]]
    wide = build_mxsp(InterdictionGraph(nodes, 's', 't', arcs, 1))
    with pytest.raises(InputError):
        brute_force_binary(wide, 0.0)


def test_ef_direct(farmer1, farmer3, mxsp):
    z, solution = solve_ef_direct(farmer1)
    assert z == pytest.approx(-118600.0)
    assert_allclose(solution.x, [120.0, 80.0, 300.0], atol=1e-6)
    assert solve_ef_direct(farmer3).z_star == pytest.approx(-108390.0)
    for m, cost in [(1, 6.0), (2, 7.0), (3, 8.0)]:
        assert -solve_ef_direct(mxsp[m]).z_star == pytest.approx(cost)
    report = ef_oracle_report(farmer3)
    assert report.method == OracleMethod.EF_DIRECT
    assert len(report) == 1


def test_vertex_bruteforce_unit_square():
    report = brute_force_vertices(LinearProgram([1.0, 1.0], var_upper=[1.0, 1.0]))
    assert report.keys() == {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)}
    cut = brute_force_vertices(LinearProgram([1.0, 1.0], var_upper=[1.0, 1.0]), tau=1.0)
    assert cut.keys() == {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)}
    with pytest.raises(InputError):
        brute_force_vertices(LinearProgram(np.ones(7), var_upper=np.ones(7)))


# ----------------------------------------------------------------------
# the Q(x) = |x| instance

def test_counterexample_value_function():
    ce = counterexample_absQ()
    for x in [-2.0, -1.0, 0.0, 0.5, 3.0]:
        assert ce.q(x) == pytest.approx(abs(x))
    assert ce.q_hat(-1.0, (1.0,)) == pytest.approx(-1.0)
    assert ce.q_hat(-1.0, (-1.0, 1.0)) == pytest.approx(1.0)
    assert ce.vertex_subsets() == [(-1.0,), (1.0,), (-1.0, 1.0)]


def test_partial_pool_epigraph_is_larger():
    ce = counterexample_absQ()
    assert ce.in_epi_q_hat(-1.0, 0.0, (1.0,))
    assert not ce.in_epi_q(-1.0, 0.0)


def test_optimal_value_independent_of_pool():
    ce = counterexample_absQ()
    for vertices in ce.vertex_subsets():
        assert ce.q_hat(0.0, vertices) == pytest.approx(0.0)
    assert ce.q(0.0) == 0.0


def test_master_sublevel_can_hold_infeasible_points():
    ce = counterexample_absQ()
    p = ce.problem
    pool = ce.cut_pool((1.0,))
    assert in_level_bm(p, pool, [-1.0], -1.0, -1.0)
    assert not in_level_ev(p, [-1.0], -1.0, -1.0)
    assert not in_level_pv(p, [-1.0], -1.0)
    assert not in_proj_level_ef(p, [-1.0], -1.0)
    # nothing in the extensive form reaches -1, since g + Q >= 0
    for x in np.linspace(-2.0, 2.0, 9):
        assert not in_proj_level_ef(p, [x], -1.0)


def test_full_pool_matches_value_function():
    ce = counterexample_absQ()
    pool = ce.cut_pool(ce.dual_vertices)
    for x in np.linspace(-3.0, 3.0, 13):
        assert pool.value([x]) == pytest.approx(ce.q(x))


def test_counterexample_benders_optimum():
    result = solve_benders(counterexample_absQ().problem)
    assert result.converged
    assert result.z_star == pytest.approx(0.0, abs=1e-9)
    assert_allclose(result.x_star, [0.0], atol=1e-9)


# ----------------------------------------------------------------------
# sublevel set inclusions on the farmer instances

@pytest.mark.parametrize('fixture', ['farmer1', 'farmer3'])
def test_sublevel_inclusions(request, rng, fixture):
    p = request.getfixturevalue(fixture)
    pool = request.getfixturevalue(f"{fixture}_benders").cut_pool
    z = request.getfixturevalue(f"{fixture}_benders").z_star
    levels = [z, z + 0.01 * abs(z), z + 0.5 * abs(z)]
    for x in sample_farmer_x(rng, 60):
        value = evaluate_Q(p, x)
        theta = value.q_value
        ef_recourse = value.per_scenario_primals
        for tau in levels:
            tol = 1e-6 * (1.0 + abs(tau))
            ev = in_level_ev(p, x, theta, tau, tol)
            pv = in_level_pv(p, x, tau, tol)
            # epigraph sublevel sits inside the master sublevel
            if ev:
                assert in_level_bm(p, pool, x, theta, tau, tol)
            # x is in the value-function sublevel exactly when (x, Q(x)) is in the epigraph one
            assert ev == pv
            # projection of the extensive form agrees with the value function
            assert in_proj_level_ef(p, x, tau, tol) == pv
            assert in_level_ef(p, x, ef_recourse, tau, tol) == pv


def test_interdiction_extensive_form_projection(mxsp):
    p = mxsp[2]
    for bits in range(0, 2 ** 11, 7):
        x = np.array([(bits >> j) & 1 for j in range(11)], dtype=float)
        if x.sum() > 2:
            continue
        pv = in_level_pv(p, x, -6.0)
        assert in_proj_level_ef(p, x, -6.0) == pv


def test_aos_on_counterexample_needs_bounded_sublevel():
    with pytest.raises(UnboundedSublevelError):
        aos_benders(counterexample_absQ().problem, tol=ToleranceSpec.absolute(1.0))


def test_empty_pool_master_level(farmer1):
    assert in_level_bm(farmer1, CutPool(), np.zeros(3), -360000.0, -300000.0)
