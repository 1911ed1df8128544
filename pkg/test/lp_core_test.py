import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from aosbenders.errors import InputError, InvalidBasisError
from aosbenders.lp_core import (
    LinearProgram, LpStatus, RevisedSimplex, RowSense, Sense, solve_lp, solve_lp_from, standardize,
)
from aosbenders.models import FarmerConfig, build_farmer, build_mxsp, reference_graph
from aosbenders.oracle import brute_force_vertices


def random_lp(rng, n=None, m=None):
    '''Feasible LP over the box [0, 10]^n with mixed row senses.'''
    n = n or int(rng.integers(2, 6))
    m = m or int(rng.integers(1, 5))
    x0 = rng.uniform(0.0, 10.0, n)
    A = rng.uniform(-5.0, 5.0, (m, n))
    senses, b = [], []
    for a in A:
        kind = rng.choice(3)
        if kind == 0:
            senses.append(RowSense.LE)
            b.append(a @ x0 + rng.uniform(0.0, 3.0))
        elif kind == 1:
            senses.append(RowSense.GE)
            b.append(a @ x0 - rng.uniform(0.0, 3.0))
        else:
            senses.append(RowSense.EQ)
            b.append(a @ x0)
    return LinearProgram(
        objective_coeffs=rng.uniform(-5.0, 5.0, n),
        constraint_matrix=A,
        constraint_senses=senses,
        rhs=b,
        var_upper=np.full(n, 10.0),
        sense=rng.choice([Sense.MINIMIZE, Sense.MAXIMIZE]),
    )


def test_standardize_adds_surplus():
    lp = LinearProgram([1.0], [[1.0]], ['>='], [1.0])
    sf = standardize(lp)
    assert_array_equal(sf.A, [[1.0, -1.0]])
    assert_array_equal(sf.b, [1.0])
    assert_array_equal(sf.c, [1.0, 0.0])


def test_standardize_identity_on_standard_form():
    lp = LinearProgram([1.0, 2.0, 0.0], [[1.0, 1.0, 1.0]], ['='], [4.0])
    sf = standardize(lp)
    assert_array_equal(sf.A, lp.constraint_matrix)
    assert_array_equal(sf.b, lp.rhs)
    assert_array_equal(sf.c, lp.objective_coeffs)
    assert_array_equal(sf.recover([1.0, 2.0, 1.0]), [1.0, 2.0, 1.0])


def test_standardize_farmer_rows():
    sc = build_farmer(FarmerConfig()).scenarios[0]
    sf = standardize(sc.subproblem(np.zeros(3)))
    # six recourse columns, then one slack per row: surplus for '>=', slack for '<='
    assert sf.A.shape == (4, 10)
    assert_array_equal(sf.A[:, 6:], np.diag([-1.0, -1.0, -1.0, 1.0]))


def test_standardize_bounds_and_free_variables():
    lp = LinearProgram([1.0, 1.0, 1.0], var_lower=[2.0, -np.inf, -np.inf], var_upper=[5.0, 3.0, np.inf])
    sf = standardize(lp)
    assert_array_equal(sf.column_var, [0, 1, 2, 2])
    assert_array_equal(sf.column_sign, [1.0, -1.0, 1.0, -1.0])
    assert_array_equal(sf.shift, [2.0, 3.0, 0.0])
    # the finite upper bound of x0 becomes z0 + s = 3
    assert_array_equal(sf.A, [[1.0, 0.0, 0.0, 0.0, 1.0]])
    assert_array_equal(sf.b, [3.0])
    assert_allclose(sf.recover([1.0, 0.5, 0.0, 4.0, 2.0]), [3.0, 2.5, -4.0])


def test_solve_box():
    sol = solve_lp(LinearProgram([1.0], var_upper=[1.0]))
    assert sol.status == LpStatus.OPTIMAL
    assert sol.objective == 0.0


def test_farmer_subproblem_at_zero():
    sc = build_farmer(FarmerConfig()).scenarios[0]
    sol = solve_lp(sc.subproblem(np.zeros(3)))
    assert sol.status == LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(98000.0)
    assert_allclose(sol.primal[:2], [200.0, 240.0])


def test_interdiction_subproblem_at_zero():
    sc = build_mxsp(reference_graph(1)).scenarios[0]
    sol = solve_lp(sc.subproblem(np.zeros(11)))
    assert sol.status == LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(-3.0)


def test_infeasible_and_unbounded():
    infeasible = LinearProgram([1.0], [[1.0], [1.0]], ['<=', '>='], [1.0, 2.0])
    assert solve_lp(infeasible).status == LpStatus.INFEASIBLE
    unbounded = LinearProgram([-1.0, 0.0], [[1.0, -1.0]], ['<='], [1.0])
    assert solve_lp(unbounded).status == LpStatus.UNBOUNDED


def test_maximize_reports_original_sense():
    lp = LinearProgram([1.0, 1.0], [[1.0, 2.0], [3.0, 1.0]], ['<=', '<='], [4.0, 6.0], sense='max')
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(2.8)
    assert sol.dual_objective == pytest.approx(2.8)
    assert_allclose(sol.duals, [0.4, 0.2])


def test_invalid_input_rejected():
    with pytest.raises(InputError):
        LinearProgram([1.0, 1.0], [[1.0]], ['<='], [1.0])
    with pytest.raises(InputError):
        LinearProgram([1.0], var_lower=[2.0], var_upper=[1.0])
    with pytest.raises(InputError):
        LinearProgram([1.0], [[1.0]], ['<>'], [1.0])


def test_warm_start_from_optimal_basis_takes_no_pivots():
    lp = build_farmer(FarmerConfig()).scenarios[0].subproblem([120.0, 80.0, 300.0])
    cold = solve_lp(lp)
    warm = solve_lp_from(lp, cold.basis)
    assert warm.iterations == 0
    assert warm.objective == pytest.approx(cold.objective)


def test_warm_start_after_rhs_change():
    sc = build_farmer(FarmerConfig()).scenarios[0]
    basis = solve_lp(sc.subproblem([120.0, 80.0, 300.0])).basis
    lp = sc.subproblem([0.0, 0.0, 0.0])
    warm = solve_lp_from(lp, basis)
    assert warm.status == LpStatus.OPTIMAL
    assert warm.objective == pytest.approx(solve_lp(lp).objective)
    assert warm.objective == pytest.approx(98000.0)


def test_warm_start_rejects_bad_basis():
    lp = LinearProgram([1.0, 1.0], [[1.0, 1.0]], ['>='], [1.0])
    with pytest.raises(InvalidBasisError):
        solve_lp_from(lp, (0, 1))
    with pytest.raises(InvalidBasisError):
        solve_lp_from(lp, (7,))


def test_strong_duality_on_random_lps(rng):
    solved = 0
    for _ in range(500):
        lp = random_lp(rng)
        sol = solve_lp(lp)
        assert sol.status == LpStatus.OPTIMAL
        assert sol.dual_gap <= 1e-7 * (1.0 + abs(sol.objective))
        assert lp.violation(sol.primal) <= 1e-6 * (1.0 + float(np.max(np.abs(lp.rhs))))
        assert len(sol.basis) == sol.standard.A.shape[0]
        solved += 1
    assert solved == 500


def test_objective_matches_vertex_bruteforce(rng):
    for _ in range(100):
        lp = random_lp(rng, n=int(rng.integers(2, 5)), m=int(rng.integers(1, 4)))
        sol = solve_lp(lp)
        vertices = brute_force_vertices(lp)
        values = [point.objective for point in vertices.exact_set]
        best = min(values) if lp.sense == Sense.MINIMIZE else max(values)
        assert sol.objective == pytest.approx(best, abs=1e-7 * (1.0 + abs(best)))


def test_warm_start_matches_cold_on_random_lps(rng):
    for _ in range(100):
        lp = random_lp(rng)
        basis = solve_lp(lp).basis
        x1 = rng.uniform(0.0, 10.0, lp.n_vars)
        shifted = lp.constraint_matrix @ x1
        rhs = np.where(
            np.array([s == RowSense.EQ for s in lp.constraint_senses]), shifted,
            np.where(np.array([s == RowSense.LE for s in lp.constraint_senses]), shifted + 1.0, shifted - 1.0))
        moved = LinearProgram(lp.objective_coeffs, lp.constraint_matrix, lp.constraint_senses, rhs,
                              lp.var_lower, lp.var_upper, lp.sense)
        cold = solve_lp(moved)
        warm = solve_lp_from(moved, basis)
        assert warm.status == cold.status == LpStatus.OPTIMAL
        assert warm.objective == pytest.approx(cold.objective, abs=1e-7 * (1.0 + abs(cold.objective)))


def test_dual_warm_start_under_lowest_index_rule(rng):
    # integer data gives ties in both the ratio test and the reduced costs
    for _ in range(100):
        n, m = int(rng.integers(2, 6)), int(rng.integers(2, 5))
        A = rng.integers(-3, 4, (m, n)).astype(float)
        senses = [RowSense.LE if s else RowSense.GE for s in rng.integers(0, 2, m)]
        x0 = rng.integers(0, 11, n).astype(float)
        lp = LinearProgram(rng.integers(-2, 3, n).astype(float), A, senses, A @ x0, var_upper=np.full(n, 10.0))
        basis = solve_lp(lp).basis
        x1 = rng.integers(0, 11, n).astype(float)
        moved = LinearProgram(lp.objective_coeffs, A, senses, A @ x1, var_upper=np.full(n, 10.0))

        sf = standardize(moved)
        solver = RevisedSimplex(sf.A, sf.b, sf.c)
        solver.bland = True
        assert solver.solve_from(basis) == LpStatus.OPTIMAL
        best = solve_lp(moved).objective
        assert moved.evaluate(sf.recover(solver.primal_values())) == pytest.approx(best, abs=1e-7 * (1.0 + abs(best)))


def test_deterministic(rng):
    lp = random_lp(rng, n=5, m=4)
    first, second = solve_lp(lp), solve_lp(lp)
    assert_array_equal(first.primal, second.primal)
    assert first.basis == second.basis
