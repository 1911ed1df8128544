#!/usr/bin/env python3
''' a two-stage problem written by hand

API:
    Scenario(probability, q, W, T, h, senses)
        Q_w(x) = min q'y  s.t.  W y + T x (senses) h,  y >= 0

    TwoStageProblem(g_coeffs, x_matrix, x_senses, x_rhs, x_domains, scenarios, theta_floor=None, ...)
        min g'x + sum_w p_w Q_w(x) over x in X

        - x_domains     list, "continuous", "binary" or "free" per variable
        - theta_floor   float, lower bound on theta for the first master

    The same problem as JSON: aos-benders solve problem.json

more to see: ../aosbenders/two_stage.py, ../schemas/problem.schema.json

'''

from aosbenders import Scenario, ToleranceSpec, TwoStageProblem, aos_benders, solve_ef_direct

# capacity x at cost 1 per unit; demand of 3 or 5 must be met, shortfall bought at 3 per unit
scenarios = [
    Scenario(probability=p, q=[3.0], W=[[1.0]], T=[[1.0]], h=[demand], senses=['>='])
    for demand, p in ((3.0, 0.5), (5.0, 0.5))
]
p = TwoStageProblem(
    g_coeffs=[1.0],
    x_matrix=[[1.0]],
    x_senses=['<='],
    x_rhs=[10.0],
    x_domains=['continuous'],
    scenarios=scenarios,
    theta_floor=0.0,
    var_names=['capacity'],
)

print(f"extensive form: z* = {solve_ef_direct(p).z_star:g}")
certified = aos_benders(p, tol=ToleranceSpec.absolute(0.5))
print(f"z* = {certified.benders.z_star:g}, tau = {certified.tau:g}")
for point in certified.accepted:
    print(f"    capacity {point.x[0]:g}  objective {point.true_objective:g}")
