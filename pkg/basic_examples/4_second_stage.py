#!/usr/bin/env python3
''' defender routes and extensive-form points for a certified attack

API:
    second_stage_alternatives(p, x, tau, scenario_index, k_limit=50)
        recourse vertices of one scenario that keep the whole solution within tau

        - x               first-stage point, must be certified at tau
        - scenario_index  int
        - return CandidateSet

    reconstruct_ef(p, x, recourse, tau)
        assemble (x, y_1..y_N) and check it against tau
        - recourse  list, one recourse vector per scenario
        - return EfReconstruction(x, recourse, objective, tau, residual, ...)

more to see: ../aosbenders/aos_pipeline.py

'''

from aosbenders import ToleranceSpec, aos_benders, build_mxsp, reconstruct_ef, reference_graph, second_stage_alternatives

graph = reference_graph(3)
p = build_mxsp(graph)
certified = aos_benders(p, tol=ToleranceSpec.absolute(0.0))

for point in certified.accepted:
    print(f"attack {graph.interdicted(point.x)}, cost {-point.true_objective:g}")
    routes = second_stage_alternatives(p, point.x, certified.tau, 0)
    for route in routes:
        y = route.x
        ef = reconstruct_ef(p, point.x, [y], certified.tau)
        print(f"    {'->'.join(graph.path_from_flow(y))}  cost {-ef.objective:g}")
