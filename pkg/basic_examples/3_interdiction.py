#!/usr/bin/env python3
''' shortest path interdiction on the reference graph

API:
    reference_graph(budget=1)
        eight nodes, eleven arcs, every s-t path runs through c->d

    build_mxsp(graph, cut_form='primal_path')
        attacker picks at most budget arcs, each adds d to the arc cost,
        the defender then takes a shortest path. Minimized as -cost.

        - cut_form  str, "primal_path" (path cuts) or "dual_standard" (node potential duals)

    brute_force_binary(p, tau)
        every attack within tau, recourse by shortest path

more to see: ../aosbenders/models.py, ../aosbenders/oracle.py

'''

from aosbenders import ToleranceSpec, aos_benders, brute_force_binary, build_mxsp, reference_graph

for budget in (1, 2, 3):
    graph = reference_graph(budget)
    p = build_mxsp(graph)
    certified = aos_benders(p, tol=ToleranceSpec.absolute(0.0))
    print(f"budget {budget}: best cost {-certified.benders.z_star:g}")
    for point in certified.accepted:
        print(f"    accepted {graph.interdicted(point.x)}  cost {-point.true_objective:g}")
    for point in certified.rejected:
        print(f"    rejected {graph.interdicted(point.x)}  cost {-point.true_objective:g}")

    oracle = brute_force_binary(p, certified.tau)
    print(f"    exhaustive search: {[graph.interdicted(point.x) for point in oracle.exact_set]}")
