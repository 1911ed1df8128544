#!/usr/bin/env python3
''' solve the farmer problem with Benders decomposition

API:
    build_farmer(cfg)
        two-stage crop planning problem

        - cfg   FarmerConfig, FarmerConfig.with_scenarios(1) or (3) for the bundled data

    solve_benders(p, benders_tol=1e-6, iter_limit=100, on_iteration=None)
        single-cut Benders loop starting from an empty cut pool

        - p             TwoStageProblem
        - benders_tol   float, stop once theta is within this of Q(x)
        - iter_limit    int, maximum number of master solves
        - on_iteration  callable, called with every IterationRecord
        - return BendersResult(x_star, theta, z_star, cut_pool, iterations, converged, ...)

more to see: ../aosbenders/benders_engine.py

'''

from aosbenders import FarmerConfig, build_farmer, solve_benders


def show(record):
    print(f"{record.iteration:3d}  lower {record.master_objective:12.2f}  "
          f"upper {record.upper_bound:12.2f}  gap {record.gap:.3e}")


for scenarios in (1, 3):
    p = build_farmer(FarmerConfig.with_scenarios(scenarios))
    print(f"farmer, {scenarios} scenario(s)")
    result = solve_benders(p, on_iteration=show)
    print(f"z* = {result.z_star:.2f} at x* = {result.x_star.round(2)}, "
          f"{result.iterations} iterations, {len(result.cut_pool)} cuts\n")
