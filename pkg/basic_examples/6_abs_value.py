#!/usr/bin/env python3
''' Q(x) = |x| and what a partial cut pool lets through

API:
    counterexample_absQ()
        min_x Q(x), x free, with dual vertices -1 and +1
        - return AbsValueCounterexample(problem, dual_interval, dual_vertices)

    AbsValueCounterexample.q_hat(x, vertices)
        cut approximation from a subset of the dual vertices

    in_level_bm(p, pool, x, theta, tau) / in_level_pv(p, x, tau)
        membership in the master and value-function sublevel sets

more to see: ../aosbenders/oracle.py

'''

from aosbenders.oracle import counterexample_absQ, in_level_bm, in_level_pv

ce = counterexample_absQ()
for vertices in ce.vertex_subsets():
    print(f"vertices {vertices}: Q_hat(-1) = {ce.q_hat(-1.0, vertices):g}, Q_hat(0) = {ce.q_hat(0.0, vertices):g}")
print(f"Q(-1) = {ce.q(-1.0):g}")

pool = ce.cut_pool((1.0,))
print(f"(-1, -1) in the master level set at tau -1: {in_level_bm(ce.problem, pool, [-1.0], -1.0, -1.0)}")
print(f"x = -1 in the value function level set at tau -1: {in_level_pv(ce.problem, [-1.0], -1.0)}")
