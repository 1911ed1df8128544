#!/usr/bin/env python3
''' near-optimal planting plans

API:
    ToleranceSpec.parse(text)
        - text  str, "abs:<epsilon>" for tau = z* + epsilon,
                "rel:<alpha>" for tau = z* + alpha |z*|

    aos_benders(p, benders_tol=1e-6, tol=ToleranceSpec.absolute(0.0), iter_limit=100, k_limit=50)
        Benders, then every vertex of the terminal master within tau,
        then certification against the true recourse value

        - k_limit   int, maximum number of master candidates
        - return CertifiedSet(tau, accepted, rejected, master_exhausted, ...)

more to see: ../aosbenders/aos_pipeline.py

'''

from aosbenders import FarmerConfig, ToleranceSpec, aos_benders, build_farmer

p = build_farmer(FarmerConfig.with_scenarios(3))

for tol in ('rel:0.01', 'rel:0.5'):
    certified = aos_benders(p, tol=ToleranceSpec.parse(tol), k_limit=50)
    print(f"{tol}: tau = {certified.tau:.1f}, {len(certified.unique_candidates)} candidates, "
          f"{len(certified.accepted)} accepted, exhausted={certified.master_exhausted}")
    for point in certified.accepted:
        plan = ', '.join(f"{name} {acres:.1f}" for name, acres in zip(p.var_names, point.x))
        print(f"    {point.true_objective:12.2f}  {plan}")
