#!/usr/bin/env python3
import sys

from .lp_core import LinearProgram, LpSolution, LpStatus, RowSense, Sense, solve_lp, solve_lp_from, standardize
from .binary_solver import LinearCut, MixedBinaryProgram, solve_bip, solve_bip_with_extra_cuts
from .two_stage import (
    Cut, CutForm, Domain, Scenario, TwoStageProblem, ValueFunctionResult,
    build_extensive_form, evaluate_Q, first_stage_cost,
)
from .benders_engine import BendersResult, CutPool, add_cut, build_master, solve_benders
from .aos_kernels import CandidateSet, EnumerationRequest, enumerate_binary_solutions, enumerate_linear_solutions
from .aos_pipeline import (
    CertifiedSet, ToleranceSpec, aos_benders, certify, reconstruct_ef, second_stage_alternatives,
)
from .models import Arc, FarmerConfig, InterdictionGraph, build_farmer, build_mxsp, reference_graph
from .oracle import OracleReport, brute_force_binary, counterexample_absQ, solve_ef_direct
from .errors import AosError, InputError, ModelError, NotConvergedError
from .version import __version__


def __main__():
    from .cli import main
    sys.exit(main())
