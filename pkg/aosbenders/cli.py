#!/usr/bin/env python3
'''
aos-benders command line.

    aos-benders farmer --scenarios 3 --tol rel:0.01 --k 50
    aos-benders mxsp --budget 2 --tol abs:0 --stage second
    aos-benders solve problem.json --format csv --out certified.csv
    aos-benders export graph --budget 3 --out graph.json
    aos-benders schema report

Reports go to stdout (or --out) only after the whole run succeeded.
Exit codes: 0 success, 2 Benders did not converge, 3 bad input,
4 a modelling assumption does not hold.
'''
import argparse
import csv
import io
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import log
from .aos_pipeline import ToleranceSpec, aos_benders, reconstruct_ef, second_stage_alternatives
from .benders_engine import solve_benders
from .errors import AosError, InputError, NotConvergedError
from .models import FarmerConfig, InterdictionGraph, build_farmer, build_mxsp, reference_graph
from .oracle import counterexample_absQ
from .schemas import (
    SCHEMAS, BendersInfo, CutEntry, EfEntry, IterationEntry, PointEntry, ProblemInfo, RecourseEntry, RunReport,
    SecondStageEntry, ToleranceInfo, farmer_from_document, farmer_to_document, graph_from_document,
    graph_to_document, json_schema, load_document, problem_from_document, problem_to_document, report_json,
    significant,
)
from .two_stage import CutForm, evaluate_Q
from .version import __version__

STAGES = ('benders', 'first', 'second', 'ef')


class ArgumentParser(argparse.ArgumentParser):
    '''Raises InputError instead of exiting, so bad flags map to exit code 3.'''

    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


@dataclass(eq=False)
class Presentation:
    '''How values and points are shown: min-form interdiction values become costs.'''
    scale: float = 1.0
    graph: InterdictionGraph = None
    paths: bool = False

    @classmethod
    def for_problem(cls, p):
        if p.graph is None:
            return cls()
        return cls(scale=-1.0, graph=p.graph, paths=p.cut_form == CutForm.PRIMAL_PATH)

    def value(self, v):
        return None if v is None else float(v) * self.scale

    def attack(self, x):
        if self.graph is None:
            return None
        return '{' + ', '.join(self.graph.interdicted(x)) + '}'

    def route(self, y):
        if not self.paths:
            return None
        return '->'.join(self.graph.path_from_flow(y))


def _floats(x):
    return [float(v) for v in np.asarray(x, dtype=float).ravel()]


def _benders_info(result):
    trace = [
        IterationEntry(
            iteration=r.iteration,
            master_objective=r.master_objective,
            theta=r.theta,
            q_value=r.q_value,
            upper_bound=r.upper_bound,
            gap=r.gap,
            x=_floats(r.x),
            cut=CutEntry(alpha=r.cut.alpha, beta=_floats(r.cut.beta), source=r.cut.source.value),
        )
        for r in result.trace
    ]
    return BendersInfo(
        converged=result.converged,
        iterations=result.iterations,
        cuts=len(result.cut_pool),
        z_star=result.z_star,
        x_star=_floats(result.x_star),
        best_upper=result.best_upper,
        trace=trace,
    )


def _problem_info(p, show):
    return ProblemInfo(
        name=p.name,
        n_first_stage=p.n1,
        n_scenarios=p.n_scenarios,
        cut_form=p.cut_form.value,
        var_names=list(p.var_names),
        scale=show.scale,
    )


def _second_stage(p, x, tau, k_limit, show):
    entries = []
    for k, sc in enumerate(p.scenarios):
        found = second_stage_alternatives(p, x, tau, k, k_limit)
        alternatives = [
            RecourseEntry(y=_floats(c.x), objective=show.value(sc.subproblem(x).evaluate(c.x)), label=show.route(c.x))
            for c in found
        ]
        entries.append(SecondStageEntry(
            x=_floats(x),
            scenario=k,
            budget=found.tau,
            exhausted=found.exhausted,
            alternatives=alternatives,
            label=show.attack(x),
        ))
    return entries


def _extensive_form(p, x, tau, show):
    recourse = evaluate_Q(p, x).per_scenario_primals
    record = reconstruct_ef(p, x, recourse, tau)
    return EfEntry(
        x=_floats(x),
        objective=show.value(record.objective),
        residual=record.residual,
        recourse=[_floats(y) for y in record.recourse],
        label=show.attack(x),
    )


def run_pipeline(p, tol, k_limit=50, stage='first', benders_tol=1e-6, iter_limit=100):
    '''Benders, candidate generation and certification, then the requested second-stage work.'''
    if stage not in STAGES:
        raise InputError(f"unknown stage {stage!r}, expected one of {STAGES}")
    show = Presentation.for_problem(p)
    timing = {}
    start = time.perf_counter()

    if stage == 'benders':
        result = solve_benders(p, benders_tol=benders_tol, iter_limit=iter_limit)
        if not result.converged:
            raise NotConvergedError(f"benders did not converge within {result.iterations} iterations", result)
        timing['benders'] = time.perf_counter() - start
        return RunReport(
            version=__version__,
            problem=_problem_info(p, show),
            benders=_benders_info(result),
            z_star=show.value(result.z_star),
            tolerance=ToleranceInfo(spec=str(tol), tau=show.value(tol.resolve(result.z_star))),
            master_exhausted=False,
            candidates=[],
            accepted=[],
            rejected=[],
            timing=timing,
        )

    certified = aos_benders(p, benders_tol=benders_tol, tol=tol, iter_limit=iter_limit, k_limit=k_limit)
    timing['aos'] = time.perf_counter() - start
    tau = certified.tau

    second, ef = [], []
    if stage == 'second':
        mark = time.perf_counter()
        for point in certified.accepted:
            second += _second_stage(p, point.x, tau, k_limit, show)
        timing['second_stage'] = time.perf_counter() - mark
    elif stage == 'ef':
        mark = time.perf_counter()
        ef = [_extensive_form(p, point.x, tau, show) for point in certified.accepted]
        timing['extensive_form'] = time.perf_counter() - mark
    timing['total'] = time.perf_counter() - start

    def entry(point, certified_point=True):
        return PointEntry(
            x=_floats(point.x),
            objective=show.value(point.master_objective),
            true_objective=show.value(point.true_objective) if certified_point else None,
            label=show.attack(point.x),
        )

    return RunReport(
        version=__version__,
        problem=_problem_info(p, show),
        benders=_benders_info(certified.benders),
        z_star=show.value(certified.benders.z_star),
        tolerance=ToleranceInfo(spec=str(tol), tau=show.value(tau)),
        master_exhausted=certified.master_exhausted,
        candidates=[entry(c, False) for c in certified.unique_candidates],
        accepted=[entry(c) for c in certified.accepted],
        rejected=[entry(c) for c in certified.rejected],
        second_stage=second,
        extensive_form=ef,
        timing=timing,
    )


def cmd_farmer(scenarios=1, tolerance='abs:0', k=50, stage='first', config=None, **options):
    if config is not None:
        cfg = farmer_from_document(load_document(config))
    else:
        cfg = FarmerConfig.with_scenarios(scenarios)
    return run_pipeline(build_farmer(cfg), _tolerance(tolerance), k, stage, **options)


def cmd_mxsp(budget=1, tolerance='abs:0', k=50, stage='first', cut_form='primal_path', graph=None, **options):
    if graph is not None:
        g = graph_from_document(load_document(graph)).with_budget(budget)
    else:
        g = reference_graph(budget)
    return run_pipeline(build_mxsp(g, cut_form), _tolerance(tolerance), k, stage, **options)


def problem_from_file(path):
    doc = load_document(path)
    if doc.kind == 'graph':
        return build_mxsp(graph_from_document(doc), doc.cut_form)
    if doc.kind == 'farmer':
        return build_farmer(farmer_from_document(doc))
    return problem_from_document(doc)


def cmd_solve(problem_file, tolerance='abs:0', k=50, stage='first', **options):
    return run_pipeline(problem_from_file(problem_file), _tolerance(tolerance), k, stage, **options)


def _tolerance(value):
    return value if isinstance(value, ToleranceSpec) else ToleranceSpec.parse(value)


def report_csv(report):
    '''Certified and rejected points, one row each.'''
    names = report.problem.var_names
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['status', 'true_objective', 'master_objective', 'tau', 'label'] + names)
    for status, points in (('accepted', report.accepted), ('rejected', report.rejected)):
        for point in points:
            row = significant([point.true_objective, point.objective, report.tolerance.tau])
            writer.writerow([status] + row + [point.label or ''] + significant(point.x))
    return buffer.getvalue()


def render(report, fmt='json', timing=True):
    if fmt == 'csv':
        return report_csv(report)
    return report_json(report, timing=timing) + '\n'


def emit(text, out=None):
    if out is None:
        print(text, end='')
    else:
        Path(out).write_text(text)
        log.info(f"wrote {out}")


def export_document(what, scenarios=1, budget=1):
    if what == 'farmer':
        return problem_to_document(build_farmer(FarmerConfig.with_scenarios(scenarios))).model_dump(mode='json')
    if what == 'farmer-config':
        return farmer_to_document(FarmerConfig.with_scenarios(scenarios)).model_dump(mode='json')
    if what == 'graph':
        return graph_to_document(reference_graph(budget)).model_dump(mode='json', by_alias=True)
    if what == 'absq':
        return problem_to_document(counterexample_absQ().problem).model_dump(mode='json')
    raise InputError(f"unknown export {what!r}")


def _pipeline_options(args):
    return dict(benders_tol=args.benders_tol, iter_limit=args.iter_limit)


def _run(args, report):
    emit(render(report, args.format, timing=not args.no_timing), args.out)
    return 0


def _farmer(args):
    report = cmd_farmer(args.scenarios, args.tol, args.k, args.stage, args.config, **_pipeline_options(args))
    return _run(args, report)


def _mxsp(args):
    report = cmd_mxsp(args.budget, args.tol, args.k, args.stage, args.cut_form, args.graph, **_pipeline_options(args))
    return _run(args, report)


def _solve(args):
    return _run(args, cmd_solve(args.problem_file, args.tol, args.k, args.stage, **_pipeline_options(args)))


def _export(args):
    emit(json.dumps(export_document(args.what, args.scenarios, args.budget), indent=2) + '\n', args.out)
    return 0


def _schema(args):
    emit(json.dumps(json_schema(args.name), indent=2) + '\n', args.out)
    return 0


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('--tol', default='abs:0', help="sublevel tolerance, abs:<epsilon> or rel:<alpha> (default abs:0)")
    common.add_argument('--k', type=int, default=50, help="candidate limit per enumeration (default 50)")
    common.add_argument('--stage', choices=STAGES, default='first',
                        help="benders: step 1 only; first: certified first-stage set; "
                             "second: plus recourse alternatives; ef: plus reconstructed EF points")
    common.add_argument('--format', choices=('json', 'csv'), default='json')
    common.add_argument('--out', default=None, help="write the report here instead of stdout")
    common.add_argument('--benders-tol', type=float, default=1e-6)
    common.add_argument('--iter-limit', type=int, default=100)
    common.add_argument('--no-timing', action='store_true', help="leave the timing block out of JSON reports")

    verbosity = ArgumentParser(add_help=False)
    group = verbosity.add_mutually_exclusive_group()
    group.add_argument('-v', '--verbose', action='store_true', help="debug output on stderr")
    group.add_argument('-q', '--quiet', action='store_true', help="errors only")

    parser = ArgumentParser(prog='aos-benders', description="Benders decomposition with alternative optimal solutions")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

    farmer = sub.add_parser('farmer', parents=[common, verbosity], help="farmer crop planning instances")
    farmer.add_argument('--scenarios', type=int, choices=(1, 3), default=1)
    farmer.add_argument('--config', default=None, help="farmer config JSON instead of the bundled data")
    farmer.set_defaults(func=_farmer)

    mxsp = sub.add_parser('mxsp', parents=[common, verbosity], help="shortest path interdiction")
    mxsp.add_argument('--budget', type=float, default=1)
    mxsp.add_argument('--cut-form', choices=[f.value for f in CutForm], default=CutForm.PRIMAL_PATH.value)
    mxsp.add_argument('--graph', default=None, help="graph JSON instead of the reference graph")
    mxsp.set_defaults(func=_mxsp)

    solve = sub.add_parser('solve', parents=[common, verbosity], help="problem, graph or farmer JSON file")
    solve.add_argument('problem_file')
    solve.set_defaults(func=_solve)

    export = sub.add_parser('export', parents=[verbosity], help="write a bundled instance as JSON")
    export.add_argument('what', choices=('farmer', 'farmer-config', 'graph', 'absq'))
    export.add_argument('--scenarios', type=int, choices=(1, 3), default=1)
    export.add_argument('--budget', type=float, default=1)
    export.add_argument('--out', default=None)
    export.set_defaults(func=_export)

    schema = sub.add_parser('schema', parents=[verbosity], help="print a JSON schema")
    schema.add_argument('name', choices=list(SCHEMAS))
    schema.add_argument('--out', default=None)
    schema.set_defaults(func=_schema)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            log.set_level('debug')
        elif args.quiet:
            log.set_level('error')
        return args.func(args)
    except NotConvergedError as e:
        log.error(f"aos-benders: {e}")
        if e.result is not None and e.result.trace:
            last = e.result.trace[-1]
            log.error(f"  last iterate: lower {last.master_objective:.10g}, upper {e.result.best_upper:.10g}")
        return e.exit_code
    except AosError as e:
        log.error(f"aos-benders: {e}")
        return e.exit_code
