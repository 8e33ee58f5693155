"""Command line front door: solve one problem, run a benchmark, redo profiles.

Exit codes: 0 on success, 2 for configuration errors (bad arguments, unknown
problems, malformed descriptors or CSV files), 3 for external-process
protocol errors.
"""

from __future__ import annotations

import argparse
import sys

from .bench import default_solvers, recompute_profiles, run_benchmark
from .errors import ConfigError, ProtocolError, SchemaError
from .external import build_external_problem
from .problems import build_problem, list_problems
from .solver import PenaltyConfig, SolverConfig, solve_bound_constrained, solve_constrained

__all__ = ["main"]


def _build_parser():
    parser = argparse.ArgumentParser(prog="dfmix", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the solver on one problem")
    target = solve.add_mutually_exclusive_group(required=True)
    target.add_argument("--problem", help="name of a shipped problem (see --list)")
    target.add_argument("--external", help="JSON descriptor of an external problem")
    solve.add_argument("--budget", type=int, default=5000, help="evaluation budget")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--epsilon", type=float, default=0.1,
                       help="penalty weight for constrained problems")
    solve.add_argument("--coordinate-only", action="store_true",
                       help="disable dense directions and direction-set growth")
    solve.add_argument("--out", help="write the JSON run report here")

    lst = sub.add_parser("list", help="list shipped problems")
    lst.add_argument("--kind", choices=["bound", "constrained", "all"], default="all")

    bench = sub.add_parser("bench", help="run the benchmark suite")
    bench.add_argument("--suite", choices=["bound", "constrained", "all"],
                       default="bound")
    bench.add_argument("--budget", type=int, default=1000)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--taus", default="1e-1,1e-3,1e-5",
                       help="comma-separated accuracy levels")
    bench.add_argument("--out", required=True, help="directory for the bundle")

    profiles = sub.add_parser("profiles", help="recompute profiles from saved traces")
    profiles.add_argument("--traces", required=True,
                          help="directory holding traces.csv and manifest.json")
    profiles.add_argument("--out", required=True, help="directory for the curve files")
    return parser


def _cmd_solve(args):
    config = SolverConfig(
        max_evaluations=args.budget,
        seed=args.seed,
        use_dense=not args.coordinate_only,
        expand_directions=not args.coordinate_only,
    )
    external = None
    try:
        if args.external:
            problem, external = build_external_problem(args.external)
        else:
            try:
                problem = build_problem(args.problem)
            except KeyError as exc:
                raise ConfigError(str(exc)) from exc
        if problem.n_constraints:
            report = solve_constrained(problem, config, PenaltyConfig(epsilon=args.epsilon))
        else:
            report = solve_bound_constrained(problem, config)
    finally:
        if external is not None:
            external.close()
    print(f"problem:      {report.problem}")
    print(f"termination:  {report.termination}")
    print(f"evaluations:  {report.evaluations_used}")
    print(f"iterations:   {report.iterations}")
    print(f"best f:       {report.best_f!r}")
    print(f"violation:    {report.best_violation!r}")
    print("best point:   " + " ".join(repr(float(v)) for v in report.best_point))
    if args.out:
        report.save(args.out)
        print(f"report:       {args.out}")
    return 0


def _cmd_list(args):
    for spec in list_problems(args.kind):
        kind = f"family {spec.family}" if spec.constrained else "bound"
        print(f"{spec.name:24s} n={spec.n:3d} nc={spec.n_continuous:3d} "
              f"nz={spec.n_integer:3d} {kind}")
    return 0


def _cmd_bench(args):
    try:
        taus = tuple(float(t) for t in args.taus.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad --taus value: {exc}") from exc
    specs = list_problems(args.suite)
    bundle = run_benchmark(
        specs=specs,
        solvers=default_solvers(),
        budget=args.budget,
        taus=taus,
        seed=args.seed,
        out_dir=args.out,
    )
    print(f"ran {len(bundle.traces)} runs over {len(specs)} problems")
    if bundle.manifest["excluded"]:
        print("excluded from profiles: " + ", ".join(bundle.manifest["excluded"]))
    if bundle.manifest["failed_runs"]:
        print(f"failed runs: {len(bundle.manifest['failed_runs'])} (see manifest)")
    print(f"bundle: {args.out}")
    return 0


def _cmd_profiles(args):
    recompute_profiles(args.traces, args.out)
    print(f"profiles written to {args.out}")
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "list": _cmd_list,
        "bench": _cmd_bench,
        "profiles": _cmd_profiles,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
