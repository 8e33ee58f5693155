"""Benchmark running, trace persistence, and data/performance profiles.

A run trace is the per-evaluation history ``(eval_index, f, violation)`` of
one solver on one problem.  A problem counts as solved at evaluation ``t``
for accuracy ``tau`` once some feasible entry up to ``t`` satisfies::

    f <= f_L + tau * (f_hat0 - f_L)

where ``f_L`` is the best feasible value any solver found and ``f_hat0`` is
the starting value (bound-constrained) or the worst feasible value any
solver found (constrained).  Infeasible entries count as +inf.  Profiles are
computed in exact rational arithmetic.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from fractions import Fraction
from math import ceil, inf
from typing import Optional

import numpy as np

from .errors import SchemaError
from .problems import build_problem, list_problems
from .solver import PenaltyConfig, SolverConfig, solve_bound_constrained, solve_constrained

__all__ = [
    "RunTrace",
    "ProfileCurve",
    "BenchmarkBundle",
    "trace_from_report",
    "solved_at",
    "performance_curves",
    "data_curves",
    "performance_profile",
    "data_profile",
    "run_benchmark",
    "recompute_profiles",
    "write_traces_csv",
    "read_traces_csv",
    "write_curves_csv",
    "read_curves_csv",
    "default_solvers",
]

TRACES_FILE = "traces.csv"
PERFORMANCE_FILE = "curves_performance.csv"
DATA_FILE = "curves_data.csv"
MANIFEST_FILE = "manifest.json"

_TRACES_HEADER = ["problem", "solver", "eval_index", "f", "violation"]
_CURVES_HEADER = ["solver", "tau", "abscissa", "ordinate"]


@dataclass(frozen=True)
class RunTrace:
    """Per-evaluation history of one solver run on one problem."""

    problem: str
    solver: str
    f: np.ndarray
    violation: np.ndarray
    n_vars: Optional[int] = None

    def __len__(self):
        return self.f.shape[0]


@dataclass(frozen=True)
class ProfileCurve:
    """One solver's profile at one accuracy: exact step-function knots."""

    solver: str
    tau: float
    abscissae: tuple
    ordinates: tuple


@dataclass
class BenchmarkBundle:
    """Everything one benchmark run produced."""

    traces: list
    performance: dict
    data: dict
    manifest: dict
    out_dir: Optional[str] = None


def trace_from_report(problem, solver, report, n_vars=None):
    """A :class:`RunTrace` from a solver report's evaluation trace."""
    return RunTrace(
        problem=problem,
        solver=solver,
        f=np.array([ev.f for ev in report.trace]),
        violation=np.array([ev.violation for ev in report.trace]),
        n_vars=n_vars,
    )


def solved_at(trace, f_low, f_hat0, tau):
    """First 1-based evaluation index at which the convergence test holds.

    Returns ``None`` when the run never satisfies it.  Infeasible entries
    (positive violation) never satisfy the test.
    """
    threshold = f_low + tau * (f_hat0 - f_low)
    values = np.where(trace.violation == 0.0, trace.f, inf)
    hits = np.nonzero(values <= threshold)[0]
    if hits.size == 0:
        return None
    return int(hits[0]) + 1


def _convergence_table(traces, tau, constrained):
    """Solve indices ``table[problem][solver]`` plus the usable problem list.

    Problems with no feasible entry in any trace have no target and are
    reported in ``excluded`` instead of the table.
    """
    by_problem = {}
    for tr in traces:
        by_problem.setdefault(tr.problem, []).append(tr)
    table = {}
    excluded = []
    for problem, runs in by_problem.items():
        feasible_vals = [
            np.where(tr.violation == 0.0, tr.f, inf) for tr in runs if len(tr)
        ]
        f_low = min((float(np.min(v)) for v in feasible_vals), default=inf)
        if f_low == inf:
            excluded.append(problem)
            continue
        if constrained:
            finite = [v[np.isfinite(v)] for v in feasible_vals]
            f_hat = max(float(np.max(v)) for v in finite if v.size)
        else:
            starts = [tr.f[0] for tr in runs if len(tr)]
            f_hat = float(max(starts))
        table[problem] = {
            tr.solver: solved_at(tr, f_low, f_hat, tau) if len(tr) else None
            for tr in runs
        }
    return table, excluded


def performance_curves(table, tau, solvers=None):
    """Performance profiles from a table ``table[problem][solver] = t or None``.

    Ratios ``t / min_s t`` are exact fractions; each curve's ordinate at
    abscissa ``a`` is the fraction of problems with ratio at most ``a``.
    At least two solvers are required.
    """
    if solvers is None:
        solvers = sorted({s for row in table.values() for s in row})
    if len(solvers) < 2:
        raise ValueError("performance profiles require at least two solvers")
    n_problems = len(table)
    ratios = {s: [] for s in solvers}
    for row in table.values():
        finite = [t for t in row.values() if t is not None]
        if not finite:
            continue
        best = min(finite)
        for s in solvers:
            t = row.get(s)
            if t is not None:
                ratios[s].append(Fraction(t, best))
    knots = sorted(set(r for rs in ratios.values() for r in rs)) or [Fraction(1)]
    curves = {}
    for s in solvers:
        mine = sorted(ratios[s])
        ordinates = []
        for a in knots:
            count = sum(1 for r in mine if r <= a)
            ordinates.append(Fraction(count, n_problems) if n_problems else Fraction(0))
        curves[s] = ProfileCurve(s, float(tau), tuple(knots), tuple(ordinates))
    return curves


def data_curves(table, dims, budget, tau, solvers=None):
    """Data profiles: fraction of problems solved within ``kappa`` groups of
    ``n_p + 1`` evaluations, for integer ``kappa`` from 0 to
    ``ceil(budget / min_p (n_p + 1))``."""
    if solvers is None:
        solvers = sorted({s for row in table.values() for s in row})
    if not table:
        return {
            s: ProfileCurve(s, float(tau), (Fraction(0),), (Fraction(0),)) for s in solvers
        }
    n_problems = len(table)
    smallest_group = min(dims[p] + 1 for p in table)
    kappa_max = ceil(budget / smallest_group)
    knots = tuple(Fraction(k) for k in range(kappa_max + 1))
    curves = {}
    for s in solvers:
        ordinates = []
        for kappa in range(kappa_max + 1):
            count = 0
            for p, row in table.items():
                t = row.get(s)
                if t is not None and t <= kappa * (dims[p] + 1):
                    count += 1
            ordinates.append(Fraction(count, n_problems))
        curves[s] = ProfileCurve(s, float(tau), knots, tuple(ordinates))
    return curves


def performance_profile(traces, tau, constrained=False):
    """Performance profiles straight from run traces."""
    table, _ = _convergence_table(traces, tau, constrained)
    solvers = sorted({tr.solver for tr in traces})
    return performance_curves(table, tau, solvers)


def data_profile(traces, tau, budget, constrained=False):
    """Data profiles straight from run traces (``n_vars`` must be set)."""
    table, _ = _convergence_table(traces, tau, constrained)
    dims = {}
    for tr in traces:
        if tr.n_vars is None:
            raise ValueError(f"trace for {tr.problem!r} lacks n_vars")
        dims[tr.problem] = tr.n_vars
    solvers = sorted({tr.solver for tr in traces})
    return data_curves(table, dims, budget, tau, solvers)


def default_solvers():
    """The shipped pair of benchmark contenders."""
    return {
        "full": SolverConfig(),
        "coordinate": SolverConfig(use_dense=False, expand_directions=False),
    }


def _run_seed(master, problem, solver):
    digest = hashlib.sha256(f"{master}|{problem}|{solver}".encode()).hexdigest()
    return int(digest[:8], 16)


def run_benchmark(specs=None, solvers=None, budget=1000, taus=(1e-1, 1e-3, 1e-5),
                  seed=0, out_dir=None, penalty=None):
    """Run every solver on every problem and assemble traces and profiles.

    ``specs`` defaults to the shipped bound-constrained suite; ``solvers``
    maps a label to a :class:`SolverConfig` (per-run seeds and the budget are
    filled in from ``seed`` and ``budget``).  A run that raises is recorded
    as an empty trace and flagged in the manifest.  With ``out_dir`` set the
    bundle is persisted as ``traces.csv``, ``curves_performance.csv``,
    ``curves_data.csv`` and ``manifest.json``; rerunning with the same seed
    writes byte-identical CSV files.
    """
    if specs is None:
        specs = list_problems("bound")
    if solvers is None:
        solvers = default_solvers()
    penalty = penalty or PenaltyConfig()
    taus = tuple(float(t) for t in taus)

    traces = []
    failed = []
    dims = {}
    kinds = {}
    for spec in specs:
        instance = build_problem(spec)
        dims[spec.name] = spec.n
        kinds[spec.name] = bool(spec.constrained)
        for name in sorted(solvers):
            config = replace(
                solvers[name],
                seed=_run_seed(seed, spec.name, name),
                max_evaluations=budget,
            )
            try:
                if spec.constrained:
                    report = solve_constrained(instance, config, penalty)
                else:
                    report = solve_bound_constrained(instance, config)
                traces.append(trace_from_report(spec.name, name, report, n_vars=spec.n))
            except Exception as exc:  # crash guard: record and move on
                failed.append({"problem": spec.name, "solver": name, "error": str(exc)})
                traces.append(
                    RunTrace(spec.name, name, np.empty(0), np.empty(0), n_vars=spec.n)
                )

    performance, data, excluded = _profiles_for(traces, taus, budget, dims, kinds, solvers)

    manifest = {
        "seed": int(seed),
        "budget": int(budget),
        "taus": list(taus),
        "solvers": {name: _config_dict(cfg) for name, cfg in sorted(solvers.items())},
        "problems": [
            {"name": spec.name, "n": spec.n, "constrained": bool(spec.constrained)}
            for spec in specs
        ],
        "excluded": sorted(excluded),
        "failed_runs": failed,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    bundle = BenchmarkBundle(traces, performance, data, manifest, out_dir)
    if out_dir is not None:
        _write_bundle(bundle, out_dir)
    return bundle


def _config_dict(config):
    from dataclasses import asdict

    return asdict(config)


def _profiles_for(traces, taus, budget, dims, kinds, solvers):
    """Profiles per tau; constrained and bound problems are profiled apart
    and merged (their convergence targets differ), excluded names collected."""
    performance = {}
    data = {}
    excluded_all = set()
    bound_traces = [tr for tr in traces if not kinds[tr.problem]]
    cons_traces = [tr for tr in traces if kinds[tr.problem]]
    for tau in taus:
        table = {}
        for group, constrained in ((bound_traces, False), (cons_traces, True)):
            if not group:
                continue
            sub, excluded = _convergence_table(group, tau, constrained)
            table.update(sub)
            excluded_all.update(excluded)
        solver_names = sorted(solvers)
        if len(solver_names) >= 2:
            performance[tau] = performance_curves(table, tau, solver_names)
        data[tau] = data_curves(table, dims, budget, tau, solver_names)
    return performance, data, excluded_all


def _write_bundle(bundle, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    write_traces_csv(bundle.traces, os.path.join(out_dir, TRACES_FILE))
    if bundle.performance:
        write_curves_csv(bundle.performance, os.path.join(out_dir, PERFORMANCE_FILE))
    write_curves_csv(bundle.data, os.path.join(out_dir, DATA_FILE))
    with open(os.path.join(out_dir, MANIFEST_FILE), "w") as fh:
        json.dump(bundle.manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def recompute_profiles(traces_dir, out_dir):
    """Rebuild the profile CSV files from a persisted bundle.

    Reads ``traces.csv`` and ``manifest.json`` from ``traces_dir`` and
    writes freshly computed curve files into ``out_dir``; given unchanged
    inputs the output is byte-identical to the original bundle's.
    """
    manifest_path = os.path.join(traces_dir, MANIFEST_FILE)
    try:
        with open(manifest_path) as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read manifest {manifest_path!r}: {exc}") from exc
    traces = read_traces_csv(os.path.join(traces_dir, TRACES_FILE))
    dims = {p["name"]: int(p["n"]) for p in manifest["problems"]}
    kinds = {p["name"]: bool(p["constrained"]) for p in manifest["problems"]}
    solvers = {name: None for name in manifest["solvers"]}
    known = [tr for tr in traces if tr.problem in dims]
    if len(known) != len(traces):
        missing = sorted({tr.problem for tr in traces} - set(dims))
        raise SchemaError(f"traces reference problems absent from manifest: {missing}")
    performance, data, _ = _profiles_for(
        known, tuple(manifest["taus"]), int(manifest["budget"]), dims, kinds, solvers
    )
    os.makedirs(out_dir, exist_ok=True)
    if performance:
        write_curves_csv(performance, os.path.join(out_dir, PERFORMANCE_FILE))
    write_curves_csv(data, os.path.join(out_dir, DATA_FILE))
    return performance, data


def write_traces_csv(traces, path):
    """Persist traces as ``problem,solver,eval_index,f,violation`` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_TRACES_HEADER)
        for tr in traces:
            for i in range(len(tr)):
                writer.writerow(
                    [tr.problem, tr.solver, i + 1, repr(float(tr.f[i])),
                     repr(float(tr.violation[i]))]
                )


def read_traces_csv(path):
    """Read a traces CSV; strict header and consecutive 1-based indices."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise SchemaError(f"cannot open {path!r}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _TRACES_HEADER:
            raise SchemaError(f"bad traces header: {header!r}")
        runs = {}
        order = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 5:
                raise SchemaError(f"line {lineno}: expected 5 fields, got {len(row)}")
            problem, solver, idx_s, f_s, viol_s = row
            try:
                idx = int(idx_s)
                f = float(f_s)
                violation = float(viol_s)
            except ValueError as exc:
                raise SchemaError(f"line {lineno}: non-numeric field: {exc}") from exc
            key = (problem, solver)
            if key not in runs:
                runs[key] = ([], [])
                order.append(key)
            fs, vs = runs[key]
            if idx != len(fs) + 1:
                raise SchemaError(
                    f"line {lineno}: eval_index {idx} breaks the 1-based sequence"
                )
            fs.append(f)
            vs.append(violation)
    return [
        RunTrace(problem, solver, np.array(fs), np.array(vs))
        for (problem, solver), (fs, vs) in ((k, runs[k]) for k in order)
    ]


def write_curves_csv(curves_by_tau, path):
    """Persist profile curves as ``solver,tau,abscissa,ordinate`` rows.

    Order: tau in mapping order, solver ascending, abscissa ascending.
    Values are written in full round-trip precision.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CURVES_HEADER)
        for tau, curves in curves_by_tau.items():
            for solver in sorted(curves):
                curve = curves[solver]
                for a, o in zip(curve.abscissae, curve.ordinates):
                    writer.writerow(
                        [solver, repr(float(tau)), repr(float(a)), repr(float(o))]
                    )


def read_curves_csv(path):
    """Read a curves CSV into ``(solver, tau, abscissa, ordinate)`` tuples."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise SchemaError(f"cannot open {path!r}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _CURVES_HEADER:
            raise SchemaError(f"bad curves header: {header!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise SchemaError(f"line {lineno}: expected 4 fields, got {len(row)}")
            solver, tau_s, a_s, o_s = row
            try:
                rows.append((solver, float(tau_s), float(a_s), float(o_s)))
            except ValueError as exc:
                raise SchemaError(f"line {lineno}: non-numeric field: {exc}") from exc
    return rows
