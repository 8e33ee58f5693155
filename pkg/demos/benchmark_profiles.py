"""
Racing two solver variants and reading the result as profiles
=============================================================

A benchmark run produces one trace per (problem, solver) pair plus data and
performance profiles, persisted as CSV files that external tooling (for
example the SVG plotter in frontend/) can consume directly.
"""

import tempfile
from pathlib import Path

from dfmix import (
    default_solvers,
    list_problems,
    read_curves_csv,
    read_traces_csv,
    run_benchmark,
)

# ---------------------------------------------------------------------------
# 1. Race the default pair -- the full solver against a coordinate-only
#    variant -- on the bound-constrained suite with a small budget.
# ---------------------------------------------------------------------------
out = Path(tempfile.mkdtemp()) / "bench"
bundle = run_benchmark(
    list_problems("bound"),
    solvers=default_solvers(),
    budget=300,
    taus=(1e-1, 1e-3),
    seed=0,
    out_dir=out,
)
print("traces   :", len(bundle.traces))
print("excluded :", bundle.manifest["excluded"])
print("files    :", sorted(p.name for p in out.iterdir()))

# ---------------------------------------------------------------------------
# 2. A data profile answers: after kappa * (n+1) evaluations, what fraction
#    of the problems has each solver pulled within tau of the best f found?
# ---------------------------------------------------------------------------
for curve in bundle.data[1e-1].values():
    tail = float(curve.ordinates[-1])
    print(f"data profile tau=1e-1 solver={curve.solver}: "
          f"final coverage {tail:.3f}")

# ---------------------------------------------------------------------------
# 3. A performance profile compares evaluation counts to the per-problem
#    winner; the curve at ratio 1 is the fraction of outright wins.
# ---------------------------------------------------------------------------
for curve in bundle.performance[1e-1].values():
    print(f"performance profile tau=1e-1 solver={curve.solver}: "
          f"wins {float(curve.ordinates[0]):.3f}")

# ---------------------------------------------------------------------------
# 4. Everything round-trips through CSV bit-for-bit, so analysis can happen
#    in a different process, language, or machine.
# ---------------------------------------------------------------------------
traces = read_traces_csv(out / "traces.csv")
rows = read_curves_csv(out / "curves_performance.csv")
print("\nround trip:", len(traces), "traces,",
      len(rows), "performance curve rows")

# The same artifacts come out of the command line:
#   dfmix bench --suite bound --budget 300 --out DIR
#   dfmix profiles --traces DIR --out DIR2
# and can be rendered to SVG by the frontend package:
#   node frontend/dist/cli.js plot --curves DIR/curves_data.csv \
#        --kind data --out profiles.svg
