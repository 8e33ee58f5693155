"""
Optimizing an objective that lives in another process
=====================================================

The solver can drive any executable that speaks a one-line-per-message
stdio protocol: it receives "E x_0 x_1 ..." and answers "F f" (plus
"G g_0 g_1 ..." appended when there are constraints).  A small JSON
descriptor tells the solver how to launch the child and what the
variables look like.
"""

import json
import sys
import tempfile
from pathlib import Path

from dfmix import SolverConfig, build_external_problem, solve_bound_constrained

# ---------------------------------------------------------------------------
# 1. The "foreign" objective: here just another Python script, but anything
#    executable works the same way (compiled binaries, R, containers, ...).
# ---------------------------------------------------------------------------
CHILD = '''\
import sys

for line in sys.stdin:
    parts = line.split()
    if not parts or parts[0] != "E":
        continue
    x = [float(v) for v in parts[1:]]
    f = (x[0] - 0.5) ** 2 + abs(x[1] + 1.0) + (x[2] - 4) ** 2
    sys.stdout.write(f"F {f!r}\\n")
    sys.stdout.flush()
'''

workdir = Path(tempfile.mkdtemp())
(workdir / "objective.py").write_text(CHILD)

# ---------------------------------------------------------------------------
# 2. The descriptor: launch command, variable partition, box, start point.
# ---------------------------------------------------------------------------
descriptor = {
    "name": "external-demo",
    "command": [sys.executable, str(workdir / "objective.py")],
    "continuous": [0, 1],
    "integer": [2],
    "lower": [-5.0, -5.0, -10],
    "upper": [5.0, 5.0, 10],
    "start": [0.0, 0.0, 0],
}
(workdir / "problem.json").write_text(json.dumps(descriptor))

# ---------------------------------------------------------------------------
# 3. Build and solve.  The ExternalFunction owns the child process; closing
#    it (the context manager does) terminates the child.
# ---------------------------------------------------------------------------
problem, external = build_external_problem(str(workdir / "problem.json"))
with external:
    report = solve_bound_constrained(problem, SolverConfig(max_evaluations=400, seed=0))

print("best point :", report.best_point)
print("best value :", report.best_f)
assert report.best_f < 1e-6  # minimizer (0.5, -1.0, 4)

# The command line form of the same run:
#   dfmix solve --external problem.json --budget 400
