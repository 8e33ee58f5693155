"""
Nonlinear constraints through an exact penalty
==============================================

Constraints g_i(x) <= 0 are folded into the working objective
P(x) = f(x) + sum_i max(0, g_i(x)) / epsilon, while every report still
records the original f and the constraint violation separately.
"""

import numpy as np

from dfmix import (
    Box,
    PenaltyConfig,
    ProblemInstance,
    SolverConfig,
    VariablePartition,
    build_problem,
    list_problems,
    solve_constrained,
)

# ---------------------------------------------------------------------------
# 1. A one-variable warm-up: minimize x^2 subject to x >= 2 (i.e. 2 - x <= 0).
#    The unconstrained minimizer x = 0 is infeasible; the answer is x = 2.
# ---------------------------------------------------------------------------
toy = ProblemInstance(
    name="toy-halfline",
    partition=VariablePartition(continuous=(0,), integer=()),
    box=Box(lower=np.array([-10.0]), upper=np.array([10.0])),
    objective=lambda x: float(x[0] ** 2),
    constraints=lambda x: np.array([2.0 - x[0]]),
    n_constraints=1,
    start=np.array([-4.0]),
)

report = solve_constrained(toy, SolverConfig(max_evaluations=2000, seed=0),
                           PenaltyConfig(epsilon=0.1))
print("best point      :", report.best_point)
print("best violation  :", report.best_violation)
print("termination     :", report.termination)
assert abs(report.best_point[0] - 2.0) <= 1e-4
assert report.best_violation <= 1e-6

# ---------------------------------------------------------------------------
# 2. The shipped constrained suite crosses each base problem with one of six
#    constraint families; "-g4" selects family 4.
# ---------------------------------------------------------------------------
spec = next(s for s in list_problems("constrained") if s.name == "maxq3-g6")
instance = build_problem(spec)
report = solve_constrained(instance, SolverConfig(max_evaluations=3000, seed=0),
                           PenaltyConfig(epsilon=0.1))
print(f"\n{spec.name}: f={report.best_f:.6f} "
      f"violation={report.best_violation:.2e} "
      f"({report.evaluations_used} evaluations)")

# ---------------------------------------------------------------------------
# 3. Every evaluation the solver ever made is in the trace with its f and
#    violation, so the feasibility history can be studied afterwards.
# ---------------------------------------------------------------------------
feasible = [ev for ev in report.trace if ev.violation <= 1e-8]
print(f"feasible points seen: {len(feasible)} of {len(report.trace)}")
print("best feasible f     :", min(ev.f for ev in feasible))
