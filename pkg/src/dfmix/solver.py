"""Derivative-free solver for mixed-integer nonsmooth problems.

Each outer iteration explores the continuous coordinates first (per
coordinate, then a dense direction once the coordinate steps have shrunk),
then the integer directions with integer expansion steps.  When every
integer direction fails at tentative step 1 the acceptance threshold ``xi``
decays and the direction set may grow.  Nonlinearly constrained problems are
handled by minimizing an exact penalty of the objective with the same
machinery.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .core import BudgetedOracle, project_box
from .directions import DenseDirectionSequence, DiscreteDirectionSet
from .errors import BudgetExhausted, SetComplete
from .linesearch import (
    LineSearchParams,
    coordinate_search,
    discrete_search,
    projected_continuous_search,
)

__all__ = [
    "SolverConfig",
    "PenaltyConfig",
    "IterationRow",
    "SolveReport",
    "penalty_value",
    "solve_bound_constrained",
    "solve_constrained",
]

TERMINATION_BUDGET = "budget_exhausted"
TERMINATION_TOLERANCES = "tolerances_met"
TERMINATION_STALLED = "stalled"

# floors keep the positivity invariants when a quantity decays indefinitely
_XI_FLOOR = 1e-300
_STEP_FLOOR = 1e-300
_EPSILON_FLOOR = 1e-300
# a step this small cannot change any coordinate of ordinary magnitude; the
# search is skipped so end-game iterations stay evaluation-free
_DEAD_STEP = 1e-280
_STALL_LIMIT = 1200


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs for one solver run.

    ``use_dense=False`` disables the dense continuous directions;
    ``expand_directions=False`` freezes the integer direction set at the
    signed coordinate vectors.  Both off gives a coordinate-only method.
    Setting both ``step_tolerance`` and ``xi_tolerance`` enables an early
    stop once every tentative step and ``xi`` fall below them.
    """

    max_evaluations: int = 5000
    seed: int = 0
    gamma: float = 1e-6
    delta: float = 0.5
    theta: float = 0.5
    xi0: float = 1.0
    dense_trigger: float = 1e-3
    expansion_batch: Optional[int] = None
    use_dense: bool = True
    expand_directions: bool = True
    step_tolerance: Optional[float] = None
    xi_tolerance: Optional[float] = None

    def __post_init__(self):
        if int(self.max_evaluations) < 1:
            raise ValueError("max_evaluations must be at least 1")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        if not self.xi0 > 0:
            raise ValueError("xi0 must be positive")
        if not 0 < self.dense_trigger <= 1:
            raise ValueError("dense_trigger must lie in (0, 1]")
        if self.expansion_batch is not None and int(self.expansion_batch) < 1:
            raise ValueError("expansion_batch must be positive")


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty weight and the optional reduction schedule.

    With ``reduce_factor`` set, ``epsilon`` is multiplied by it whenever an
    iteration ends with no iterate change, ``xi`` at or below
    ``reduce_xi_threshold``, and no point of violation at or below
    ``feasibility_tol`` found yet.
    """

    epsilon: float = 0.1
    reduce_factor: Optional[float] = None
    reduce_xi_threshold: float = 1e-6
    feasibility_tol: float = 0.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.reduce_factor is not None and not 0 < self.reduce_factor < 1:
            raise ValueError("reduce_factor must lie in (0, 1)")
        if self.feasibility_tol < 0:
            raise ValueError("feasibility_tol must be nonnegative")


@dataclass(frozen=True)
class IterationRow:
    """Per-iteration summary: value minimized, thresholds, set size, budget used."""

    k: int
    f: float
    xi: float
    step_continuous: float
    n_directions: int
    evaluations: int


@dataclass
class SolveReport:
    """Outcome of one solver run.

    ``best_f``/``best_point``/``best_violation`` describe the headline
    result: for constrained runs the best point of violation at or below the
    feasibility tolerance when one exists, otherwise the best point of the
    penalized value; for bound-constrained runs simply the best objective
    seen.  ``rows[k].f`` is the value the solver minimizes (objective, or
    penalty for constrained runs), nonincreasing in ``k``.
    """

    problem: str
    best_point: np.ndarray
    best_f: float
    best_violation: float
    evaluations_used: int
    iterations: int
    termination: str
    xi_final: float
    step_continuous_final: float
    rows: list
    config: SolverConfig
    epsilon_final: Optional[float] = None
    best_penalty_point: Optional[np.ndarray] = None
    best_penalty_value: Optional[float] = None
    trace: list = field(default_factory=list, repr=False)

    def to_dict(self):
        d = {
            "problem": self.problem,
            "best_point": [float(v) for v in self.best_point],
            "best_f": self.best_f,
            "best_violation": self.best_violation,
            "evaluations_used": self.evaluations_used,
            "iterations": self.iterations,
            "termination": self.termination,
            "xi_final": self.xi_final,
            "step_continuous_final": self.step_continuous_final,
            "config": asdict(self.config),
            "rows": [asdict(r) for r in self.rows],
        }
        if self.epsilon_final is not None:
            d["epsilon_final"] = self.epsilon_final
            d["best_penalty_point"] = [float(v) for v in self.best_penalty_point]
            d["best_penalty_value"] = self.best_penalty_value
        return d

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")


def penalty_value(f, g, epsilon):
    """Exact penalty ``f + sum_i max(0, g_i) / epsilon``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return float(f) + float(np.sum(np.maximum(np.asarray(g, dtype=float), 0.0))) / epsilon


def solve_bound_constrained(problem, config=None):
    """Minimize a bound-constrained problem; returns a :class:`SolveReport`."""
    if problem.n_constraints:
        raise ValueError("problem has nonlinear constraints: use solve_constrained")
    return _solve(problem, config or SolverConfig(), None)


def solve_constrained(problem, config=None, penalty=None):
    """Minimize a nonlinearly constrained problem via its exact penalty."""
    if not problem.n_constraints:
        raise ValueError("problem has no nonlinear constraints: use solve_bound_constrained")
    return _solve(problem, config or SolverConfig(), penalty or PenaltyConfig())


def _solve(problem, config, pconfig):
    oracle = BudgetedOracle(problem, config.max_evaluations)
    part = problem.partition
    box = problem.box
    ic = list(part.continuous)
    iz = list(part.integer)
    params = LineSearchParams(config.gamma, config.delta)

    epsilon = None if pconfig is None else float(pconfig.epsilon)

    def value(point):
        ev = oracle.evaluate(point)
        if epsilon is None:
            return ev.f
        return ev.f + ev.violation / epsilon

    x = problem.start.copy()
    dirset = DiscreteDirectionSet(part, box, x, seed=config.seed)
    dense = DenseDirectionSequence(part, seed=config.seed) if (ic and config.use_dense) else None

    coord_step = {i: (box.upper[i] - box.lower[i]) / 2.0 for i in ic}
    coord_sign = {i: 1 for i in ic}
    if ic:
        alpha_dense = float(np.mean([coord_step[i] for i in ic]))
        trigger_level = config.dense_trigger * max(coord_step.values())
    else:
        alpha_dense = 1.0
        trigger_level = 0.0
    xi = float(config.xi0)
    batch = config.expansion_batch if config.expansion_batch is not None else 2 * len(iz)

    rows = []
    k = 0
    stall = 0
    termination = None
    hard_cap = 200 * config.max_evaluations + 100_000

    try:
        fx = value(x)
        rows.append(IterationRow(0, fx, xi, alpha_dense, len(dirset), oracle.evaluations_used))
        while True:
            evals_before = oracle.evaluations_used
            x_before = x
            dirs_before = len(dirset)
            fx_before = fx
            monotone_reset = False

            # continuous phase: coordinates first, dense direction when small
            if ic:
                for i in ic:
                    if coord_step[i] <= _DEAD_STEP:
                        continue
                    alpha, sign, point = coordinate_search(
                        coord_step[i], x, i, value, box, params, prefer=coord_sign[i]
                    )
                    if alpha > 0:
                        x = point
                        fx = value(point)
                        coord_step[i] = alpha
                        coord_sign[i] = sign
                    else:
                        coord_step[i] = max(config.theta * coord_step[i], _STEP_FLOOR)
                if (
                    dense is not None
                    and alpha_dense > _DEAD_STEP
                    and max(coord_step.values()) <= trigger_level
                ):
                    s = dense.take()
                    alpha, signed = projected_continuous_search(
                        alpha_dense, x, s, value, box, params
                    )
                    if alpha > 0:
                        x = project_box(x + alpha * signed, box)
                        fx = value(x)
                        alpha_dense = alpha
                    else:
                        alpha_dense = max(config.theta * alpha_dense, _STEP_FLOOR)

            # integer phase: first success moves, full failure decays xi
            moved = False
            if len(dirset):
                all_unit = all(t == 1 for t in dirset.tentative)
                for j in range(len(dirset)):
                    alpha = discrete_search(
                        dirset.tentative[j], x, dirset.directions[j], xi, value, box
                    )
                    if alpha > 0:
                        x = x + alpha * dirset.directions[j]
                        fx = value(x)
                        dirset.tentative[j] = alpha
                        moved = True
                        break
                    dirset.tentative[j] = max(1, dirset.tentative[j] // 2)
            else:
                all_unit = True
            if not moved and all_unit:
                xi = max(config.theta * xi, _XI_FLOOR)
                if iz and config.expand_directions:
                    try:
                        dirset.expand(x, batch)
                    except SetComplete:
                        pass

            # optional penalty reduction once the run has settled infeasible
            if (
                pconfig is not None
                and pconfig.reduce_factor is not None
                and xi <= pconfig.reduce_xi_threshold
                and np.array_equal(x, x_before)
                and oracle.least_violation > pconfig.feasibility_tol
            ):
                epsilon = max(epsilon * pconfig.reduce_factor, _EPSILON_FLOOR)
                fx = value(x)
                monotone_reset = True

            k += 1
            rows.append(
                IterationRow(k, fx, xi, alpha_dense, len(dirset), oracle.evaluations_used)
            )
            if not monotone_reset and fx > fx_before:
                raise AssertionError(
                    f"monotonicity violated at iteration {k}: {fx} > {fx_before}"
                )

            if config.step_tolerance is not None and config.xi_tolerance is not None:
                steps_ok = (not ic) or (
                    alpha_dense <= config.step_tolerance
                    and max(coord_step.values()) <= config.step_tolerance
                )
                if steps_ok and xi <= config.xi_tolerance:
                    termination = TERMINATION_TOLERANCES
                    break

            # progress means spending evaluations, growing the direction set,
            # or an actual decrease; once thresholds shrink past the floating
            # point resolution of fx the accept tests turn non-strict, so a
            # bare x move can ping-pong across equal-f cached points forever
            if (
                oracle.evaluations_used == evals_before
                and len(dirset) == dirs_before
                and fx >= fx_before
            ):
                stall += 1
            else:
                stall = 0
            if stall >= _STALL_LIMIT or k >= hard_cap:
                termination = TERMINATION_STALLED
                break
    except BudgetExhausted:
        termination = TERMINATION_BUDGET

    return _report(problem, oracle, config, pconfig, epsilon, rows, k, termination,
                   xi, alpha_dense)


def _report(problem, oracle, config, pconfig, epsilon, rows, iterations, termination,
            xi, alpha_dense):
    trace = oracle.trace
    if epsilon is None:
        best = min(trace, key=lambda ev: ev.f)
        return SolveReport(
            problem=problem.name,
            best_point=best.point,
            best_f=best.f,
            best_violation=best.violation,
            evaluations_used=oracle.evaluations_used,
            iterations=iterations,
            termination=termination,
            xi_final=xi,
            step_continuous_final=alpha_dense,
            rows=rows,
            config=config,
            trace=trace,
        )
    penalty_best = min(trace, key=lambda ev: ev.f + ev.violation / epsilon)
    feasible = [ev for ev in trace if ev.violation <= pconfig.feasibility_tol]
    best = min(feasible, key=lambda ev: ev.f) if feasible else penalty_best
    return SolveReport(
        problem=problem.name,
        best_point=best.point,
        best_f=best.f,
        best_violation=best.violation,
        evaluations_used=oracle.evaluations_used,
        iterations=iterations,
        termination=termination,
        xi_final=xi,
        step_continuous_final=alpha_dense,
        rows=rows,
        config=config,
        epsilon_final=epsilon,
        best_penalty_point=penalty_best.point,
        best_penalty_value=penalty_best.f + penalty_best.violation / epsilon,
        trace=trace,
    )
