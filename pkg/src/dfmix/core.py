"""Problem containers and the budgeted evaluation oracle.

A point is a single numpy float64 vector of length ``n``.  Components listed
in the integer part of the partition are stored as reals with zero
fractional part, so one uniform vector type serves both variable kinds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BudgetExhausted, InfeasibleRequest

__all__ = [
    "VariablePartition",
    "Box",
    "MixedVector",
    "ProblemInstance",
    "Evaluation",
    "BudgetedOracle",
    "project_box",
]

_EMPTY = np.empty(0)
_EMPTY.flags.writeable = False


def _frozen_vector(values, n=None, name="vector"):
    v = np.array(values, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if n is not None and v.shape[0] != n:
        raise ValueError(f"{name} has length {v.shape[0]}, expected {n}")
    v.flags.writeable = False
    return v


def _is_integral(values):
    return bool(np.all(values == np.rint(values)))


@dataclass(frozen=True)
class VariablePartition:
    """Split of the variable indices into a continuous part and an integer part.

    The two index tuples must be disjoint and together cover ``0 .. n-1``.
    Either part may be empty, but not both.
    """

    continuous: tuple
    integer: tuple

    def __post_init__(self):
        cont = tuple(int(i) for i in self.continuous)
        intg = tuple(int(i) for i in self.integer)
        object.__setattr__(self, "continuous", cont)
        object.__setattr__(self, "integer", intg)
        n = len(cont) + len(intg)
        if n == 0:
            raise ValueError("partition is empty")
        seen = set(cont) | set(intg)
        if len(seen) != n or min(seen) != 0 or max(seen) != n - 1:
            raise ValueError("continuous and integer indices must partition 0..n-1")

    @property
    def n(self):
        return len(self.continuous) + len(self.integer)

    @property
    def n_continuous(self):
        return len(self.continuous)

    @property
    def n_integer(self):
        return len(self.integer)


@dataclass(frozen=True)
class Box:
    """Finite bound constraints ``lower <= x <= upper`` (componentwise, strict width)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = _frozen_vector(self.lower, name="lower")
        up = _frozen_vector(self.upper, n=lo.shape[0], name="upper")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(up))):
            raise ValueError("bounds must be finite")
        if not np.all(lo < up):
            raise ValueError("lower bound must be strictly below upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def n(self):
        return self.lower.shape[0]

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


def project_box(x, box):
    """Componentwise projection of ``x`` onto the box (returns a new array)."""
    return np.clip(np.asarray(x, dtype=float), box.lower, box.upper)


@dataclass(frozen=True)
class MixedVector:
    """A point paired with its partition; integer components must be integral."""

    values: np.ndarray
    partition: VariablePartition

    def __post_init__(self):
        v = _frozen_vector(self.values, n=self.partition.n, name="values")
        iz = list(self.partition.integer)
        if iz and not _is_integral(v[iz]):
            raise ValueError("integer components must have zero fractional part")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class ProblemInstance:
    """A mixed-integer problem: objective, optional constraints, box, start point.

    ``objective`` maps a point to a scalar; ``constraints`` (present when
    ``n_constraints > 0``) maps a point to a vector of the ``g_i`` whose
    feasible set is ``g_i(x) <= 0``.  Bounds and the start point must be
    integral on the integer components.
    """

    name: str
    partition: VariablePartition
    box: Box
    objective: Callable
    start: np.ndarray
    constraints: Optional[Callable] = None
    n_constraints: int = 0

    def __post_init__(self):
        n = self.partition.n
        if self.box.n != n:
            raise ValueError("box and partition disagree on dimension")
        start = _frozen_vector(self.start, n=n, name="start")
        iz = list(self.partition.integer)
        if iz:
            if not _is_integral(self.box.lower[iz]) or not _is_integral(self.box.upper[iz]):
                raise ValueError("bounds must be integral on integer components")
            if not _is_integral(start[iz]):
                raise ValueError("start must be integral on integer components")
        if not self.box.contains(start):
            raise ValueError("start must lie inside the box")
        if self.n_constraints < 0:
            raise ValueError("n_constraints must be nonnegative")
        if self.n_constraints > 0 and self.constraints is None:
            raise ValueError("constraints callable is required when n_constraints > 0")
        object.__setattr__(self, "start", start)

    @property
    def n(self):
        return self.partition.n

    def start_vector(self):
        """The start point as a validated :class:`MixedVector`."""
        return MixedVector(self.start, self.partition)


@dataclass(frozen=True)
class Evaluation:
    """One forwarded oracle call: the point, its objective and constraint data.

    ``index`` is the 1-based position in the oracle trace.  ``violation`` is
    ``sum_i max(0, g_i)`` and is exactly ``0.0`` for unconstrained problems.
    """

    index: int
    point: np.ndarray
    f: float
    g: np.ndarray
    violation: float


class BudgetedOracle:
    """Caching, budget-enforcing gateway to a problem's objective and constraints.

    Each distinct point (compared by exact bytes) is forwarded to the
    underlying callables at most once.  Repeats are answered from the cache:
    they consume no budget and do not extend the trace.  A fresh evaluation
    beyond ``max_evaluations`` raises :class:`BudgetExhausted`; a point
    outside the box or off the integer lattice raises
    :class:`InfeasibleRequest` before any call is made.
    """

    def __init__(self, problem, max_evaluations):
        if int(max_evaluations) < 1:
            raise ValueError("max_evaluations must be at least 1")
        self.problem = problem
        self.max_evaluations = int(max_evaluations)
        self.trace = []
        self.best_feasible = None
        self.least_violation = float("inf")
        self._cache = {}
        self._lower = problem.box.lower
        self._upper = problem.box.upper
        self._iz = np.asarray(problem.partition.integer, dtype=np.intp)

    @property
    def evaluations_used(self):
        return len(self.trace)

    @property
    def remaining(self):
        return self.max_evaluations - len(self.trace)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        key = x.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if len(self.trace) >= self.max_evaluations:
            raise BudgetExhausted(
                f"budget of {self.max_evaluations} evaluations is exhausted"
            )
        self._require_feasible(x)
        f = float(self.problem.objective(x))
        if self.problem.n_constraints:
            g = np.asarray(self.problem.constraints(x), dtype=float).reshape(-1)
            if g.shape[0] != self.problem.n_constraints:
                raise ValueError(
                    f"constraints returned {g.shape[0]} values, "
                    f"expected {self.problem.n_constraints}"
                )
            g = g.copy()
            g.flags.writeable = False
            violation = float(np.sum(np.maximum(g, 0.0)))
        else:
            g = _EMPTY
            violation = 0.0
        point = x.copy()
        point.flags.writeable = False
        record = Evaluation(len(self.trace) + 1, point, f, g, violation)
        self.trace.append(record)
        self._cache[key] = record
        if violation < self.least_violation:
            self.least_violation = violation
        if violation == 0.0 and (self.best_feasible is None or f < self.best_feasible.f):
            self.best_feasible = record
        return record

    def _require_feasible(self, x):
        if x.shape != self._lower.shape:
            raise InfeasibleRequest(
                f"point has shape {x.shape}, expected {self._lower.shape}"
            )
        if np.any(x < self._lower) or np.any(x > self._upper):
            raise InfeasibleRequest("point lies outside the box")
        xi = x[self._iz]
        if xi.size and not np.all(xi == np.rint(xi)):
            raise InfeasibleRequest("integer components are off the lattice")
