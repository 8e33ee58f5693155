"""Shipped mixed-integer test problems.

Each problem is stated on decoded variables ``y``; the variables the solver
sees are encoded: continuous components pass through unchanged, integer
components take lattice values ``0..100`` that map affinely onto
``[lower, upper]`` of the decoded coordinate.  Classic nonsmooth objectives
(max of squares, Hilbert-matrix norms, max minus sum) are boxed to width 20
around a reference point; the first ``ceil(n/2)`` variables are continuous
and the rest integer.  Six families of nonlinear constraints can be attached
to any base problem; they are evaluated on the decoded variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import Box, ProblemInstance, VariablePartition

__all__ = [
    "ProblemSpec",
    "list_problems",
    "build_problem",
    "constraint_family",
    "family_length",
    "decode_point",
]

FAMILIES = (1, 2, 3, 4, 5, 6)


@dataclass(frozen=True)
class ProblemSpec:
    """Identifier of a shipped problem: base objective, size, constraint family."""

    name: str
    base: str
    n: int
    family: Optional[int] = None

    @property
    def n_continuous(self):
        return (self.n + 1) // 2

    @property
    def n_integer(self):
        return self.n // 2

    @property
    def constrained(self):
        return self.family is not None


def constraint_family(family, y):
    """Values of constraint family ``family`` (1..6) at the decoded point ``y``."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < 3:
        raise ValueError("constraint families require at least 3 variables")
    if family in (1, 2):
        mid = y[1 : n - 1]
        g = (3.0 - 2.0 * mid) * mid - y[: n - 2] - 2.0 * y[2:] + 1.0
        return g + 2.5 if family == 2 else g
    if family in (3, 4):
        a = y[: n - 1]
        b = y[1:]
        if family == 3:
            return a * a + b * b + a * b - 2.0 * a - 2.0 * b + 1.0
        return a * a + b * b + a * b - 1.0
    if family in (5, 6):
        mid = y[1 : n - 1]
        g = (3.0 - 0.5 * mid) * mid - y[: n - 2] - 2.0 * y[2:] + 1.0
        if family == 5:
            return g
        return np.array([float(np.sum(g))])
    raise ValueError(f"unknown constraint family {family!r}")


def family_length(family, n):
    """Number of constraints family ``family`` yields on ``n`` variables."""
    if family in (1, 2, 5):
        return n - 2
    if family in (3, 4):
        return n - 1
    if family == 6:
        return 1
    raise ValueError(f"unknown constraint family {family!r}")


@lru_cache(maxsize=None)
def _hilbert(n):
    i = np.arange(n)
    h = 1.0 / (i[:, None] + i[None, :] + 1.0)
    h.flags.writeable = False
    return h


def _maxq(y):
    return float(np.max(y * y))


def _maxl(y):
    return float(np.max(np.abs(y)))


def _mxhilb(y):
    return float(np.max(np.abs(_hilbert(y.shape[0]) @ y)))


def _l1hilb(y):
    return float(np.sum(np.abs(_hilbert(y.shape[0]) @ y)))


def _goffin(y):
    return float(y.shape[0] * np.max(y) - np.sum(y))


def _ones_reference(n):
    return np.ones(n)


def _goffin_reference(n):
    return np.arange(n, dtype=float) % 5.0


_CLASSIC = {
    # base -> (objective on decoded y, reference point builder, shipped sizes)
    "maxq": (_maxq, _ones_reference, (3, 20)),
    "maxl": (_maxl, _ones_reference, (20,)),
    "mxhilb": (_mxhilb, _ones_reference, (50,)),
    "l1hilb": (_l1hilb, _ones_reference, (20,)),
    "goffin": (_goffin, _goffin_reference, (50,)),
}

_SYNTHETIC_SIZES = {"sepconvex": (4,), "mixnorm": (4,)}


def _sepconvex(y):
    return float(
        (y[0] - 1.3) ** 2 + (y[1] + 2.7) ** 2 + abs(y[2] - 47.0) + abs(y[3] - 52.0)
    )


def _mixnorm(y):
    return float(max(abs(y[0] - 1.5), abs(y[1] + 2.5)) + abs(y[2] - 0.4 * y[3]))


_SYNTHETIC = {"sepconvex": _sepconvex, "mixnorm": _mixnorm}


def list_problems(kind="all"):
    """Shipped problem specs: ``kind`` is ``bound``, ``constrained`` or ``all``."""
    if kind not in ("bound", "constrained", "all"):
        raise ValueError("kind must be 'bound', 'constrained' or 'all'")
    bound = []
    for base, (_, _, sizes) in _CLASSIC.items():
        bound.extend(ProblemSpec(f"{base}{n}", base, n) for n in sizes)
    for base, sizes in _SYNTHETIC_SIZES.items():
        bound.extend(ProblemSpec(f"{base}{n}", base, n) for n in sizes)
    if kind == "bound":
        return tuple(bound)
    constrained = tuple(
        ProblemSpec(f"{s.name}-g{fam}", s.base, s.n, fam) for s in bound for fam in FAMILIES
    )
    if kind == "constrained":
        return constrained
    return tuple(bound) + constrained


def _find_spec(name):
    for spec in list_problems("all"):
        if spec.name == name:
            return spec
    raise KeyError(f"unknown problem {name!r}")


def _partition(n):
    nc = (n + 1) // 2
    return VariablePartition(tuple(range(nc)), tuple(range(nc, n)))


def _transform(n, lower_dec, upper_dec):
    """Encoded box/start and the decoder for a problem boxed on decoded variables."""
    part = _partition(n)
    iz = np.asarray(part.integer, dtype=np.intp)
    lower = lower_dec.copy()
    upper = upper_dec.copy()
    lower[iz] = 0.0
    upper[iz] = 100.0
    base = lower_dec[iz]
    scale = (upper_dec[iz] - lower_dec[iz]) / 100.0

    def decode(x):
        y = np.array(x, dtype=float)
        y[iz] = base + y[iz] * scale
        return y

    start = (upper - lower) / 2.0
    start[iz] = 50.0
    return part, Box(lower, upper), start, decode


def _build_parts(spec):
    if spec.base in _CLASSIC:
        objective_dec, reference, _ = _CLASSIC[spec.base]
        y0 = reference(spec.n)
        part, box, start, decode = _transform(spec.n, y0 - 10.0, y0 + 10.0)
    else:
        objective_dec = _SYNTHETIC[spec.base]
        lower = np.array([-10.0, -10.0, 0.0, 0.0])
        upper = np.array([10.0, 10.0, 100.0, 100.0])
        part = _partition(spec.n)
        box = Box(lower, upper)
        start = (upper - lower) / 2.0
        start[list(part.integer)] = 50.0

        def decode(x):
            return np.array(x, dtype=float)

    return part, box, start, decode, objective_dec


def build_problem(spec):
    """Materialize a shipped problem (by spec or by name) as a ProblemInstance."""
    if isinstance(spec, str):
        spec = _find_spec(spec)
    part, box, start, decode, objective_dec = _build_parts(spec)

    def objective(x):
        return objective_dec(decode(x))

    if spec.family is None:
        return ProblemInstance(spec.name, part, box, objective, start)
    fam = spec.family

    def constraints(x):
        return constraint_family(fam, decode(x))

    return ProblemInstance(
        spec.name,
        part,
        box,
        objective,
        start,
        constraints=constraints,
        n_constraints=family_length(fam, spec.n),
    )


def decode_point(spec, x):
    """Decoded variables for a point of the named shipped problem."""
    if isinstance(spec, str):
        spec = _find_spec(spec)
    _, _, _, decode, _ = _build_parts(spec)
    return decode(np.asarray(x, dtype=float))
