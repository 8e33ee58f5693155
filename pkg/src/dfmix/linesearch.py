"""Expansion linesearches along continuous and integer directions.

All searches receive the scalar being minimized through a ``value`` callable
that is expected to route through :class:`~dfmix.core.BudgetedOracle`, so
repeated points cost nothing and the budget is enforced at the source.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import project_box
from .errors import NonTerminatingExpansion

__all__ = [
    "LineSearchParams",
    "projected_continuous_search",
    "coordinate_search",
    "discrete_search",
]

_MAX_EXPANSIONS = 1_000_000


@dataclass(frozen=True)
class LineSearchParams:
    """Sufficient-decrease coefficient ``gamma`` and expansion ratio ``delta``."""

    gamma: float = 1e-6
    delta: float = 0.5

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")


def projected_continuous_search(alpha0, w, direction, value, box, params):
    """Expansion search along ``+-direction`` with trials projected onto the box.

    Starting from the tentative step ``alpha0 > 0``, the positive and then the
    negative orientation are probed at ``alpha0``; an orientation is accepted
    when the projected trial improves ``value(w)`` by at least
    ``gamma * alpha^2``.  On acceptance the step is expanded by ``1/delta``
    until the sufficient decrease fails, and the last accepted step is
    returned with the signed direction.  On failure the result is
    ``(0.0, direction)``.

    A trial whose projection coincides bitwise with ``w`` is treated as a
    failed probe without evaluating.  Expansion is capped at 1e6 rounds
    (:class:`NonTerminatingExpansion`).
    """
    w = np.asarray(w, dtype=float)
    p = np.asarray(direction, dtype=float)
    alpha = float(alpha0)
    if not alpha > 0:
        raise ValueError("alpha0 must be positive")
    gamma = params.gamma
    delta = params.delta
    fw = value(w)

    signed = None
    for sign in (1.0, -1.0):
        trial = project_box(w + (sign * alpha) * p, box)
        if np.array_equal(trial, w):
            continue
        if value(trial) <= fw - gamma * alpha * alpha:
            signed = sign * p
            break
    if signed is None:
        return 0.0, p.copy()

    for _ in range(_MAX_EXPANSIONS):
        beta = alpha / delta
        trial = project_box(w + beta * signed, box)
        if np.array_equal(trial, w):
            return alpha, signed
        if value(trial) > fw - gamma * beta * beta:
            return alpha, signed
        alpha = beta
    raise NonTerminatingExpansion(f"expansion exceeded {_MAX_EXPANSIONS} rounds")


def coordinate_search(alpha0, w, index, value, box, params, prefer=1):
    """Expansion search along ``+-e_index`` with steps capped at the bound gap.

    Unlike :func:`projected_continuous_search` no projection is applied:
    every trial step is truncated to the distance from ``w[index]`` to the
    facing bound, so trials lie inside the box by construction and the
    returned step is the displacement actually taken.  ``prefer`` (+1 or -1)
    chooses which orientation is probed first.

    Returns ``(alpha, sign, point)`` where ``point`` is the accepted trial
    (``w`` itself when the search fails with ``alpha == 0``).
    """
    w = np.asarray(w, dtype=float)
    i = int(index)
    alpha0 = float(alpha0)
    if not alpha0 > 0:
        raise ValueError("alpha0 must be positive")
    gamma = params.gamma
    delta = params.delta
    lo = float(box.lower[i])
    up = float(box.upper[i])
    fw = value(w)

    first = 1 if prefer >= 0 else -1
    for sign in (first, -first):
        gap = (up - w[i]) if sign > 0 else (w[i] - lo)
        if gap <= 0:
            continue
        alpha = min(alpha0, gap)
        trial = w.copy()
        # land exactly on the bound when the gap is the binding cap
        trial[i] = (up if sign > 0 else lo) if alpha == gap else w[i] + sign * alpha
        if np.array_equal(trial, w):
            continue
        if value(trial) > fw - gamma * alpha * alpha:
            continue
        for _ in range(_MAX_EXPANSIONS):
            if alpha >= gap:
                return alpha, sign, trial
            beta = min(alpha / delta, gap)
            probe = w.copy()
            probe[i] = (up if sign > 0 else lo) if beta == gap else w[i] + sign * beta
            if np.array_equal(probe, trial):
                return alpha, sign, trial
            if value(probe) > fw - gamma * beta * beta:
                return alpha, sign, trial
            alpha = beta
            trial = probe
        raise NonTerminatingExpansion(f"expansion exceeded {_MAX_EXPANSIONS} rounds")
    return 0.0, first, w


def discrete_search(alpha0, w, direction, xi, value, box):
    """Expansion search along the integer direction ``direction``.

    Steps are integers.  The largest feasible step ``abar`` along
    ``direction`` from ``w`` is computed exactly; the search starts at
    ``min(abar, alpha0)``, requires an improvement of at least ``xi`` for
    acceptance, then doubles the step (capped at ``abar``) while the
    improvement persists.  Returns the accepted integer step, 0 on failure.
    When the cap saturates (the doubled step equals the current one) the
    current step is returned without another evaluation.
    """
    w = np.asarray(w, dtype=float)
    d = np.asarray(direction, dtype=float)
    xi = float(xi)

    pos = d > 0
    neg = d < 0
    caps = []
    if np.any(pos):
        caps.append(int(np.min(np.floor_divide(box.upper[pos] - w[pos], d[pos]))))
    if np.any(neg):
        caps.append(int(np.min(np.floor_divide(w[neg] - box.lower[neg], -d[neg]))))
    if not caps:
        raise ValueError("direction must be nonzero")
    abar = min(caps)

    alpha = min(abar, int(alpha0))
    if alpha <= 0:
        return 0
    fw = value(w)
    if value(w + alpha * d) > fw - xi:
        return 0
    while True:
        beta = min(abar, 2 * alpha)
        if beta == alpha:
            return alpha
        if value(w + beta * d) > fw - xi:
            return alpha
        alpha = beta
