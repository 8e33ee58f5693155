"""Search directions.

Two generators live here: a deterministic dense sequence of unit directions
over the continuous coordinates, and an insertion-ordered set of primitive
integer directions over the integer coordinates that starts from the signed
coordinate vectors and grows shell by shell (infinity norm).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import qmc

from .errors import DegenerateSequence, SetComplete, ZeroVector

__all__ = [
    "DenseDirectionSequence",
    "DiscreteDirectionSet",
    "is_primitive",
]

_MIN_NORM = 1e-8
_MAX_REDRAWS = 1000


def is_primitive(d):
    """True when the integer vector ``d`` has componentwise gcd 1.

    Raises :class:`ZeroVector` for the all-zero vector, which is neither
    primitive nor a usable direction.
    """
    v = np.asarray(d)
    ints = np.rint(v).astype(np.int64)
    if not np.array_equal(ints, np.asarray(v, dtype=float)):
        raise ValueError("direction must have integer components")
    if not ints.any():
        raise ZeroVector("the zero vector has no gcd")
    return int(np.gcd.reduce(np.abs(ints))) == 1


class DenseDirectionSequence:
    """Deterministic low-discrepancy sequence of unit directions.

    Draws points of a scrambled Sobol sequence in ``[0, 1]^d`` over the
    continuous coordinates, maps them to ``[-1, 1]^d``, rejects vectors of
    norm below 1e-8, and normalizes.  Emitted vectors have length ``n`` with
    exact zeros on the integer coordinates.  Two sequences built with the
    same seed produce the same stream.
    """

    def __init__(self, partition, seed=0):
        if partition.n_continuous == 0:
            raise ValueError("dense directions require at least one continuous variable")
        self.seed = int(seed)
        self.draws = 0
        self._n = partition.n
        self._ic = np.asarray(partition.continuous, dtype=np.intp)
        self._engine = qmc.Sobol(d=partition.n_continuous, scramble=True, seed=self.seed)

    def take(self):
        """The next unit direction; advances the sequence."""
        for _ in range(_MAX_REDRAWS):
            u = self._engine.random(1)[0]
            self.draws += 1
            v = 2.0 * u - 1.0
            norm = float(np.linalg.norm(v))
            if norm >= _MIN_NORM:
                s = np.zeros(self._n)
                s[self._ic] = v / norm
                return s
        raise DegenerateSequence(
            f"no vector of norm >= {_MIN_NORM} in {_MAX_REDRAWS} draws"
        )


def _rand_below(rng, n):
    # uniform python int in [0, n) for arbitrarily large n
    nbytes = max(8, (n.bit_length() + 15) // 8)
    return int.from_bytes(rng.bytes(nbytes), "big") % n


class DiscreteDirectionSet:
    """Insertion-ordered primitive integer directions with tentative steps.

    The set starts from the signed coordinate directions that are feasible at
    the start point.  :meth:`expand` generates further primitive vectors over
    the integer coordinates, walking the infinity-norm shells outward; inside
    a shell, candidates are visited in a seeded low-discrepancy scramble of
    lexicographic order (an affine walk ``j -> (b + j*g) mod N`` with
    ``gcd(g, N) = 1``).  Candidates infeasible at the current point are
    deferred and retried first on later calls.  When every direction feasible
    at the current point is already a member and the shells are exhausted up
    to the box diameter, :meth:`expand` raises :class:`SetComplete`.

    ``directions[i]`` is a read-only float vector of length ``n`` (integral
    values, zeros on the continuous coordinates); ``tentative[i]`` is its
    current integer tentative step.
    """

    def __init__(self, partition, box, start, seed=0, scan_cap=20000):
        self._iz = np.asarray(partition.integer, dtype=np.intp)
        self._n = partition.n
        self._z = len(self._iz)
        self._seed = int(seed)
        self._scan_cap = int(scan_cap)
        self._lz = box.lower[self._iz] if self._z else np.empty(0)
        self._uz = box.upper[self._iz] if self._z else np.empty(0)
        self.directions = []
        self.tentative = []
        self._seen = set()
        # seen-but-infeasible candidates, retried first on later expansions
        self._deferred = np.empty((0, self._z), dtype=np.int64)
        # rows below _retry_done are known infeasible at the point _retry_key
        self._retry_key = None
        self._retry_done = 0
        self._futile_scans = 0
        self._dormant_key = None
        if self._z:
            self._s_max = int(np.max(self._uz - self._lz))
            self._shell = 0
            self._walk_t = 0
            self._walk_n = 0
            self._exhausted = False
            xz = np.asarray(start, dtype=float)[self._iz]
            held = []
            for pos in range(self._z):
                for sign in (1, -1):
                    dz = np.zeros(self._z, dtype=np.int64)
                    dz[pos] = sign
                    if self._feasible_at(xz, dz):
                        self._admit(dz)
                    else:
                        self._seen.add(dz.tobytes())
                        held.append(dz)
            if held:
                self._deferred = np.stack(held)
            if not self.directions:
                raise ValueError("no coordinate direction is feasible at the start point")
        else:
            self._s_max = 0
            self._exhausted = True

    def __len__(self):
        return len(self.directions)

    def _feasible_at(self, xz, dz):
        v = xz + dz
        return bool(np.all(v >= self._lz) and np.all(v <= self._uz))

    def _admit(self, dz):
        self._seen.add(dz.tobytes())
        self._append(dz)

    def _append(self, dz):
        full = np.zeros(self._n)
        full[self._iz] = dz
        full.flags.writeable = False
        self.directions.append(full)
        self.tentative.append(1)

    def expand(self, x, batch=None):
        """Add up to ``batch`` new primitive directions feasible at ``x``.

        Returns the number added, possibly 0 when the per-call scan cap was
        reached before finding new feasible candidates.  Raises
        :class:`SetComplete` when the whole direction universe up to the box
        diameter has been generated and nothing feasible at ``x`` remains.
        """
        if self._z == 0:
            raise SetComplete("no integer variables: the direction universe is empty")
        if batch is None:
            batch = 2 * self._z
        batch = max(1, int(batch))
        xz = np.asarray(x, dtype=float)[self._iz]
        xkey = xz.tobytes()
        added = 0

        start = self._retry_done if self._retry_key == xkey else 0
        screened = True
        if self._deferred.shape[0] > start:
            feasible = self._feasible_rows(xz, self._deferred[start:])
            hits = np.nonzero(feasible)[0] + start
            take = hits[: batch - added]
            screened = hits.size == take.size
            if take.size:
                for i in take:
                    self._append(self._deferred[i])
                added += int(take.size)
                keep = np.ones(self._deferred.shape[0], dtype=bool)
                keep[take] = False
                self._deferred = self._deferred[keep]
                if not screened:
                    # rows before the last consumed one are known infeasible
                    start = int(take[-1]) + 1 - int(take.size)

        if self._dormant_key == xkey and added == 0:
            self._retry_key = xkey
            self._retry_done = self._deferred.shape[0]
            return 0

        scanned = 0
        held = []
        while added < batch and not self._exhausted and scanned < self._scan_cap:
            room = self._scan_cap - scanned
            rows = self._next_block(min(room, max(512, 4 * (batch - added))))
            if rows is None:
                self._exhausted = True
                break
            primitive = np.gcd.reduce(np.abs(rows), axis=1) == 1
            feasible = self._feasible_rows(xz, rows)
            consumed = 0
            for i in range(rows.shape[0]):
                if added >= batch:
                    break
                consumed += 1
                scanned += 1
                dz = rows[i]
                key = dz.tobytes()
                if key in self._seen:
                    continue
                if not primitive[i]:
                    continue
                self._seen.add(key)
                if feasible[i]:
                    self._append(dz)
                    added += 1
                else:
                    held.append(dz)
            # commit only the visited prefix; the rest is regenerated later
            self._walk_t += consumed
        if held:
            self._deferred = np.concatenate([self._deferred, np.stack(held)])
        # scan-phase deferrals were just found infeasible at x, so with a
        # fully screened retry pass the whole store is known infeasible here
        self._retry_key = xkey
        self._retry_done = self._deferred.shape[0] if screened else start

        if added:
            self._futile_scans = 0
            self._dormant_key = None
            return added
        if self._exhausted:
            if not (self._deferred.shape[0]
                    and bool(np.any(self._feasible_rows(xz, self._deferred)))):
                raise SetComplete(
                    "every primitive direction feasible at this point is already held"
                )
            return 0
        # scan cap hit without additions: no completeness claim is made
        self._futile_scans += scanned
        if self._futile_scans >= 10 * self._scan_cap:
            self._dormant_key = xkey
        return 0

    def _feasible_rows(self, xz, rows):
        trial = xz + rows
        return np.all(trial >= self._lz, axis=1) & np.all(trial <= self._uz, axis=1)

    def _next_block(self, count):
        """Up to ``count`` candidates of the current shell in walk order.

        The walk position is not advanced; the caller commits the number it
        actually consumed.  Returns ``None`` once every shell is finished.
        """
        while self._walk_t >= self._walk_n:
            self._shell += 1
            if self._shell > self._s_max:
                return None
            self._start_shell(self._shell)
        m = min(int(count), self._walk_n - self._walk_t)
        b, g, n = self._walk_b, self._walk_g, self._walk_n
        js = [(b + t * g) % n for t in range(self._walk_t, self._walk_t + m)]
        return self._unrank_block(js, self._shell)

    def _unrank_block(self, js, s):
        big = 2 * s + 1
        if big**self._z < 2**62:
            return self._unrank_vec(np.asarray(js, dtype=np.int64), s)
        return np.stack([self._unrank(j, s) for j in js])

    def _unrank_vec(self, js, s):
        # vectorized counterpart of _unrank; safe while every per-digit
        # count fits in int64 (guaranteed by the caller's range check)
        z = self._z
        big = 2 * s + 1
        small = big - 2
        m = js.shape[0]
        remaining = js.copy()
        has_extreme = np.zeros(m, dtype=bool)
        out = np.empty((m, z), dtype=np.int64)
        for t in range(z):
            rem = z - t - 1
            total_rem = big**rem
            inner_rem = small**rem
            placed = np.zeros(m, dtype=bool)
            for val in range(-s, s + 1):
                extreme = has_extreme | (abs(val) == s)
                count = np.where(extreme, total_rem, total_rem - inner_rem)
                take = ~placed & (remaining < count)
                out[take, t] = val
                has_extreme = np.where(take, extreme, has_extreme)
                remaining = np.where(placed | take, remaining, remaining - count)
                placed |= take
        return out

    def _start_shell(self, s):
        big = 2 * s + 1
        small = 2 * s - 1
        n = big**self._z - small**self._z
        rng = np.random.default_rng((self._seed, s, self._z))
        g = 1 + _rand_below(rng, n - 1) if n > 1 else 1
        while math.gcd(g, n) != 1:
            g += 1
            if g >= n:
                g = 1
        self._walk_n = n
        self._walk_g = g
        self._walk_b = _rand_below(rng, n)
        self._walk_t = 0

    def _unrank(self, j, s):
        # lexicographic unranking over vectors with infinity norm exactly s
        z = self._z
        big = 2 * s + 1
        small = big - 2
        out = np.empty(z, dtype=np.int64)
        has_extreme = False
        for t in range(z):
            rem = z - t - 1
            total_rem = big**rem
            inner_rem = small**rem
            for val in range(-s, s + 1):
                extreme = has_extreme or abs(val) == s
                count = total_rem if extreme else total_rem - inner_rem
                if j < count:
                    out[t] = val
                    has_extreme = extreme
                    break
                j -= count
        return out
