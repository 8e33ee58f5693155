"""Objective and constraint service over a child process line protocol.

For each evaluation the parent writes one request line to the child's stdin::

    E v_0 v_1 ... v_{n-1}

with every value in full round-trip precision, and reads one reply line::

    F <f>                       (unconstrained)
    F <f> G <g_0> ... <g_{m-1}> (constrained)

A malformed reply, a non-finite token where a number is required, a wrong
count, or a dead child aborts the run with :class:`ProtocolError`.
"""

from __future__ import annotations

import json
import math
import subprocess

import numpy as np

from .core import Box, ProblemInstance, VariablePartition
from .errors import ConfigError, ProtocolError

__all__ = [
    "ExternalFunction",
    "load_descriptor",
    "build_external_problem",
]


class ExternalFunction:
    """Callable ``x -> (f, g)`` served by a child process over stdio."""

    def __init__(self, argv, n_constraints=0):
        self.argv = list(argv)
        self.n_constraints = int(n_constraints)
        self._last_key = None
        self._last_result = None
        try:
            self._proc = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise ProtocolError(f"cannot start {self.argv!r}: {exc}") from exc

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        key = x.tobytes()
        if key == self._last_key:
            return self._last_result
        line = "E " + " ".join(repr(float(v)) for v in x)
        try:
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
            reply = self._proc.stdout.readline()
        except (BrokenPipeError, OSError) as exc:
            raise ProtocolError(f"external process pipe failed: {exc}") from exc
        if reply == "":
            raise ProtocolError("external process closed its output stream")
        result = self._parse(reply)
        self._last_key = key
        self._last_result = result
        return result

    def _parse(self, reply):
        tokens = reply.split()
        m = self.n_constraints
        expected = 2 + (1 + m if m else 0)
        if len(tokens) != expected or tokens[0] != "F" or (m and tokens[2] != "G"):
            raise ProtocolError(f"malformed reply line: {reply!r}")
        values = []
        for tok in [tokens[1]] + (tokens[3:] if m else []):
            try:
                v = float(tok)
            except ValueError as exc:
                raise ProtocolError(f"non-numeric token {tok!r} in reply") from exc
            if math.isnan(v):
                raise ProtocolError("NaN in reply")
            values.append(v)
        return values[0], np.asarray(values[1:], dtype=float)

    def close(self):
        if self._proc.stdin:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
        self._proc.wait(timeout=10)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


_REQUIRED_KEYS = {"name", "command", "continuous", "integer", "lower", "upper", "start"}


def load_descriptor(path):
    """Read and validate a JSON problem descriptor for an external problem.

    Required keys: ``name``, ``command`` (argv list), ``continuous`` and
    ``integer`` (index lists), ``lower``, ``upper``, ``start`` (vectors).
    Optional: ``constraints`` (count, default 0).
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read descriptor {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("descriptor must be a JSON object")
    missing = _REQUIRED_KEYS - set(data)
    if missing:
        raise ConfigError(f"descriptor is missing keys: {sorted(missing)}")
    if not isinstance(data["command"], list) or not all(
        isinstance(c, str) for c in data["command"]
    ):
        raise ConfigError("descriptor 'command' must be a list of strings")
    data.setdefault("constraints", 0)
    return data


def build_external_problem(descriptor):
    """A (ProblemInstance, ExternalFunction) pair from a descriptor dict or path.

    The returned function owns the child process; close it (or use it as a
    context manager) when the run is over.
    """
    if isinstance(descriptor, str):
        descriptor = load_descriptor(descriptor)
    m = int(descriptor.get("constraints", 0))
    external = ExternalFunction(descriptor["command"], n_constraints=m)
    try:
        partition = VariablePartition(
            tuple(descriptor["continuous"]), tuple(descriptor["integer"])
        )
        box = Box(descriptor["lower"], descriptor["upper"])
        problem = ProblemInstance(
            str(descriptor["name"]),
            partition,
            box,
            lambda x: external(x)[0],
            descriptor["start"],
            constraints=(lambda x: external(x)[1]) if m else None,
            n_constraints=m,
        )
    except (ValueError, TypeError) as exc:
        external.close()
        raise ConfigError(f"invalid descriptor: {exc}") from exc
    return problem, external
