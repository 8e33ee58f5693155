"""Exception types shared across the toolkit."""

__all__ = [
    "DfmixError",
    "BudgetExhausted",
    "InfeasibleRequest",
    "ZeroVector",
    "DegenerateSequence",
    "SetComplete",
    "NonTerminatingExpansion",
    "ProtocolError",
    "SchemaError",
    "ConfigError",
]


class DfmixError(Exception):
    """Base class for all toolkit errors."""


class BudgetExhausted(DfmixError):
    """A fresh evaluation was requested after the budget was spent."""


class InfeasibleRequest(DfmixError):
    """An evaluation was requested outside the box or off the integer lattice."""


class ZeroVector(DfmixError):
    """The all-zero vector was passed where a direction is required."""


class DegenerateSequence(DfmixError):
    """The dense direction generator failed to produce a usable vector."""


class SetComplete(DfmixError):
    """Every primitive direction feasible at the current point is already held."""


class NonTerminatingExpansion(DfmixError):
    """A step expansion loop exceeded its iteration cap."""


class ProtocolError(DfmixError):
    """An external problem process violated the line protocol."""


class SchemaError(DfmixError):
    """A persisted CSV file does not match the expected schema."""


class ConfigError(DfmixError):
    """Invalid user-supplied configuration (CLI arguments, descriptors)."""
