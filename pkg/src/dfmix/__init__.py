"""Derivative-free solvers for mixed-integer nonsmooth optimization.

The toolkit minimizes black-box objectives over box-constrained mixed
continuous/integer variables without derivatives, handles nonlinear
constraints through an exact penalty, ships a suite of nonsmooth test
problems, and benchmarks solvers with data and performance profiles.
"""

from .bench import (
    BenchmarkBundle,
    ProfileCurve,
    RunTrace,
    data_curves,
    data_profile,
    default_solvers,
    performance_curves,
    performance_profile,
    read_curves_csv,
    read_traces_csv,
    recompute_profiles,
    run_benchmark,
    solved_at,
    trace_from_report,
    write_curves_csv,
    write_traces_csv,
)
from .core import (
    Box,
    BudgetedOracle,
    Evaluation,
    MixedVector,
    ProblemInstance,
    VariablePartition,
    project_box,
)
from .directions import DenseDirectionSequence, DiscreteDirectionSet, is_primitive
from .errors import (
    BudgetExhausted,
    ConfigError,
    DegenerateSequence,
    DfmixError,
    InfeasibleRequest,
    NonTerminatingExpansion,
    ProtocolError,
    SchemaError,
    SetComplete,
    ZeroVector,
)
from .external import ExternalFunction, build_external_problem, load_descriptor
from .linesearch import (
    LineSearchParams,
    coordinate_search,
    discrete_search,
    projected_continuous_search,
)
from .problems import (
    ProblemSpec,
    build_problem,
    constraint_family,
    decode_point,
    family_length,
    list_problems,
)
from .solver import (
    IterationRow,
    PenaltyConfig,
    SolveReport,
    SolverConfig,
    penalty_value,
    solve_bound_constrained,
    solve_constrained,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkBundle",
    "Box",
    "BudgetExhausted",
    "BudgetedOracle",
    "ConfigError",
    "DegenerateSequence",
    "DenseDirectionSequence",
    "DfmixError",
    "DiscreteDirectionSet",
    "Evaluation",
    "ExternalFunction",
    "InfeasibleRequest",
    "IterationRow",
    "LineSearchParams",
    "MixedVector",
    "NonTerminatingExpansion",
    "PenaltyConfig",
    "ProblemInstance",
    "ProblemSpec",
    "ProfileCurve",
    "ProtocolError",
    "RunTrace",
    "SchemaError",
    "SetComplete",
    "SolveReport",
    "SolverConfig",
    "VariablePartition",
    "ZeroVector",
    "build_external_problem",
    "build_problem",
    "constraint_family",
    "coordinate_search",
    "data_curves",
    "data_profile",
    "decode_point",
    "default_solvers",
    "discrete_search",
    "family_length",
    "is_primitive",
    "list_problems",
    "load_descriptor",
    "penalty_value",
    "performance_curves",
    "performance_profile",
    "project_box",
    "projected_continuous_search",
    "read_curves_csv",
    "read_traces_csv",
    "recompute_profiles",
    "run_benchmark",
    "solve_bound_constrained",
    "solve_constrained",
    "solved_at",
    "trace_from_report",
    "write_curves_csv",
    "write_traces_csv",
]
