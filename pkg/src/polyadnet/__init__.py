"""Growing multigraphs by preferential attachment with clique increments.

The model grows a graph one increment at a time. An increment is either a
monad (one vertex with a random number of free edges) or an n-ad (an
n-vertex clique whose members each bring free edges, some grouped into
conjugate bundles that all land on one target). Free edge ends choose
existing vertices with probability proportional to a preference function
of their degree.

Besides the generator the package ships the stationary degree
distribution solver, a calibrator that inverts it (find the preference
function realizing a target distribution), comparison and structure
metrics, and a CLI wiring them together.
"""

from .analysis import (
    ComparisonReport,
    compare,
    global_clustering,
    loglog_slope,
    triangle_count,
)
from .calibrate import CalibrationResult, calibrate, normalizer_a
from .distributions import (
    DegreeDistribution,
    mean_degree_of,
    read_distribution,
    write_distribution,
)
from .engine import (
    GrowthStats,
    grow,
    read_edge_list,
    read_stats,
    write_edge_list,
    write_stats,
)
from .graph import MultiGraph, empirical_vdd, seed_complete
from .layers import LayerIndex, SaturationError, sample_target
from .params import (
    ModelParams,
    expected_edges_per_step,
    expected_vertices_per_step,
    validate_params,
)
from .preference import PreferenceFunction, read_preference, write_preference
from .solver import (
    NonConvergenceError,
    StationarySolution,
    q_dyad,
    q_from_recurrence,
    q_gamma0,
    read_q_table,
    solve_stationary,
    write_q_table,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationResult",
    "ComparisonReport",
    "DegreeDistribution",
    "GrowthStats",
    "LayerIndex",
    "ModelParams",
    "MultiGraph",
    "NonConvergenceError",
    "PreferenceFunction",
    "SaturationError",
    "StationarySolution",
    "__version__",
    "calibrate",
    "compare",
    "empirical_vdd",
    "expected_edges_per_step",
    "expected_vertices_per_step",
    "global_clustering",
    "grow",
    "loglog_slope",
    "mean_degree_of",
    "normalizer_a",
    "q_dyad",
    "q_from_recurrence",
    "q_gamma0",
    "read_distribution",
    "read_edge_list",
    "read_preference",
    "read_q_table",
    "read_stats",
    "sample_target",
    "seed_complete",
    "solve_stationary",
    "triangle_count",
    "validate_params",
    "write_distribution",
    "write_edge_list",
    "write_preference",
    "write_q_table",
    "write_stats",
]
