"""Random ordered DAGs, exact d-separation search, skeleton recovery with
oracle-call accounting, and Monte Carlo validation of closed-form
separation bounds."""

from .bounds import (
    BoundInput,
    SgsBoundInput,
    bound_bounded_size,
    bound_bounded_size_unconditional,
    bound_fixed_size,
    bound_random_z,
    bound_random_z_simple,
    bound_random_z_unconditional,
    pc_adjacency_threshold,
    pc_cmax_threshold,
    sgs_calls_lower_bound,
    sparse_graph_ratio,
)
from .discovery import (
    OracleStats,
    PcConfig,
    SgsConfig,
    SgsPairResult,
    SkeletonResult,
    empirical_precision,
    pc_skeleton,
    uniform_sgs_pair,
    uniform_sgs_skeleton,
)
from .dsep import (
    PathCensus,
    ViolationCount,
    format_conditioning_set,
    is_d_separated,
    is_d_separated_bruteforce,
    is_pseudoseparated,
    parse_conditioning_set,
    path_census,
    sample_bernoulli_set,
    sample_fixed_size_set,
    violation_count,
)
from .experiments import (
    ExperimentConfig,
    ExperimentOutput,
    SummaryRecord,
    TrialRecord,
    load_config,
    run_bound_validation,
    run_experiment,
    run_fig1,
    run_perfect_pc,
    run_sgs_calls,
    run_sparsity_curve,
    write_config,
    write_csv,
)
from .graph import (
    Dag,
    FormatError,
    GenParams,
    NodePair,
    ancestral_closure,
    density,
    descendants,
    generate_random_dag,
    nonadjacent_pairs,
    read_dag_text,
    sample_pairs,
    write_dag_text,
)
from .separators import (
    count_nonseparating_sets,
    min_separator_size,
    minimum_d_separator,
)

__version__ = "0.1.0"

__all__ = [
    "BoundInput",
    "Dag",
    "ExperimentConfig",
    "ExperimentOutput",
    "FormatError",
    "GenParams",
    "NodePair",
    "OracleStats",
    "PathCensus",
    "PcConfig",
    "SgsBoundInput",
    "SgsConfig",
    "SgsPairResult",
    "SkeletonResult",
    "SummaryRecord",
    "TrialRecord",
    "ViolationCount",
    "ancestral_closure",
    "bound_bounded_size",
    "bound_bounded_size_unconditional",
    "bound_fixed_size",
    "bound_random_z",
    "bound_random_z_simple",
    "bound_random_z_unconditional",
    "count_nonseparating_sets",
    "density",
    "descendants",
    "empirical_precision",
    "format_conditioning_set",
    "generate_random_dag",
    "is_d_separated",
    "is_d_separated_bruteforce",
    "is_pseudoseparated",
    "load_config",
    "min_separator_size",
    "minimum_d_separator",
    "nonadjacent_pairs",
    "parse_conditioning_set",
    "path_census",
    "pc_adjacency_threshold",
    "pc_cmax_threshold",
    "pc_skeleton",
    "read_dag_text",
    "run_bound_validation",
    "run_experiment",
    "run_fig1",
    "run_perfect_pc",
    "run_sgs_calls",
    "run_sparsity_curve",
    "sample_bernoulli_set",
    "sample_fixed_size_set",
    "sample_pairs",
    "sgs_calls_lower_bound",
    "sparse_graph_ratio",
    "uniform_sgs_pair",
    "uniform_sgs_skeleton",
    "violation_count",
    "write_config",
    "write_csv",
    "write_dag_text",
]
