"""Clustering of time-series samples by their generating stationary process.

The package computes empirical distributional distances between finite
samples, clusters them with a known number of clusters (farthest-point
seeding) or an unknown one (threshold components), evaluates finite-sample
error bounds under known mixing rates, and ships seeded process generators
plus an experiment harness for measuring recovery rates.
"""

from .bounds import (
    Alg2Params,
    BoundReport,
    MixingSchedule,
    bosq_tail,
    combine_bound,
    default_schedule,
    error_bound,
    gamma,
    schedule_product,
)
from .clustering import Clustering, cluster_known_k, cluster_threshold, partition_equal
from .distance import (
    DistanceBreakdown,
    DistanceMatrix,
    TruncationSchedule,
    distance_matrix,
    emp_distance_exact,
    emp_distance_oracle,
    emp_distance_truncated,
    exact_breakdown,
    term,
    weight,
)
from .errors import ComputationError, InputError
from .experiment import RateRow, rates_csv, run_experiment, write_rates_csv
from .io import (
    DatasetManifest,
    ExperimentConfig,
    load_experiment_config,
    load_manifest,
    read_sample,
    write_manifest,
    write_sample,
)
from .partitions import (
    CellId,
    FrequencyTable,
    PartitionSpec,
    Sample,
    cell_index,
    frequencies,
    s_min,
)
from .processes import (
    CouplingSpec,
    HiddenMarkov,
    IIDBernoulli,
    IIDUniform,
    Markov2,
    Rotation,
    generate,
    generate_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "Alg2Params",
    "BoundReport",
    "CellId",
    "Clustering",
    "ComputationError",
    "CouplingSpec",
    "DatasetManifest",
    "DistanceBreakdown",
    "DistanceMatrix",
    "ExperimentConfig",
    "FrequencyTable",
    "HiddenMarkov",
    "IIDBernoulli",
    "IIDUniform",
    "InputError",
    "Markov2",
    "MixingSchedule",
    "PartitionSpec",
    "RateRow",
    "Rotation",
    "Sample",
    "TruncationSchedule",
    "bosq_tail",
    "cell_index",
    "cluster_known_k",
    "cluster_threshold",
    "combine_bound",
    "default_schedule",
    "distance_matrix",
    "emp_distance_exact",
    "emp_distance_oracle",
    "emp_distance_truncated",
    "error_bound",
    "exact_breakdown",
    "frequencies",
    "gamma",
    "generate",
    "generate_dataset",
    "load_experiment_config",
    "load_manifest",
    "partition_equal",
    "rates_csv",
    "read_sample",
    "run_experiment",
    "s_min",
    "schedule_product",
    "term",
    "weight",
    "write_manifest",
    "write_rates_csv",
    "write_sample",
]
