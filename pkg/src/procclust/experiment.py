"""Consistency-rate experiments: recovery probability vs sample length.

For each length n the runner draws ``trials`` fresh datasets, clusters each,
and records how often the output matches the ground-truth partition exactly.
Per-trial streams derive from SeedSequence([master_seed, n, trial]), so rows
are reproducible byte-for-byte and independent of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import default_schedule
from .clustering import cluster_known_k, cluster_threshold, partition_equal
from .distance import TruncationSchedule, distance_matrix
from .errors import InputError
from .io import ExperimentConfig
from .processes import generate_dataset

CSV_VERSION = "procclust-experiment-v1"
CSV_COLUMNS = (
    "n",
    "trials",
    "exact_recovery_count",
    "rate",
    "mean_within_distance",
    "mean_between_distance",
)


@dataclass(frozen=True)
class RateRow:
    n: int
    trials: int
    exact_recovery_count: int
    rate: float
    mean_within_distance: float
    mean_between_distance: float


def trial_seed(master_seed: int, n: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, n, trial])


def _resolve_schedule(config: ExperimentConfig, n: int) -> TruncationSchedule:
    if config.m_max is not None and config.l_max is not None:
        return TruncationSchedule(m_max=config.m_max, l_max=config.l_max)
    params = default_schedule(n)
    return TruncationSchedule(
        m_max=config.m_max or params.m_n, l_max=config.l_max or params.l_n
    )


def run_experiment(config: ExperimentConfig, progress=None) -> list[RateRow]:
    if config.seed < 0:
        raise InputError(f"master seed must be nonnegative, got {config.seed}")
    k_target = config.k or len(config.coupling.layout)
    rows = []
    for n in config.lengths:
        hits = 0
        within_sum = within_cnt = 0.0
        between_sum = between_cnt = 0.0
        if config.algorithm == "threshold":
            delta = config.delta
            if delta is None:
                delta = default_schedule(n).delta_n
        for trial in range(config.trials):
            samples, target = generate_dataset(
                config.coupling, n, trial_seed(config.seed, n, trial)
            )
            if config.estimator == "truncated":
                dm = distance_matrix(
                    samples, estimator="truncated", schedule=_resolve_schedule(config, n)
                )
            else:
                dm = distance_matrix(samples, estimator="exact")
            if config.algorithm == "known_k":
                result = cluster_known_k(dm, k_target)
            else:
                result = cluster_threshold(dm, delta)
            if partition_equal(result, target):
                hits += 1
            labels = target.labels
            for i in range(len(labels)):
                for j in range(i + 1, len(labels)):
                    if labels[i] == labels[j]:
                        within_sum += dm.values[i, j]
                        within_cnt += 1
                    else:
                        between_sum += dm.values[i, j]
                        between_cnt += 1
        rows.append(
            RateRow(
                n=n,
                trials=config.trials,
                exact_recovery_count=hits,
                rate=hits / config.trials,
                mean_within_distance=(
                    within_sum / within_cnt if within_cnt else math.nan
                ),
                mean_between_distance=(
                    between_sum / between_cnt if between_cnt else math.nan
                ),
            )
        )
        if progress is not None:
            progress(rows[-1])
    return rows


def rates_csv(rows) -> str:
    """Render rows as the versioned CSV contract (stable byte-for-byte)."""
    lines = [f"# {CSV_VERSION}", "# columns: " + ",".join(CSV_COLUMNS)]
    lines.append(",".join(CSV_COLUMNS))
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(row.n),
                    str(row.trials),
                    str(row.exact_recovery_count),
                    repr(row.rate),
                    repr(row.mean_within_distance),
                    repr(row.mean_between_distance),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_rates_csv(path, rows) -> None:
    Path(path).write_text(rates_csv(rows), encoding="utf-8", newline="\n")
