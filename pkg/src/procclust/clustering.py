"""Clustering of samples from a precomputed distance matrix.

Two deterministic algorithms:

* ``cluster_known_k``  -- farthest-point seeding (first sample seeds cluster
  1, each next center maximises the minimal distance to existing centers)
  followed by nearest-center assignment.  Reads at most k*N matrix entries.
* ``cluster_threshold`` -- connected components of the graph with an edge
  wherever the distance is strictly below delta; the number of clusters is
  discovered, not given.

All ties break toward the lowest index so repeated runs are identical.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .distance import DistanceMatrix
from .errors import InputError


@dataclass(frozen=True)
class Clustering:
    """A partition of sample indices 0..N-1 into labeled clusters.

    labels[i] is the cluster (1..k) of sample i; every label in 1..k is used.
    ``centers`` records the seed sample of each cluster when the clustering
    came from the known-k algorithm.
    """

    labels: tuple[int, ...]
    centers: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.labels:
            raise InputError("clustering needs at least one sample")
        k = max(self.labels)
        used = set(self.labels)
        if used != set(range(1, k + 1)):
            raise InputError(f"labels must cover 1..k with no gaps, got {sorted(used)}")
        if self.centers is not None and len(self.centers) != k:
            raise InputError("need exactly one center per cluster")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return max(self.labels)

    def clusters(self) -> list[list[int]]:
        """Member indices per cluster, in label order."""
        groups: list[list[int]] = [[] for _ in range(self.k)]
        for i, lab in enumerate(self.labels):
            groups[lab - 1].append(i)
        return groups

    @classmethod
    def from_groups(cls, groups) -> "Clustering":
        """Build from an iterable of disjoint index collections."""
        members = [sorted(g) for g in groups]
        size = sum(len(g) for g in members)
        labels = [0] * size
        for lab, group in enumerate(members, start=1):
            for i in group:
                if not 0 <= i < size or labels[i] != 0:
                    raise InputError("groups must partition 0..N-1")
                labels[i] = lab
        return cls(tuple(labels))


def partition_equal(a: Clustering, b: Clustering) -> bool:
    """True iff the two clusterings induce the same partition of 0..N-1."""
    if a.n != b.n:
        raise InputError(f"clusterings cover {a.n} and {b.n} samples")
    return {frozenset(g) for g in a.clusters()} == {frozenset(g) for g in b.clusters()}


def cluster_known_k(dm: DistanceMatrix, k: int) -> Clustering:
    """Farthest-point clustering with the number of clusters given.

    Center 1 is sample 0; each subsequent center is the sample farthest (in
    min-distance) from the chosen centers, lowest index on ties and never an
    existing center; remaining samples go to their nearest center.  Exactly
    k*N instrumented matrix reads.
    """
    n = dm.n
    if not 1 <= k <= n:
        raise InputError(f"k must be in 1..{n}, got {k}")
    centers = [0]
    mind = [0.0] * n
    best = [1] * n
    for i in range(n):
        mind[i] = dm.get(i, 0)
    for j in range(2, k + 1):
        chosen = set(centers)
        cand = -1
        for i in range(n):
            if i in chosen:
                continue
            if cand < 0 or mind[i] > mind[cand]:
                cand = i
        centers.append(cand)
        for i in range(n):
            d = dm.get(i, cand)
            if d < mind[i]:
                mind[i] = d
                best[i] = j
    labels = list(best)
    for j, c in enumerate(centers, start=1):
        labels[c] = j
    return Clustering(tuple(labels), centers=tuple(centers))


def cluster_threshold(dm: DistanceMatrix, delta: float) -> Clustering:
    """Group samples whose pairwise distance stays strictly below delta.

    Clusters are connected components, so closeness propagates through
    chains.  Component labels follow the order of each component's first
    member.
    """
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta}")
    if dm.estimator != "truncated":
        warnings.warn(
            "threshold clustering is calibrated for the truncated estimator; "
            f"matrix was built with {dm.estimator!r}",
            stacklevel=2,
        )
    if not dm.unit_range:
        warnings.warn(
            "threshold clustering assumes [0,1]-valued samples; "
            "out-of-range data shifts what delta means",
            stacklevel=2,
        )
    n = dm.n
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if dm.get(i, j) < delta:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    labels = [0] * n
    next_label = 0
    root_label: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        if r not in root_label:
            next_label += 1
            root_label[r] = next_label
        labels[i] = root_label[r]
    return Clustering(tuple(labels))
