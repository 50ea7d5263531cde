"""Cube partitions of R^m, window frequency counting, and the s_min statistic.

A level-l partition tiles R^m with half-open cubes [i*h, (i+1)*h) per
coordinate, anchored at the origin.  Two cell-side families are supported:

* ``dyadic``  -- h = 2**-l (default).  Per-scale terms of the distributional
  distance stabilise after ceil(log2(1/s_min)) levels, which keeps exact
  evaluation cheap.
* ``inverse`` -- h = 1/l, the textbook volume-(1/l)^m family.

Values exactly on a cell boundary belong to the upper cell (floor semantics).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError

FAMILIES = ("dyadic", "inverse")


def cell_side(l: int, family: str = "dyadic") -> float:
    """Edge length of a level-l cube."""
    if l < 1:
        raise InputError(f"scale level must be >= 1, got {l}")
    if family == "dyadic":
        return 2.0 ** -l
    if family == "inverse":
        return 1.0 / l
    raise InputError(f"unknown cell family {family!r}")


def cells_per_axis(l: int, family: str = "dyadic") -> int:
    """Number of level-l cells per coordinate tiling the unit interval [0, 1)."""
    if family == "dyadic":
        return 2 ** l
    if family == "inverse":
        return l
    raise InputError(f"unknown cell family {family!r}")


class Sample:
    """A finite real-valued sequence, one observation per time step.

    The backing array is float64 and read-only after construction; every
    value must be finite.
    """

    __slots__ = ("values",)

    def __init__(self, values: Iterable[float]):
        arr = np.array(values, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise InputError(f"sample must be one-dimensional, got shape {arr.shape}")
        if arr.size and not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InputError(f"sample contains non-finite value at position {bad}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Sample is immutable")

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"Sample(n={self.values.size})"


def as_sample(x) -> Sample:
    """Coerce a Sample or a plain sequence of floats into a Sample."""
    return x if isinstance(x, Sample) else Sample(x)


@dataclass(frozen=True)
class PartitionSpec:
    """One partition B^{m,l}: tuple dimension m at scale level l."""

    m: int
    l: int
    family: str = "dyadic"

    def __post_init__(self):
        if self.m < 1:
            raise InputError(f"dimension m must be >= 1, got {self.m}")
        if self.l < 1:
            raise InputError(f"scale l must be >= 1, got {self.l}")
        if self.family not in FAMILIES:
            raise InputError(f"unknown cell family {self.family!r}")

    @property
    def cell_side(self) -> float:
        return cell_side(self.l, self.family)


@dataclass(frozen=True)
class CellId:
    """One cube of B^{m,l}, identified by its per-coordinate indices."""

    m: int
    l: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.m:
            raise InputError(
                f"cell has {len(self.coords)} coordinates, expected m={self.m}"
            )


@dataclass(frozen=True)
class FrequencyTable:
    """Sliding-window occurrence counts of one sample over B^{m,l}.

    ``counts`` maps occupied cells to integer counts; frequencies are formed
    at read time as count / window_total so no rounding accumulates.
    window_total is n - m + 1, or 0 when the sample is shorter than m.
    """

    m: int
    l: int
    counts: Mapping[CellId, int]
    window_total: int
    family: str = "dyadic"

    def __post_init__(self):
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))

    def frequency(self, cell: CellId) -> float:
        if self.window_total == 0:
            return 0.0
        return self.counts.get(cell, 0) / self.window_total

    def frequencies(self) -> dict[CellId, float]:
        return {c: k / self.window_total for c, k in self.counts.items()}


def _floor_index(value: float, side: float) -> int:
    try:
        return math.floor(value / side)
    except OverflowError:
        # value/side overflowed a double; fall back to exact rational floor
        from fractions import Fraction

        return math.floor(Fraction(value) / Fraction(side))


def cell_index(x: Iterable[float], spec: PartitionSpec) -> CellId:
    """Locate the cube of B^{m,l} containing the point x.

    coords[i] = floor(x[i] / cell_side); boundary points go to the upper cell.
    """
    coords = tuple(float(v) for v in x)
    if len(coords) != spec.m:
        raise InputError(f"point has {len(coords)} coordinates, expected m={spec.m}")
    if not all(math.isfinite(v) for v in coords):
        raise InputError("point has a non-finite coordinate")
    side = spec.cell_side
    return CellId(spec.m, spec.l, tuple(_floor_index(v, side) for v in coords))


def position_codes(values: np.ndarray, l: int, family: str = "dyadic") -> np.ndarray:
    """Per-position scalar cell indices floor(x / side) as an int64 array.

    Falls back to exact Python integers (object dtype) when an index would
    not fit in int64, which only happens for astronomically large values.
    """
    side = cell_side(l, family)
    scaled = np.floor(values / side)
    if scaled.size and np.abs(scaled).max() >= 2**62:
        return np.array([_floor_index(float(v), side) for v in values], dtype=object)
    return scaled.astype(np.int64)


def window_counts(
    values: np.ndarray, m: int, l: int, family: str = "dyadic"
) -> dict[tuple[int, ...], int]:
    """Count every length-m sliding window into its cell, keyed by coords.

    Plain dict counting over Python int tuples; this is the reference path
    used by frequencies() and the brute-force distance oracle.
    """
    n = len(values)
    if n < m:
        return {}
    codes = position_codes(np.asarray(values, dtype=np.float64), l, family).tolist()
    counts: dict[tuple[int, ...], int] = {}
    for i in range(n - m + 1):
        key = tuple(codes[i : i + m])
        counts[key] = counts.get(key, 0) + 1
    return counts


def frequencies(x, m: int, l: int, family: str = "dyadic") -> FrequencyTable:
    """Empirical window frequencies of a sample over the partition B^{m,l}."""
    if m < 1:
        raise InputError(f"dimension m must be >= 1, got {m}")
    if l < 1:
        raise InputError(f"scale l must be >= 1, got {l}")
    sample = as_sample(x)
    n = len(sample)
    if n < m:
        return FrequencyTable(m, l, {}, 0, family)
    raw = window_counts(sample.values, m, l, family)
    counts = {CellId(m, l, key): c for key, c in raw.items()}
    return FrequencyTable(m, l, counts, n - m + 1, family)


def s_min(x1, x2) -> float | None:
    """Smallest gap between distinct values across two samples.

    Returns None when every cross-sample pair is equal-valued (both samples
    constant with the same constant); then a single scale level already
    carries all the information.  Sort-merge over the value sets, O(n log n).
    """
    a = as_sample(x1)
    b = as_sample(x2)
    if len(a) == 0 or len(b) == 0:
        raise InputError("s_min requires nonempty samples")
    va = np.unique(a.values)
    vb = np.unique(b.values)
    if va.size == 1 and vb.size == 1 and va[0] == vb[0]:
        return None
    # nearest distinct partner of each value of va inside vb
    pos = np.searchsorted(vb, va)
    best = math.inf
    for offset in (-1, 0, 1):
        idx = np.clip(pos + offset, 0, vb.size - 1)
        gaps = np.abs(va - vb[idx])
        nz = gaps[gaps > 0]
        if nz.size:
            best = min(best, float(nz.min()))
    if math.isinf(best):
        # va and vb are the same singleton, handled above; any other layout
        # always produces a distinct pair
        return None
    return best
