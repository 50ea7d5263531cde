"""Empirical distributional distance between two finite samples.

The distance between two process laws is the weighted sum, over every tuple
dimension m and every scale level l, of the L1 gap between cell probabilities
of the partition B^{m,l}; weights are w_j = 2**-j in both indices.  The
empirical version replaces probabilities with sliding-window frequencies.

Three evaluators are provided:

* ``emp_distance_exact``   -- the full triple sum.  Finite work because per-m
  scale terms stabilise once the cell side drops below s_min, and the tail of
  stabilised levels has the closed form w_L * T (the last term's weight is
  doubled).  Window counting is shared-rank based and O(n) per (m, l).
* ``emp_distance_truncated`` -- the finite sum over m <= m_max, l <= l_max and
  a finite cell budget per partition (default: the cells tiling [0, 1)^m).
* ``emp_distance_oracle``  -- brute-force dict-counting over all occupied
  cells up to (m_big, l_big), kept deliberately independent of the optimised
  path; used as the testing reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ComputationError, InputError
from .partitions import (
    Sample,
    as_sample,
    cell_side,
    cells_per_axis,
    position_codes,
)

M_CAP_DEFAULT = 128
# Levels beyond this contribute < 2**-62 in total, under double resolution.
LEVEL_CAP = 64


def weight(j: int) -> float:
    """Summable weight sequence w_j = 2**-j."""
    return 2.0 ** -j


def stabilization_level(s: float | None, family: str = "dyadic") -> int:
    """Smallest scale level whose cell side is <= s, capped at LEVEL_CAP.

    For l at or beyond this level, cross-sample cell collisions coincide with
    exact value equality, so per-m terms are constant in l.  s = None (no
    distinct cross pair) needs only one level.
    """
    if s is None:
        return 1
    if s <= 0 or not math.isfinite(s):
        raise InputError(f"separation must be a positive finite real, got {s}")
    if family == "dyadic":
        level = math.ceil(math.log2(1.0 / s)) if s < 1.0 else 1
    else:
        level = math.ceil(1.0 / s)
    level = max(1, level)
    # guard the ceil against one-ulp rounding of the logarithm
    while level < LEVEL_CAP and cell_side(level, family) > s:
        level += 1
    return min(level, LEVEL_CAP)


class _JointWindows:
    """Shared-rank codes of the length-m windows of two samples at one level.

    Both samples' windows live in one rank space so per-cell counts can be
    compared directly.  advance() extends every window by one position and
    recompresses, so iterating m = 1..M costs O(M n log n) total.
    """

    def __init__(self, codes1, codes2, ok1=None, ok2=None):
        n1 = len(codes1)
        joint = np.concatenate([codes1, codes2])
        if joint.size >= 2**31:
            raise ComputationError("samples too long for the window kernel")
        _, inv = np.unique(joint, return_inverse=True)
        inv = inv.reshape(-1).astype(np.int64, copy=False)
        self._inv1 = inv[:n1]
        self._inv2 = inv[n1:]
        self._base = int(inv.max()) + 1 if inv.size else 1
        self._okpos1 = ok1
        self._okpos2 = ok2
        self.m = 1
        self.r1 = self._inv1.copy()
        self.r2 = self._inv2.copy()
        self.ok1 = None if ok1 is None else ok1.copy()
        self.ok2 = None if ok2 is None else ok2.copy()
        self.space = self._base

    def advance(self) -> None:
        """Extend from m-windows to (m+1)-windows."""
        new1 = self.r1[:-1] * self._base + self._inv1[self.m :]
        new2 = self.r2[:-1] * self._base + self._inv2[self.m :]
        _, inv = np.unique(np.concatenate([new1, new2]), return_inverse=True)
        inv = inv.reshape(-1).astype(np.int64, copy=False)
        self.r1 = inv[: new1.size]
        self.r2 = inv[new1.size :]
        self.space = (int(inv.max()) + 1) if inv.size else 1
        if self.ok1 is not None:
            self.ok1 = self.ok1[:-1] & self._okpos1[self.m :]
            self.ok2 = self.ok2[:-1] & self._okpos2[self.m :]
        self.m += 1

    def term_numerator(self) -> tuple[int, int, int]:
        """(sum_B |c1*W2 - c2*W1|, W1, W2) for the current m, in-budget only.

        The integer numerator keeps the L1 term exact up to one final
        division: T = num / (W1*W2).  num == 2*W1*W2 iff the occupied
        (in-budget) cells of the two samples are disjoint with full mass.
        """
        w1, w2 = self.r1, self.r2
        if self.ok1 is not None:
            w1 = w1[self.ok1]
            w2 = w2[self.ok2]
        c1 = np.bincount(w1, minlength=self.space)
        c2 = np.bincount(w2, minlength=self.space)
        kw1 = self.r1.size
        kw2 = self.r2.size
        num = int(np.abs(c1 * kw2 - c2 * kw1).sum())
        return num, kw1, kw2


def _level_inputs(values1, values2, l, family, cells):
    """Position codes for both samples at level l, plus unit-budget masks."""
    c1 = position_codes(values1, l, family)
    c2 = position_codes(values2, l, family)
    if cells == "all":
        return c1, c2, None, None
    cpa = cells_per_axis(l, family)
    ok1 = (c1 >= 0) & (c1 < cpa)
    ok2 = (c2 >= 0) & (c2 < cpa)
    return c1, c2, np.asarray(ok1, dtype=bool), np.asarray(ok2, dtype=bool)


def term(x1, x2, m: int, l: int, family: str = "dyadic") -> float:
    """T^{m,l}: the L1 gap between window frequencies over one partition."""
    if m < 1 or l < 1:
        raise InputError(f"m and l must be >= 1, got m={m}, l={l}")
    a = as_sample(x1)
    b = as_sample(x2)
    n1, n2 = len(a), len(b)
    if n1 < m and n2 < m:
        return 0.0
    if n1 < m or n2 < m:
        return 1.0
    c1, c2, _, _ = _level_inputs(a.values, b.values, l, family, "all")
    kern = _JointWindows(c1, c2)
    for _ in range(m - 1):
        kern.advance()
    num, w1, w2 = kern.term_numerator()
    return num / (w1 * w2)


@dataclass(frozen=True)
class DistanceBreakdown:
    """Per-dimension decomposition of one exact distance evaluation."""

    value: float
    per_m: tuple[tuple[int, float], ...]
    length_band: float
    band_range: tuple[int, int] | None
    s_min: float | None
    levels: int
    m_evaluated: int
    dropped_tail_bound: float


def exact_breakdown(
    x1, x2, m_cap: int = M_CAP_DEFAULT, family: str = "dyadic"
) -> DistanceBreakdown:
    """Evaluate the exact empirical distributional distance, with breakdown.

    Per dimension m the scale sum is sum_{l<=L} w_l T^{m,l} + w_L T^{m,L}
    with L the stabilisation level; this equals the infinite scale sum
    exactly.  Dimensions where the two samples share no window cell at some
    level contribute a closed form from there on.  For dimensions between the
    two sample lengths every term is 1, giving the closed-form length band
    2**-min - 2**-max.  The dropped region beyond m_cap is bounded, not
    computed.
    """
    a = as_sample(x1)
    b = as_sample(x2)
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise InputError("distance requires nonempty samples")
    if m_cap < 1:
        raise InputError(f"m_cap must be >= 1, got {m_cap}")
    sep = _s_min(a, b)
    levels = stabilization_level(sep, family)
    n_lo, n_hi = min(n1, n2), max(n1, n2)
    m_run = min(n_lo, m_cap)

    pieces: list[tuple[int, float]] = []
    active = m_run
    for l in range(1, levels + 1):
        if active == 0:
            break
        w_l = weight(l)
        last = l == levels
        c1, c2, _, _ = _level_inputs(a.values, b.values, l, family, "all")
        kern = _JointWindows(c1, c2)
        for m in range(1, active + 1):
            if m > 1:
                kern.advance()
            num, kw1, kw2 = kern.term_numerator()
            if num == 2 * kw1 * kw2:
                # no shared cell at (m, l): every deeper level and higher
                # dimension is disjoint too, so the remaining scale mass is
                # 2 * sum_{l'>=l} w_l' (doubled last term included)
                rest = 2.0 * 2.0 ** (-(l - 1))
                for mm in range(m, active + 1):
                    pieces.append((mm, weight(mm) * rest))
                active = m - 1
                break
            t = num / (kw1 * kw2)
            pieces.append((m, weight(m) * w_l * t))
            if last:
                pieces.append((m, weight(m) * w_l * t))

    if n_lo != n_hi:
        band = 2.0 ** -n_lo - 2.0 ** -n_hi
        band_range = (n_lo + 1, n_hi)
    else:
        band = 0.0
        band_range = None
    dropped = 2.0 * (2.0 ** -m_run - 2.0 ** -n_lo) if m_run < n_lo else 0.0

    total = math.fsum([v for _, v in pieces] + [band])
    agg: dict[int, list[float]] = {}
    for m, v in pieces:
        agg.setdefault(m, []).append(v)
    per_m = tuple((m, math.fsum(vs)) for m, vs in sorted(agg.items()))
    return DistanceBreakdown(
        value=total,
        per_m=per_m,
        length_band=band,
        band_range=band_range,
        s_min=sep,
        levels=levels,
        m_evaluated=m_run,
        dropped_tail_bound=dropped,
    )


def emp_distance_exact(
    x1, x2, m_cap: int = M_CAP_DEFAULT, family: str = "dyadic"
) -> float:
    """Exact empirical distributional distance between two samples."""
    return exact_breakdown(x1, x2, m_cap=m_cap, family=family).value


def _s_min(a: Sample, b: Sample):
    from .partitions import s_min

    return s_min(a, b)


@dataclass(frozen=True)
class TruncationSchedule:
    """Finite evaluation budget for the truncated distance.

    ``cells="unit"`` restricts each partition to the cells tiling [0, 1)^m
    (cell_side**-m of them); windows containing out-of-range values are
    silently excluded.  ``cells="all"`` keeps every occupied cell, which
    turns the truncated distance into a plain partial sum of the exact one.
    """

    m_max: int
    l_max: int
    cells: str = "unit"
    family: str = "dyadic"

    def __post_init__(self):
        if self.m_max < 1 or self.l_max < 1:
            raise InputError(
                f"m_max and l_max must be >= 1, got ({self.m_max}, {self.l_max})"
            )
        if self.cells not in ("unit", "all"):
            raise InputError(f"unknown cell budget rule {self.cells!r}")

    @property
    def cell_bound(self) -> int | None:
        """b_n: the largest cell-set size over the schedule (None = unbounded)."""
        if self.cells == "all":
            return None
        return cells_per_axis(self.l_max, self.family) ** self.m_max


def _valid_window_count(ok: np.ndarray, m: int) -> int:
    """Number of length-m windows whose positions are all in range."""
    if ok.size < m:
        return 0
    run = np.cumsum(np.concatenate([[0], ok.astype(np.int64)]))
    return int(np.count_nonzero(run[m:] - run[:-m] == m))


def emp_distance_truncated(x1, x2, schedule: TruncationSchedule) -> float:
    """Truncated empirical distance over the schedule's (m, l, cell) budget."""
    a = as_sample(x1)
    b = as_sample(x2)
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise InputError("distance requires nonempty samples")
    fam = schedule.family
    pieces = []
    for l in range(1, schedule.l_max + 1):
        w_l = weight(l)
        c1, c2, ok1, ok2 = _level_inputs(a.values, b.values, l, fam, schedule.cells)
        kern = None
        for m in range(1, schedule.m_max + 1):
            kw1 = max(n1 - m + 1, 0)
            kw2 = max(n2 - m + 1, 0)
            if kw1 == 0 and kw2 == 0:
                break
            if kw1 > 0 and kw2 > 0:
                if kern is None:
                    kern = _JointWindows(c1, c2, ok1, ok2)
                while kern.m < m:
                    kern.advance()
                num, _, _ = kern.term_numerator()
                t = num / (kw1 * kw2)
            elif kw2 > 0:
                t = 1.0 if ok2 is None else _valid_window_count(ok2, m) / kw2
            else:
                t = 1.0 if ok1 is None else _valid_window_count(ok1, m) / kw1
            pieces.append(weight(m) * w_l * t)
    return math.fsum(pieces)


def _count_tuples(codes: list, m: int) -> dict[tuple, int]:
    counts: dict[tuple, int] = {}
    for i in range(len(codes) - m + 1):
        key = tuple(codes[i : i + m])
        counts[key] = counts.get(key, 0) + 1
    return counts


def emp_distance_oracle(
    x1, x2, l_big: int = 20, m_big: int = 20, family: str = "dyadic"
) -> float:
    """Brute-force partial sum of the distance, for testing.

    Enumerates every occupied cell of every partition up to (m_big, l_big)
    with no stabilisation shortcut; differs from the full sum by at most
    2*(2**-l_big + 2**-m_big).  Dict counting end to end, independent of the
    shared-rank kernel.
    """
    a = as_sample(x1)
    b = as_sample(x2)
    n1, n2 = len(a), len(b)
    pieces = []
    for l in range(1, l_big + 1):
        codes1 = position_codes(a.values, l, family).tolist()
        codes2 = position_codes(b.values, l, family).tolist()
        w_l = weight(l)
        for m in range(1, m_big + 1):
            kw1 = max(n1 - m + 1, 0)
            kw2 = max(n2 - m + 1, 0)
            if kw1 == 0 and kw2 == 0:
                continue
            f1 = _count_tuples(codes1, m) if kw1 else {}
            f2 = _count_tuples(codes2, m) if kw2 else {}
            t = 0.0
            for key in set(f1) | set(f2):
                p1 = f1.get(key, 0) / kw1 if kw1 else 0.0
                p2 = f2.get(key, 0) / kw2 if kw2 else 0.0
                t += abs(p1 - p2)
            pieces.append(weight(m) * w_l * t)
    return math.fsum(pieces)


@dataclass(eq=False)
class DistanceMatrix:
    """Symmetric pairwise-distance matrix plus provenance metadata.

    ``get`` is the instrumented accessor the clustering algorithms read
    through; ``lookup_count`` tracks how many reads were made since the last
    reset (not thread-safe, reset before measuring).
    """

    values: np.ndarray
    estimator: str = "exact"
    schedule: TruncationSchedule | None = None
    unit_range: bool = True
    lookup_count: int = field(default=0, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InputError(f"distance matrix must be square, got {v.shape}")
        self.values = v

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def get(self, i: int, j: int) -> float:
        self.lookup_count += 1
        return float(self.values[i, j])

    def reset_lookups(self) -> None:
        self.lookup_count = 0


def distance_matrix(
    samples,
    estimator: str = "exact",
    schedule: TruncationSchedule | None = None,
    m_cap: int = M_CAP_DEFAULT,
    family: str = "dyadic",
) -> DistanceMatrix:
    """Pairwise distances between all samples (N*(N-1)/2 evaluations)."""
    xs = [as_sample(s) for s in samples]
    if not xs:
        raise InputError("distance matrix requires at least one sample")
    if estimator == "truncated":
        if schedule is None:
            raise InputError("truncated estimator requires a TruncationSchedule")
    elif estimator != "exact":
        raise InputError(f"unknown estimator {estimator!r}")
    n = len(xs)
    vals = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            try:
                if estimator == "exact":
                    d = emp_distance_exact(xs[i], xs[j], m_cap=m_cap, family=family)
                else:
                    d = emp_distance_truncated(xs[i], xs[j], schedule)
            except InputError:
                raise
            except Exception as exc:
                raise ComputationError(
                    f"distance evaluation failed for pair ({i}, {j}): {exc}"
                ) from exc
            vals[i, j] = vals[j, i] = d
    unit = all(
        len(x) == 0 or (x.values.min() >= 0.0 and x.values.max() <= 1.0) for x in xs
    )
    return DistanceMatrix(vals, estimator=estimator, schedule=schedule, unit_range=unit)
