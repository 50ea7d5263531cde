"""Seeded synthetic generators of stationary ergodic processes.

Every generator is deterministic given its seed: streams come from numpy's
PCG64 so results are reproducible bit-for-bit on one platform.  Dataset
generation derives one child stream per sample (or per cluster in shifted
mode) from the master seed via SeedSequence spawning, ignoring the per-spec
seeds; that is the documented stream-splitting rule.

Chains and hidden-Markov processes start from their stationary law, so the
emitted paths are stationary from the first step.  Emission values live in
[0, 1] to keep the threshold-clustering assumptions satisfiable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clustering import Clustering
from .errors import InputError
from .partitions import Sample


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_prob(name: str, value: float) -> None:
    if not 0 < value < 1:
        raise InputError(f"{name} must be in (0, 1), got {value}")


def _check_unit(name: str, value: float) -> None:
    if not 0 <= value <= 1:
        raise InputError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class IIDUniform:
    """Independent draws from the uniform law on [0, 1)."""

    seed: int = 0

    def path(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.random(n)


@dataclass(frozen=True)
class IIDBernoulli:
    """Independent two-level draws: P(levels[1]) = p."""

    p: float
    levels: tuple[float, float] = (0.0, 1.0)
    seed: int = 0

    def __post_init__(self):
        _check_prob("p", self.p)
        for v in self.levels:
            _check_unit("level", v)

    def path(self, n: int, rng: np.random.Generator) -> np.ndarray:
        bits = rng.random(n) < self.p
        return np.where(bits, self.levels[1], self.levels[0])


@dataclass(frozen=True)
class Markov2:
    """Two-state Markov chain started from its stationary law.

    p01 and p10 are the switch probabilities; state s emits the value
    emit_s.  Stationary law: P(state 0) = p10 / (p01 + p10).
    """

    p01: float
    p10: float
    emit0: float = 0.0
    emit1: float = 1.0
    seed: int = 0

    def __post_init__(self):
        _check_prob("p01", self.p01)
        _check_prob("p10", self.p10)
        _check_unit("emit0", self.emit0)
        _check_unit("emit1", self.emit1)

    @property
    def stationary0(self) -> float:
        return self.p10 / (self.p01 + self.p10)

    def path(self, n: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(n + 1)
        states = np.empty(n, dtype=bool)
        s = u[0] < (1.0 - self.stationary0)
        for t in range(n):
            states[t] = s
            s = u[t + 1] < (self.p01 if not s else 1.0 - self.p10)
        return np.where(states, self.emit1, self.emit0)


@dataclass(frozen=True)
class HiddenMarkov:
    """Hidden Markov process: stationary hidden chain, uniform emissions.

    State s emits uniformly on [means[s] - widths[s]/2, means[s] + widths[s]/2],
    which must sit inside [0, 1].  All transition entries must be strictly
    positive (irreducible aperiodic), so the process is alpha-mixing.
    """

    transition: tuple[tuple[float, ...], ...]
    means: tuple[float, ...]
    widths: tuple[float, ...]
    seed: int = 0

    def __post_init__(self):
        t = np.asarray(self.transition, dtype=np.float64)
        k = t.shape[0] if t.ndim == 2 else 0
        if k == 0 or t.shape != (k, k):
            raise InputError("transition must be a square matrix")
        if np.any(t <= 0) or np.any(t >= 1):
            raise InputError("transition entries must be in (0, 1)")
        if not np.allclose(t.sum(axis=1), 1.0, atol=1e-12):
            raise InputError("transition rows must sum to 1")
        if len(self.means) != k or len(self.widths) != k:
            raise InputError("need one emission mean and width per state")
        for mu, w in zip(self.means, self.widths):
            if w < 0 or mu - w / 2 < 0 or mu + w / 2 > 1:
                raise InputError(
                    f"emission support [{mu - w / 2}, {mu + w / 2}] leaves [0, 1]"
                )

    def stationary(self) -> np.ndarray:
        t = np.asarray(self.transition, dtype=np.float64)
        k = t.shape[0]
        a = np.vstack([t.T - np.eye(k), np.ones(k)])
        b = np.concatenate([np.zeros(k), [1.0]])
        pi, *_ = np.linalg.lstsq(a, b, rcond=None)
        return np.clip(pi, 0.0, None) / np.clip(pi, 0.0, None).sum()

    def path(self, n: int, rng: np.random.Generator) -> np.ndarray:
        t = np.asarray(self.transition, dtype=np.float64)
        cum = np.cumsum(t, axis=1)
        u = rng.random(n + 1)
        emit_u = rng.random(n)
        k = cum.shape[0]
        pi_cum = np.cumsum(self.stationary())
        s = min(int(np.searchsorted(pi_cum, u[0])), k - 1)
        means = np.asarray(self.means)
        widths = np.asarray(self.widths)
        out = np.empty(n)
        for i in range(n):
            out[i] = means[s] + (emit_u[i] - 0.5) * widths[s]
            s = min(int(np.searchsorted(cum[s], u[i + 1])), k - 1)
        return out


@dataclass(frozen=True)
class Rotation:
    """Irrational rotation: X_t = frac(U0 + t*alpha), U0 uniform from the seed.

    Stationary and ergodic but not mixing; exercises clustering beyond the
    mixing assumptions.
    """

    alpha: float
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InputError(f"alpha must be a positive real, got {self.alpha}")

    def path(self, n: int, rng: np.random.Generator) -> np.ndarray:
        u0 = rng.random()
        return (u0 + self.alpha * np.arange(1, n + 1)) % 1.0


ProcessSpec = IIDUniform | IIDBernoulli | Markov2 | HiddenMarkov | Rotation


def generate(spec: ProcessSpec, n: int) -> Sample:
    """One path of length n, deterministic given (spec, spec.seed, n)."""
    if n < 1:
        raise InputError(f"path length must be >= 1, got {n}")
    return Sample(spec.path(n, _rng(spec.seed)))


@dataclass(frozen=True)
class CouplingSpec:
    """How a dataset's samples relate: cluster layout plus dependence mode.

    ``layout`` lists (process, count) per target cluster.  In independent
    mode every sample gets its own stream.  In shifted mode all samples of a
    cluster are windows of one shared realization, offset by ``lags``
    (default 0, 1, 2, ...), which makes them jointly stationary and strongly
    dependent.
    """

    layout: tuple[tuple[ProcessSpec, int], ...]
    mode: str = "independent"
    lags: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if not self.layout:
            raise InputError("coupling needs at least one cluster")
        for _, count in self.layout:
            if count < 1:
                raise InputError(f"cluster count must be >= 1, got {count}")
        if self.mode not in ("independent", "shifted"):
            raise InputError(f"unknown coupling mode {self.mode!r}")
        if self.lags is not None:
            if len(self.lags) != len(self.layout):
                raise InputError("need one lag tuple per cluster")
            for (_, count), lag in zip(self.layout, self.lags):
                if len(lag) != count:
                    raise InputError("need one lag per sample in each cluster")
                if any(v < 0 for v in lag):
                    raise InputError("lags must be nonnegative")

    @property
    def n_samples(self) -> int:
        return sum(count for _, count in self.layout)

    def cluster_lags(self, idx: int) -> tuple[int, ...]:
        if self.lags is not None:
            return self.lags[idx]
        return tuple(range(self.layout[idx][1]))


def generate_dataset(
    coupling: CouplingSpec, n: int, master_seed
) -> tuple[list[Sample], Clustering]:
    """Samples plus their ground-truth partition.

    master_seed may be an int or a numpy SeedSequence; child streams are
    spawned from it in layout order.
    """
    if n < 1:
        raise InputError(f"sample length must be >= 1, got {n}")
    root = (
        master_seed
        if isinstance(master_seed, np.random.SeedSequence)
        else np.random.SeedSequence(master_seed)
    )
    samples: list[Sample] = []
    labels: list[int] = []
    if coupling.mode == "independent":
        children = iter(root.spawn(coupling.n_samples))
        for label, (spec, count) in enumerate(coupling.layout, start=1):
            for _ in range(count):
                samples.append(Sample(spec.path(n, _rng(next(children)))))
                labels.append(label)
    else:
        children = iter(root.spawn(len(coupling.layout)))
        for idx, (spec, count) in enumerate(coupling.layout, start=1):
            lags = coupling.cluster_lags(idx - 1)
            horizon = n + max(lags)
            realization = spec.path(horizon, _rng(next(children)))
            for lag in lags:
                samples.append(Sample(realization[lag : lag + n]))
                labels.append(idx)
    return samples, Clustering(tuple(labels))
