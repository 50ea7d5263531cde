"""File formats: sample files, dataset manifests, experiment configs.

Sample files are newline-delimited decimal floats (UTF-8); blank lines and
lines starting with '#' are ignored.  Values are written with shortest
round-trip formatting, so write -> read is bit-identical.

Manifests and experiment configs are JSON.  Schemas:

  manifest.json
    {"samples": ["relative/or/absolute.txt", ...],
     "labels": [1, 1, 2, ...],            # optional, one per sample
     "value_range": [0.0, 1.0]}           # optional declaration

  experiment.json
    {"layout": [{"process": {...}, "count": 3}, ...],
     "coupling": "independent" | "shifted",
     "lags": [[0, 1, 2], ...],            # optional, shifted mode
     "lengths": [500, 2000, 8000],
     "trials": 100,
     "algorithm": "known_k" | "threshold",
     "k": 2,                              # known_k; default = #clusters
     "delta": 0.3,                        # threshold; omit to derive from n
     "estimator": "exact" | "truncated",
     "m_max": 2, "l_max": 2,              # truncated; omit to derive from n
     "seed": 1234,
     "out": "rates.csv"}                  # optional default output path

  process objects
    {"kind": "iid_uniform"}
    {"kind": "iid_bernoulli", "p": 0.5, "levels": [0.25, 0.75]}
    {"kind": "markov2", "p01": 0.2, "p10": 0.8, "emit0": 0.25, "emit1": 0.75}
    {"kind": "hmm", "transition": [[...], ...], "means": [...], "widths": [...]}
    {"kind": "rotation", "alpha": 0.618}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError
from .partitions import Sample
from .processes import (
    CouplingSpec,
    HiddenMarkov,
    IIDBernoulli,
    IIDUniform,
    Markov2,
    ProcessSpec,
    Rotation,
)


def read_sample(path) -> Sample:
    """Parse one sample file; errors carry file and line diagnostics."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read sample file {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            values.append(float(stripped))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: not a number: {stripped!r}") from exc
    try:
        return Sample(values)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def write_sample(path, sample: Sample) -> None:
    path = Path(path)
    lines = [repr(float(v)) for v in sample.values]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


@dataclass(frozen=True)
class DatasetManifest:
    """Resolved list of sample sources plus optional ground truth."""

    paths: tuple[Path, ...]
    labels: tuple[int, ...] | None = None
    value_range: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.paths:
            raise InputError("manifest lists no samples")
        if self.labels is not None and len(self.labels) != len(self.paths):
            raise InputError(
                f"manifest has {len(self.paths)} samples but {len(self.labels)} labels"
            )

    def read_samples(self) -> list[Sample]:
        return [read_sample(p) for p in self.paths]


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object at top level")
    return data


def load_manifest(path) -> DatasetManifest:
    """Load a manifest; sample paths resolve relative to the manifest file."""
    path = Path(path)
    data = load_json(path)
    try:
        entries = data["samples"]
    except KeyError:
        raise InputError(f"{path}: manifest needs a 'samples' list") from None
    if not isinstance(entries, list) or not entries:
        raise InputError(f"{path}: 'samples' must be a nonempty list")
    base = path.parent
    resolved = []
    for entry in entries:
        p = Path(entry)
        p = p if p.is_absolute() else base / p
        if not p.is_file():
            raise InputError(f"{path}: sample file not found: {p}")
        resolved.append(p)
    labels = data.get("labels")
    if labels is not None:
        labels = tuple(int(v) for v in labels)
    rng = data.get("value_range")
    if rng is not None:
        rng = (float(rng[0]), float(rng[1]))
    return DatasetManifest(tuple(resolved), labels, rng)


def write_manifest(path, names, labels=None, value_range=None) -> None:
    payload: dict = {"samples": list(names)}
    if labels is not None:
        payload["labels"] = list(labels)
    if value_range is not None:
        payload["value_range"] = list(value_range)
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


_PROCESS_KINDS = {
    "iid_uniform": IIDUniform,
    "iid_bernoulli": IIDBernoulli,
    "markov2": Markov2,
    "hmm": HiddenMarkov,
    "rotation": Rotation,
}


def process_from_dict(data: dict) -> ProcessSpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError(f"process spec needs a 'kind' field, got {data!r}")
    kind = data["kind"]
    if kind not in _PROCESS_KINDS:
        raise InputError(f"unknown process kind {kind!r}")
    args = {k: v for k, v in data.items() if k != "kind"}
    try:
        if kind == "iid_bernoulli" and "levels" in args:
            args["levels"] = tuple(args["levels"])
        if kind == "hmm":
            args["transition"] = tuple(tuple(row) for row in args["transition"])
            args["means"] = tuple(args["means"])
            args["widths"] = tuple(args["widths"])
        return _PROCESS_KINDS[kind](**args)
    except TypeError as exc:
        raise InputError(f"bad parameters for process {kind!r}: {exc}") from exc


def coupling_from_dict(data: dict) -> CouplingSpec:
    try:
        raw_layout = data["layout"]
    except KeyError:
        raise InputError("config needs a 'layout' list") from None
    if not isinstance(raw_layout, list) or not raw_layout:
        raise InputError("'layout' must be a nonempty list")
    layout = []
    for entry in raw_layout:
        if "process" not in entry:
            raise InputError(f"layout entry needs a 'process': {entry!r}")
        layout.append((process_from_dict(entry["process"]), int(entry.get("count", 1))))
    lags = data.get("lags")
    if lags is not None:
        lags = tuple(tuple(int(v) for v in row) for row in lags)
    return CouplingSpec(
        layout=tuple(layout),
        mode=data.get("coupling", "independent"),
        lags=lags,
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """One consistency-rate experiment: dataset recipe, algorithm, seeds."""

    coupling: CouplingSpec
    lengths: tuple[int, ...]
    trials: int
    algorithm: str = "known_k"
    k: int | None = None
    delta: float | None = None
    estimator: str = "exact"
    m_max: int | None = None
    l_max: int | None = None
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise InputError(f"trials must be >= 1, got {self.trials}")
        if not self.lengths:
            raise InputError("need at least one sample length")
        if any(b <= a for a, b in zip(self.lengths, self.lengths[1:])):
            raise InputError(f"lengths must be strictly increasing: {self.lengths}")
        if self.algorithm not in ("known_k", "threshold"):
            raise InputError(f"unknown algorithm {self.algorithm!r}")
        if self.estimator not in ("exact", "truncated"):
            raise InputError(f"unknown estimator {self.estimator!r}")


def load_experiment_config(path) -> ExperimentConfig:
    data = load_json(path)
    return experiment_config_from_dict(data)


def experiment_config_from_dict(data: dict) -> ExperimentConfig:
    coupling = coupling_from_dict(data)
    try:
        lengths = tuple(int(v) for v in data["lengths"])
        trials = int(data["trials"])
    except KeyError as exc:
        raise InputError(f"config needs {exc.args[0]!r}") from None
    return ExperimentConfig(
        coupling=coupling,
        lengths=lengths,
        trials=trials,
        algorithm=data.get("algorithm", "known_k"),
        k=None if data.get("k") is None else int(data["k"]),
        delta=None if data.get("delta") is None else float(data["delta"]),
        estimator=data.get("estimator", "exact"),
        m_max=None if data.get("m_max") is None else int(data["m_max"]),
        l_max=None if data.get("l_max") is None else int(data["l_max"]),
        seed=int(data.get("seed", 0)),
        out=data.get("out"),
    )
