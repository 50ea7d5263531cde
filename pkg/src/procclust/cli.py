"""Command-line front end.

Subcommands: dist, cluster, gen, experiment, bound.  Results go to standard
output, progress and warnings to standard error.  Exit codes: 0 success,
2 input/config error, 3 computation error, 4 output I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import Alg2Params, MixingSchedule, default_schedule, error_bound
from .clustering import (
    Clustering,
    cluster_known_k,
    cluster_threshold,
    partition_equal,
)
from .distance import (
    TruncationSchedule,
    distance_matrix,
    emp_distance_truncated,
    exact_breakdown,
)
from .errors import ComputationError, InputError
from .experiment import rates_csv, run_experiment, write_rates_csv
from .io import (
    coupling_from_dict,
    load_experiment_config,
    load_json,
    load_manifest,
    read_sample,
    write_manifest,
    write_sample,
)
from .processes import generate_dataset


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procclust",
        description="Cluster time-series samples by their generating process.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="distance between two sample files")
    p_dist.add_argument("file1")
    p_dist.add_argument("file2")
    p_dist.add_argument("--m-max", type=int, help="truncated-sum dimension budget")
    p_dist.add_argument("--l-max", type=int, help="truncated-sum scale budget")
    p_dist.add_argument("--family", choices=("dyadic", "inverse"), default="dyadic")
    p_dist.add_argument("--json", action="store_true", help="machine-readable output")
    p_dist.set_defaults(func=cmd_dist)

    p_cluster = sub.add_parser("cluster", help="cluster the samples of a manifest")
    p_cluster.add_argument("manifest")
    p_cluster.add_argument("--k", type=int, help="known number of clusters")
    p_cluster.add_argument("--delta", type=float, help="threshold level")
    p_cluster.add_argument(
        "--mixing", help="mixing bound (exp:c,r | poly:c,s | zero) to derive delta"
    )
    p_cluster.add_argument("--estimator", choices=("exact", "truncated"))
    p_cluster.add_argument("--m-max", type=int)
    p_cluster.add_argument("--l-max", type=int)
    p_cluster.add_argument("--out", help="also write the assignment CSV here")
    p_cluster.set_defaults(func=cmd_cluster)

    p_gen = sub.add_parser("gen", help="generate a synthetic dataset")
    p_gen.add_argument("config", help="JSON with layout/coupling (and optional n, seed)")
    p_gen.add_argument("--out-dir", required=True)
    p_gen.add_argument("--n", type=int, help="sample length (overrides config)")
    p_gen.add_argument("--seed", type=int, help="master seed (overrides config)")
    p_gen.set_defaults(func=cmd_gen)

    p_exp = sub.add_parser("experiment", help="run a consistency-rate experiment")
    p_exp.add_argument("config")
    p_exp.add_argument("--out", help="CSV path (overrides config; default stdout)")
    p_exp.set_defaults(func=cmd_experiment)

    p_bound = sub.add_parser("bound", help="evaluate the clustering error bound")
    p_bound.add_argument("--n", type=int, required=True, help="minimal sample length")
    p_bound.add_argument("--samples", type=int, default=2, help="number of samples N")
    p_bound.add_argument("--mixing", required=True, help="exp:c,r | poly:c,s | zero")
    p_bound.add_argument("--epsilon-rho", type=float, required=True)
    p_bound.add_argument(
        "--default-schedule",
        action="store_true",
        help="derive m_n, l_n, b_n, q_n, delta_n from n",
    )
    p_bound.add_argument("--m-n", type=int)
    p_bound.add_argument("--l-n", type=int)
    p_bound.add_argument("--b-n", type=int)
    p_bound.add_argument("--q-n", type=int)
    p_bound.add_argument("--delta", type=float)
    p_bound.set_defaults(func=cmd_bound)
    return parser


def cmd_dist(args) -> int:
    x1 = read_sample(args.file1)
    x2 = read_sample(args.file2)
    bd = exact_breakdown(x1, x2, family=args.family)
    truncated = None
    if args.m_max is not None or args.l_max is not None:
        if args.m_max is None or args.l_max is None:
            raise InputError("--m-max and --l-max must be given together")
        sched = TruncationSchedule(args.m_max, args.l_max, family=args.family)
        truncated = emp_distance_truncated(x1, x2, sched)
    if args.json:
        payload = {
            "n1": len(x1),
            "n2": len(x2),
            "s_min": bd.s_min,
            "levels": bd.levels,
            "per_m": [[m, v] for m, v in bd.per_m],
            "length_band": bd.length_band,
            "exact": bd.value,
        }
        if truncated is not None:
            payload["truncated"] = truncated
            payload["m_max"] = args.m_max
            payload["l_max"] = args.l_max
        print(json.dumps(payload))
        return 0
    print(f"n1={len(x1)} n2={len(x2)} s_min={bd.s_min} levels={bd.levels}")
    print("m contribution")
    for m, v in bd.per_m:
        print(f"{m} {v!r}")
    if bd.band_range is not None:
        lo, hi = bd.band_range
        print(f"length band ({lo}..{hi}): {bd.length_band!r}")
    print(f"exact distance: {bd.value!r}")
    if truncated is not None:
        print(
            f"truncated distance (m_max={args.m_max}, l_max={args.l_max}): "
            f"{truncated!r}"
        )
    return 0


def _cluster_csv(clustering: Clustering, manifest) -> str:
    lines = ["# procclust-cluster-v1", "sample,label,source"]
    for i, label in enumerate(clustering.labels):
        lines.append(f"{i + 1},{label},{manifest.paths[i].name}")
    return "\n".join(lines) + "\n"


def cmd_cluster(args) -> int:
    manifest = load_manifest(args.manifest)
    samples = manifest.read_samples()
    n_min = min(len(s) for s in samples)
    if args.k is None and args.delta is None and args.mixing is None:
        raise InputError("choose --k (known k) or --delta/--mixing (threshold)")

    estimator = args.estimator
    if estimator is None:
        estimator = "exact" if args.k is not None else "truncated"
    schedule = None
    if estimator == "truncated":
        if args.m_max is not None and args.l_max is not None:
            schedule = TruncationSchedule(args.m_max, args.l_max)
        else:
            params = default_schedule(n_min)
            schedule = TruncationSchedule(
                args.m_max or params.m_n, args.l_max or params.l_n
            )
    dm = distance_matrix(samples, estimator=estimator, schedule=schedule)

    if args.k is not None:
        if not 1 <= args.k <= len(samples):
            raise InputError(f"--k must be in 1..{len(samples)}, got {args.k}")
        result = cluster_known_k(dm, args.k)
    else:
        delta = args.delta
        if delta is None:
            alpha = MixingSchedule.parse(args.mixing)
            delta = default_schedule(n_min, alpha).delta_n
            print(f"derived delta_n = {delta!r} from n={n_min}", file=sys.stderr)
        result = cluster_threshold(dm, delta)

    for label, members in enumerate(result.clusters(), start=1):
        listed = " ".join(str(i + 1) for i in members)
        print(f"cluster {label}: {listed}")
    if manifest.labels is not None:
        truth = Clustering(tuple(manifest.labels))
        match = partition_equal(result, truth)
        print(f"exact match with manifest labels: {'yes' if match else 'no'}")
    if args.out:
        Path(args.out).write_text(_cluster_csv(result, manifest), encoding="utf-8")
    return 0


def cmd_gen(args) -> int:
    data = load_json(args.config)
    coupling = coupling_from_dict(data)
    n = args.n if args.n is not None else data.get("n")
    if n is None:
        raise InputError("sample length required (--n or 'n' in the config)")
    seed = args.seed if args.seed is not None else int(data.get("seed", 0))
    samples, target = generate_dataset(coupling, int(n), seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for i, sample in enumerate(samples, start=1):
        name = f"sample_{i:03d}.txt"
        write_sample(out_dir / name, sample)
        names.append(name)
    write_manifest(out_dir / "manifest.json", names, labels=target.labels)
    print(out_dir / "manifest.json")
    return 0


def cmd_experiment(args) -> int:
    config = load_experiment_config(args.config)
    rows = run_experiment(
        config,
        progress=lambda row: print(
            f"n={row.n}: {row.exact_recovery_count}/{row.trials} recovered",
            file=sys.stderr,
        ),
    )
    out = args.out or config.out
    if out:
        write_rates_csv(out, rows)
    else:
        sys.stdout.write(rates_csv(rows))
    return 0


def cmd_bound(args) -> int:
    alpha = MixingSchedule.parse(args.mixing)
    if args.default_schedule:
        params = default_schedule(args.n, alpha, samples=args.samples)
    else:
        missing = [
            flag
            for flag, value in (
                ("--m-n", args.m_n),
                ("--l-n", args.l_n),
                ("--b-n", args.b_n),
                ("--q-n", args.q_n),
                ("--delta", args.delta),
            )
            if value is None
        ]
        if missing:
            raise InputError(
                "either pass --default-schedule or all of: " + " ".join(missing)
            )
        params = Alg2Params(
            n=args.n,
            m_n=args.m_n,
            l_n=args.l_n,
            b_n=args.b_n,
            q_n=args.q_n,
            delta_n=args.delta,
            samples=args.samples,
        )
    report = error_bound(params, alpha, args.epsilon_rho)
    print(
        f"params: n={params.n} m_n={params.m_n} l_n={params.l_n} "
        f"b_n={params.b_n} q_n={params.q_n} delta_n={params.delta_n!r} "
        f"samples={params.samples}"
    )
    print(f"gamma(delta_n) = {report.gamma_delta!r}")
    print(f"gamma(epsilon_rho) = {report.gamma_eps!r}")
    print(f"bound raw = {report.raw!r}")
    print(f"bound clamped = {report.clamped!r}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


def run() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
