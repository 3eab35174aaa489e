"""Command-line pipeline: generate, split, inject, detect, evaluate, stats.

Every stage reads and writes the CSV interchange format, so stages chain:
generate -> split -> inject -> detect -> evaluate, with stats applicable to
any dataset file. All stages are deterministic given their flags and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dataset_io, metrics, stats
from .edgebank import EdgeBank
from .events import AnomalyType, SplitSpec, chronological_split, organic_split
from .generator import GeneratorConfig, generate
from .injection import InjectionConfig, inject
from .metrics import ScoredSet

__all__ = ["build_parser", "cli_main", "main"]

_DETECTORS = ("edgebank-inf", "edgebank-tw")


def _cmd_generate(args: argparse.Namespace) -> int:
    with open(args.config) as handle:
        data = json.load(handle)
    if args.seed is not None:
        data["seed"] = args.seed
    config = GeneratorConfig.from_dict(data)
    log = generate(config)
    dataset_io.write_csv(log, args.out)
    print(f"wrote {len(log)} events to {args.out}")
    return 0


def _parse_split(text: str) -> SplitSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--split expects three comma-separated fractions, got {text!r}")
    return SplitSpec(*(float(p) for p in parts))


def _cmd_split(args: argparse.Namespace) -> int:
    log = dataset_io.read_csv(args.infile)
    if args.organic:
        train, val, test = organic_split(log)
    else:
        train, val, test = chronological_split(log, _parse_split(args.split))
    prefix = Path(args.out)
    for name, part in (("train", train), ("val", val), ("test", test)):
        path = prefix.parent / f"{prefix.name}.{name}.csv"
        dataset_io.write_csv(part, path)
        print(f"wrote {len(part)} events to {path}")
    return 0


def _cmd_inject(args: argparse.Namespace) -> int:
    log = dataset_io.read_csv(args.infile)
    config = InjectionConfig(
        anomaly_type=AnomalyType.from_short_name(args.type),
        rate=args.rate,
        candidate_count=args.candidates,
        window_size=args.sc_window,
        seed=args.seed,
    )
    augmented = inject(log, config)
    dataset_io.write_csv(augmented, args.out)
    print(
        f"wrote {len(augmented)} events ({len(augmented) - len(log)} injected) to {args.out}"
    )
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    mode = "infinite" if args.detector == "edgebank-inf" else "time_window"
    bank = EdgeBank(
        mode=mode,
        window_duration=args.window_duration,
        directed=not args.undirected,
    )
    for path in args.train:
        bank.fit(dataset_io.read_csv(path))
    eval_log = dataset_io.read_csv(args.infile)
    scores, type_codes = bank.evaluate_stream(
        eval_log, memorize_anomalous=not args.benign_memory_only
    )
    scored = ScoredSet.from_labels(scores, type_codes)
    dataset_io.write_scores_csv(scored, args.out)
    print(f"wrote {len(scored)} scores to {args.out}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    runs = [dataset_io.read_scores_csv(p) for p in args.scores]
    rows = metrics.per_type_report(runs, k=args.k)
    metrics.write_report_csv(rows, args.out)
    print(metrics.format_report(rows))
    print(f"wrote report to {args.out}")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    log = dataset_io.read_csv(args.infile)
    report = stats.compute_stats(log)
    stats.write_stats_report(report, args.out_dir)
    print(f"wrote statistics to {args.out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctdg-bench",
        description="Benchmark pipeline for link anomaly detection in "
        "continuous-time dynamic graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic dynamic graph")
    p.add_argument("--config", required=True, help="generator config JSON")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", required=True, help="output dataset CSV")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("split", help="split a dataset into train/val/test")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--split", default="0.70,0.15,0.15", help="fractions, e.g. 0.7,0.15,0.15")
    p.add_argument(
        "--organic",
        action="store_true",
        help="split around labeled anomalies instead of by fractions",
    )
    p.add_argument("--out", required=True, help="output prefix; writes PREFIX.{train,val,test}.csv")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("inject", help="inject typed anomalies into a split")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--type", required=True, choices=["t", "c", "tc", "sc", "tsc"])
    p.add_argument("--rate", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--candidates", type=int, default=10, help="contextual candidate pool size")
    p.add_argument("--sc-window", type=int, default=20, help="structural temporal window")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_inject)

    p = sub.add_parser("detect", help="stream a detector over a split")
    p.add_argument(
        "--train",
        nargs="+",
        required=True,
        help="history splits memorized before streaming (in order)",
    )
    p.add_argument("--in", dest="infile", required=True, help="split to score")
    p.add_argument("--detector", choices=_DETECTORS, default="edgebank-inf")
    p.add_argument("--window-duration", type=float, default=None)
    p.add_argument("--undirected", action="store_true")
    p.add_argument(
        "--benign-memory-only",
        action="store_true",
        help="do not memorize anomalous events while streaming",
    )
    p.add_argument("--out", required=True, help="output score CSV (score,label,type)")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("evaluate", help="per-type metric report from score files")
    p.add_argument("--scores", nargs="+", required=True, help="one file per run/seed")
    p.add_argument("--k", type=int, default=None, help="recall cutoff (default: anomaly count)")
    p.add_argument("--out", required=True, help="output report CSV")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("stats", help="dataset consistency diagnostics")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_stats)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
