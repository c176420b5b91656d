"""Command-line entry point: ``qalloc <experiment> [options]``.

Settings are layered: preset, then config file, then explicit flags.
Exit status is 0 on success, 2 for configuration errors and 3 for
failures while running.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, QallocError
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment, write_outputs
from .presets import PRESETS, preset

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _lattice(text: str) -> list:
    try:
        m, n = text.lower().split("x")
        return [int(m), int(n)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MxN, got {text!r}") from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qalloc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with ExperimentConfig fields")
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--seed", type=_u64)
        p.add_argument("--trials", type=int)
        p.add_argument("--out", help="CSV path; summary and .meta.json are written next to it")
        p.add_argument("--workers", type=int, help="worker processes (default: all CPUs)")
        p.add_argument("--nodes", type=int, dest="node_count")
        p.add_argument("--lattice", type=_lattice, action="append", dest="lattice_list",
                       metavar="MxN", help="repeatable")
        p.add_argument("--strategy", action="append", dest="strategies",
                       choices=["optimized", "random", "clustered"], help="repeatable")
        p.add_argument("--failures-max", type=int, dest="failures_max")
        p.add_argument("--decorated", action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--summary", action="store_true",
                       help="print the summary table instead of raw rows when --out is absent")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    doc: dict = {}
    if args.preset:
        doc.update(preset(args.preset))
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from None
        if not isinstance(loaded, dict):
            raise ConfigError("config", "top level must be an object")
        doc.update(loaded)
    if doc.get("experiment", args.experiment) != args.experiment:
        raise ConfigError("experiment", f"config is for {doc['experiment']!r}, not {args.experiment!r}")
    doc["experiment"] = args.experiment
    for name in ("seed", "trials", "node_count", "lattice_list", "strategies", "failures_max", "decorated"):
        value = getattr(args, name)
        if value is not None:
            doc[name] = value
    return ExperimentConfig.from_dict(doc)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.workers is not None and args.workers < 1:
            raise ConfigError("workers", "must be positive")
    except ConfigError as exc:
        print(f"qalloc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = run_experiment(cfg, args.workers)
        if args.out:
            paths = write_outputs(table, cfg, args.out)
            print(f"wrote {len(table.rows)} rows to {paths['rows']}", file=sys.stderr)
        else:
            sys.stdout.write(table.to_csv("summary" if args.summary else "rows"))
    except ConfigError as exc:
        print(f"qalloc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QallocError, ValueError, OSError) as exc:
        print(f"qalloc: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
