"""Command line: ``sim <experiment> --config <file> [options]``.

Runs one experiment described by a TOML config and writes its table as CSV
(default) or JSON.  Exit status 0 when all requested computations complete,
2 for configuration problems (including an infeasible parameter search,
which still writes the empty table), 1 for runtime failures.
"""

import argparse
import sys
from dataclasses import replace

from .config import EXPERIMENTS, load_config
from .experiments import InfeasibleError, run_experiment, write_csv, write_json


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Simulate single-step multiqubit gates on Ising-coupled registers.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS, help="experiment to run")
    parser.add_argument("--config", required=True, help="TOML configuration file")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="override the output path")
    parser.add_argument("--threads", type=int, help="override the worker count")
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        help="output format (default csv)",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if cfg.experiment != args.experiment:
            raise ValueError(
                "config describes %r but %r was requested"
                % (cfg.experiment, args.experiment)
            )
        overrides = {
            key: getattr(args, key)
            for key in ("seed", "out", "threads")
            if getattr(args, key) is not None
        }
        if overrides:
            cfg = replace(cfg, **overrides)
    except (OSError, ValueError) as exc:
        print("sim: config error: %s" % exc, file=sys.stderr)
        return 2

    out = cfg.out
    if out is None:
        out = "%s.%s" % (cfg.experiment.replace("-", "_"), args.format)
    status = 0
    try:
        columns, rows = run_experiment(cfg)
    except InfeasibleError as exc:
        print("sim: %s" % exc, file=sys.stderr)
        columns, rows = exc.columns, []
        status = 2
    except Exception as exc:
        print("sim: %s failed: %s" % (cfg.experiment, exc), file=sys.stderr)
        return 1

    try:
        if args.format == "json":
            write_json(columns, rows, out, cfg.experiment)
        else:
            write_csv(columns, rows, out)
    except OSError as exc:
        print("sim: cannot write %s: %s" % (out, exc), file=sys.stderr)
        return 1
    print("%s: %d row%s -> %s" % (cfg.experiment, len(rows), "" if len(rows) == 1 else "s", out))
    return status


if __name__ == "__main__":
    sys.exit(main())
