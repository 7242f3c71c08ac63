"""Command-line entry point.

    nhgate run CONFIG [--output DIR] [--format csv|json|both] [--workers N] [--seed N]
    nhgate verify-all [--output DIR] [--format ...] [--seed N]
    nhgate list-paths

The output directory is taken from ``--output``, then ``$NHGATE_OUTPUT_DIR``,
then ``[output] directory`` in the config, then ``./nhgate-out``.

Exit status: 0 all assertions passed, 1 a numerical assertion failed,
2 the config could not be parsed, 3 the config failed validation. Failures
print one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import (DEFAULT_SEED, ConfigParseError, ConfigValidationError, load_config, parse_config)
from .experiments import emit_report, resolve_output_dir, run_experiment
from .paths import list_families

EXIT_OK, EXIT_ASSERT, EXIT_PARSE, EXIT_VALIDATION = 0, 1, 2, 3


def _fail(code: int, kind: str, message: str, **extra) -> int:
    print(json.dumps({"error": kind, "exit": code, "reason": str(message).replace("\n", " "), **extra}),
          file=sys.stderr)
    return code


def _formats(choice: str | None, cfg) -> list[str]:
    if choice is None:
        return cfg.output["formats"]
    return ["csv", "json"] if choice == "both" else [choice]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nhgate", description="Non-Hermitian geometric gate toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", metavar="DIR", help="output directory (overrides $NHGATE_OUTPUT_DIR)")
        p.add_argument("--format", choices=("csv", "json", "both"), help="report format(s)")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1, metavar="N",
                       help="worker processes for sweeps (default: number of processors)")
        p.add_argument("--seed", type=int, metavar="N", help="override the config seed")

    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config")
    common(run)
    common(sub.add_parser("verify-all", help="run every module's invariant suite"))
    sub.add_parser("list-paths", help="list path families and their parameters")
    return parser


def _list_paths() -> int:
    for family, params in list_families().items():
        shown = ", ".join(k if v is None else f"{k}={v:g}" for k, v in params.items())
        print(f"{family}: {shown}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-paths":
        return _list_paths()
    try:
        if args.command == "run":
            cfg = load_config(args.config)
        else:
            seed = DEFAULT_SEED if args.seed is None else args.seed
            cfg = parse_config(f'schema = 1\nexperiment = "verify-all"\nseed = {seed}\n')
    except ConfigParseError as exc:
        return _fail(EXIT_PARSE, "parse", exc)
    except ConfigValidationError as exc:
        return _fail(EXIT_VALIDATION, "validation", exc)
    if args.workers < 1:
        return _fail(EXIT_VALIDATION, "validation", "--workers must be at least 1")
    if args.seed is not None:
        cfg.seed = args.seed

    report = run_experiment(cfg, workers=args.workers)
    try:
        written = emit_report(report, _formats(args.format, cfg), resolve_output_dir(args.output, cfg))
    except OSError as exc:
        return _fail(EXIT_ASSERT, "output", exc)
    for path in written:
        print(path)
    print(f"{report.experiment}: {sum(a['passed'] for a in report.assertions)}/{len(report.assertions)} "
          f"assertions passed in {report.wall_time:.2f} s")
    if not report.passed:
        failed = [a["name"] for a in report.assertions if not a["passed"]]
        return _fail(EXIT_ASSERT, "assertion", f"{len(failed)} assertion(s) failed", failed=failed)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
