"""Batch driver: single runs from config files and table-reproduction suites.

Outputs land in --out, the DFOATOM_OUT environment variable, or ./runs, in
that order of precedence. Exit codes: 0 success, 2 configuration error,
3 objective construction error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import (
    METHOD_NAMES,
    ConfigError,
    ObjectiveBuildError,
    build_run,
    parse_flat_config,
)
from .reporting import RunTimer, write_run_outputs
from .suites import SUITE_NAMES, build_suite

OUT_ENV_VAR = "DFOATOM_OUT"

EXIT_CONFIG_ERROR = 2
EXIT_OBJECTIVE_ERROR = 3


def _out_dir(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    env = os.environ.get(OUT_ENV_VAR)
    return Path(env) if env else Path("runs")


def _execute(setup, out_dir: Path, plot: bool):
    handle = setup.make_handle()
    with RunTimer() as timer:
        result = setup.execute(handle)
    paths = write_run_outputs(
        out_dir, setup.label, result, setup.config_echo, timer.seconds, plot=plot
    )
    return result, timer.seconds, paths


def cmd_run(args) -> int:
    path = Path(args.config)
    if not path.is_file():
        print(f"error: config file not found: {path}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        cfg = parse_flat_config(path.read_text())
        setup = build_run(cfg, label=path.stem, seed_override=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ObjectiveBuildError as exc:
        print(f"objective error: {exc}", file=sys.stderr)
        return EXIT_OBJECTIVE_ERROR
    result, wall, paths = _execute(setup, _out_dir(args.out), not args.no_plot)
    print(
        f"{setup.label}: best_f={result.best_f:.12g} n_evals={result.n_evals} "
        f"termination={result.termination} wall={wall:.2f}s"
    )
    print(f"report: {paths['report']}")
    return 0


def cmd_suite(args) -> int:
    try:
        rows = build_suite(args.name)
    except KeyError:
        print(f"error: unknown suite {args.name!r}; choose from {SUITE_NAMES}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if args.method:
        if args.method not in METHOD_NAMES:
            print(f"error: unknown method {args.method!r}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        rows = [r for r in rows if r.method == args.method]
    out_dir = _out_dir(args.out) / args.name

    table = []
    header = f"{'method':<16} {'system':<8} {'N_f':>6} {'value':>22} {'reference':>22} {'|diff|':>10}"
    print(header)
    print("-" * len(header))
    for row in rows:
        try:
            setup = build_run(dict(row.config), label=row.label, seed_override=args.seed)
        except (ConfigError, ObjectiveBuildError) as exc:
            print(f"error in suite row {row.label}: {exc}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        result, wall, _ = _execute(setup, out_dir, not args.no_plot)
        diff = abs(result.best_f - row.reference)
        table.append({
            "label": row.label,
            "method": row.method,
            "system": row.system,
            "n_evals": result.n_evals,
            "value": result.best_f,
            "reference": row.reference,
            "abs_diff": diff,
            "termination": result.termination,
            "wall_seconds": wall,
        })
        print(
            f"{row.method:<16} {row.system:<8} {result.n_evals:>6} "
            f"{result.best_f:>22.12e} {row.reference:>22.12e} {diff:>10.2e}"
        )

    out_dir.mkdir(parents=True, exist_ok=True)
    summary = out_dir / "summary.json"
    summary.write_text(json.dumps({"suite": args.name, "rows": table}, indent=2) + "\n")
    csv_lines = ["method,system,n_evals,value,reference,abs_diff,termination"]
    for t in table:
        csv_lines.append(
            f"{t['method']},{t['system']},{t['n_evals']},{t['value']!r},"
            f"{t['reference']!r},{t['abs_diff']!r},{t['termination']}"
        )
    (out_dir / "summary.csv").write_text("\n".join(csv_lines) + "\n")
    print(f"summary: {summary}")
    return 0


def cmd_list_methods(_args) -> int:
    for name in METHOD_NAMES:
        print(name)
    return 0


def cmd_list_suites(_args) -> int:
    for name in SUITE_NAMES:
        print(name)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="dfoatom",
        description="Derivative-free optimization runs on benchmark and atomic objectives.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a single run from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--seed", type=int, default=None, help="override run.seed")
    p_run.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p_run.set_defaults(func=cmd_run)

    p_suite = sub.add_parser("suite", help="run a reproduction suite")
    p_suite.add_argument("name")
    p_suite.add_argument("--method", default=None, help="restrict to one method")
    p_suite.add_argument("--out", default=None, help="output directory")
    p_suite.add_argument("--seed", type=int, default=None, help="seed for all rows")
    p_suite.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p_suite.set_defaults(func=cmd_suite)

    sub.add_parser("list-methods", help="print method registry").set_defaults(
        func=cmd_list_methods
    )
    sub.add_parser("list-suites", help="print suite registry").set_defaults(
        func=cmd_list_suites
    )

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
