"""Command line: ``cva6perf run|compare|sweep``.

Exit status: 0 on success, 1 on input or configuration errors, and for
``compare`` 2 when the traces do not match exactly.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .analysis import AlignmentError, compute_accuracy, diff_report, sweep, sweep_csv
from .config import PRESETS, ConfigError, PipelineConfig, load_config
from .pipeline import SimulationError, run_pipeline
from .trace_io import TraceFormatError, read_annotated, read_trace, write_annotated


class CliError(Exception):
    pass


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _read(path: str, reader, *args):
    if not Path(path).is_file():
        raise CliError(f"{path}: no such file")
    try:
        return reader(path, *args)
    except (TraceFormatError, UnicodeDecodeError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _config(spec: str | None) -> PipelineConfig:
    if spec is not None and spec not in PRESETS and not Path(spec).is_file():
        raise CliError(f"{spec}: no such config file or preset "
                       f"(presets: {', '.join(PRESETS)})")
    try:
        return load_config(spec)
    except ConfigError as exc:
        raise CliError(f"{spec}: {exc}") from None


def cmd_run(args) -> int:
    trace = _read(args.trace, read_trace)
    config = _config(args.config)
    debug = sys.stderr if args.debug or args.verbose_sb else None
    try:
        result = run_pipeline(trace, config, debug=debug, verbose_sb=args.verbose_sb)
    except ConfigError as exc:
        raise CliError(f"{args.config or 'default config'}: {exc}") from None
    out = args.out or args.trace + ".annotated"
    write_atomic(out, write_annotated(result.annotated))
    print(result.stats.summary())
    return 0


def cmd_compare(args) -> int:
    left = _read(args.left, read_annotated)
    right = _read(args.right, read_annotated)
    try:
        report = compute_accuracy(left, right)
    except AlignmentError as exc:
        raise CliError(f"{args.left} vs {args.right}: {exc}") from None
    sys.stdout.write(diff_report(report, args.limit))
    return 0 if report.n_matching == report.n_compared else 2


def parse_grid(specs: list[str]) -> dict[str, list[str]]:
    grid: dict[str, list[str]] = {}
    for spec in specs:
        key, sep, values = spec.partition("=")
        key = key.strip()
        if not sep or not key or not values.strip():
            raise CliError(f"bad --grid {spec!r}, expected key=v1,v2,...")
        if key in grid:
            raise CliError(f"--grid {key} given twice")
        grid[key] = [v.strip() for v in values.split(",")]
    return grid


def cmd_sweep(args) -> int:
    trace = _read(args.trace, read_trace)
    config = _config(args.config)
    grid = parse_grid(args.grid)
    try:
        rows = sweep(config, grid, trace, jobs=args.jobs)
    except ConfigError as exc:
        raise CliError(f"sweep: {exc}") from None
    text = sweep_csv(rows)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cva6perf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a trace and write the annotated trace")
    run.add_argument("trace")
    run.add_argument("--config", help=f"config file or preset ({', '.join(PRESETS)})")
    run.add_argument("--out", help="annotated output (default: <trace>.annotated)")
    run.add_argument("--debug", action="store_true", help="per-cycle event log on stderr")
    run.add_argument("--verbose-sb", action="store_true",
                     help="also dump the scoreboard every cycle (implies --debug)")
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="accuracy between two annotated traces")
    cmp_.add_argument("left")
    cmp_.add_argument("right")
    cmp_.add_argument("--limit", type=int, default=10, help="mismatch clusters to print")
    cmp_.set_defaults(func=cmd_compare)

    sw = sub.add_parser("sweep", help="simulate a grid of configurations, CSV output")
    sw.add_argument("trace")
    sw.add_argument("--config")
    sw.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2,...")
    sw.add_argument("--out")
    sw.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, SimulationError) as exc:
        print(f"cva6perf: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
