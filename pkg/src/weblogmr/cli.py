"""Command-line front end.

    weblogmr generate   --records 100000 --seed 42 --output log.txt
    weblogmr preprocess --input raw.txt --output clean.txt
    weblogmr split      --input clean.txt --nodes 2 --output nodes/
    weblogmr run        --input nodes/node-0/clean.txt --tags all --workers 4 --output out/
    weblogmr pig        --script hits.pig --workdir .
    weblogmr chart      --input out/ --tag HitsCity --kind bar --output city.svg
    weblogmr bench      --records 20000,40000 --workers 1,4 --reps 3 --output bench.csv

Diagnostics go to stderr; results go only to the named files. On failure the
exit status is nonzero and any output the command created is removed.
"""

from __future__ import annotations

import argparse
import logging
import shutil
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional, Sequence

from . import bench, charting, hitcount, logmodel, mrengine, piglite

log = logging.getLogger("weblogmr")


class CommandError(Exception):
    pass


@contextmanager
def _cleanup_on_failure(*paths: Path):
    fresh = [p for p in paths if not p.exists()]
    try:
        yield
    except BaseException:
        for p in fresh:
            if p.is_dir():
                shutil.rmtree(p, ignore_errors=True)
            elif p.exists():
                p.unlink()
        raise


def _int_list(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _require_file(path: Path) -> None:
    if not path.is_file():
        raise CommandError(f"input not found: {path}")


def cmd_preprocess(args) -> int:
    src, out = Path(args.input), Path(args.output)
    _require_file(src)
    suffixes = tuple(args.noise_suffix) if args.noise_suffix else logmodel.DEFAULT_NOISE_SUFFIXES
    with _cleanup_on_failure(out):
        report = logmodel.preprocess_file(src, out, suffixes)
    print(report.summary(), file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    out = Path(args.output)
    config = logmodel.GeneratorConfig(record_count=args.records, seed=args.seed)
    with _cleanup_on_failure(out):
        logmodel.write_records(logmodel.generate(config), out)
    print(f"generate: wrote {args.records} records to {out}", file=sys.stderr)
    return 0


def cmd_split(args) -> int:
    src, out_root = Path(args.input), Path(args.output)
    _require_file(src)
    with _cleanup_on_failure(out_root):
        files = mrengine.distribute(src, args.nodes, out_root)
    for f in files:
        print(f"split: {f}", file=sys.stderr)
    return 0


def cmd_run(args) -> int:
    inputs = [Path(p) for p in args.input]
    for p in inputs:
        _require_file(p)
    out = Path(args.output)
    with _cleanup_on_failure(out):
        result = hitcount.run_hitcount(inputs, out, tags=args.tags, num_workers=args.workers,
                                       num_reduce_partitions=args.partitions)
    skipped = result.counters.get(hitcount.SKIPPED, 0)
    print(f"run: records {result.records_processed}, skipped {skipped}, "
          f"wall time {result.wall_time:.3f}s, {len(result.output_files)} part files in {out}",
          file=sys.stderr)
    return 0


def cmd_pig(args) -> int:
    script_path = Path(args.script)
    _require_file(script_path)
    workdir = Path(args.workdir) if args.workdir else Path.cwd()
    script = piglite.parse(script_path.read_text(encoding="utf-8"))
    targets = []
    for stmt in script.statements:
        if isinstance(stmt, piglite.parser.Store):
            p = Path(stmt.path)
            targets.append(p if p.is_absolute() else workdir / p)
    with _cleanup_on_failure(*targets):
        result = piglite.execute(script, workdir)
    for p in result.stored:
        print(f"pig: stored {p}", file=sys.stderr)
    return 0


def cmd_chart(args) -> int:
    series = charting.series_from_counts(args.input, args.tag, title=args.title or "")
    spec = charting.ChartSpec(args.kind, [series], x_label=args.tag, y_label="hits")
    charting.write_chart(spec, args.output)
    print(f"chart: wrote {args.kind} chart of {len(series.points)} points to {args.output}",
          file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    plan = bench.BenchPlan(args.records, args.workers, args.reps, args.seed)
    if args.chart and len(plan.record_counts) < 2:
        raise CommandError("a line chart needs at least two record counts")
    out = Path(args.output)
    targets = [out] + ([Path(args.chart)] if args.chart else [])
    with _cleanup_on_failure(*targets):
        result = bench.run_bench(plan, tags=args.tags)
        bench.write_csv(result, out)
        if args.chart:
            charting.write_chart(bench.chart_spec(result), args.chart)
    for row in result.rows:
        print(f"bench: records={row.records} workers={row.workers} "
              f"median={row.median_seconds:.3f}s", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weblogmr", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="drop noise and malformed lines")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--noise-suffix", action="append",
                   help="noise path suffix (repeatable; replaces the defaults)")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("generate", help="write a seeded synthetic log")
    p.add_argument("--records", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("split", help="distribute a log over node directories")
    p.add_argument("--input", required=True)
    p.add_argument("--nodes", type=int, default=2)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("run", help="run the hit-count MapReduce job")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--tags", default="all", help="comma-separated tags or 'all'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("pig", help="execute a Pig Latin script")
    p.add_argument("--script", required=True)
    p.add_argument("--workdir", help="base for relative paths (default: current directory)")
    p.set_defaults(func=cmd_pig)

    p = sub.add_parser("chart", help="render hit counts for one tag as SVG")
    p.add_argument("--input", required=True, help="part file or directory")
    p.add_argument("--tag", required=True)
    p.add_argument("--kind", choices=("bar", "pie"), default="bar")
    p.add_argument("--title")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("bench", help="time the job across record and worker counts")
    p.add_argument("--records", type=_int_list, default=list(bench.PAPER_RECORD_COUNTS))
    p.add_argument("--workers", type=_int_list, default=[1, 4])
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tags", default="all")
    p.add_argument("--output", required=True, help="CSV path")
    p.add_argument("--chart", help="SVG line chart path")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CommandError, OSError, ValueError, mrengine.EngineError,
            piglite.PigError, piglite.LexError) as exc:
        print(f"weblogmr {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
