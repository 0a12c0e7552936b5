"""Wall-clock scaling benchmark: hit-count time by record count and worker count."""

from __future__ import annotations

import csv
import logging
import statistics
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Union

from . import charting, hitcount, logmodel

log = logging.getLogger(__name__)

PAPER_RECORD_COUNTS = (20000, 40000, 60000, 80000, 100000)
CSV_HEADER = ("records", "workers", "seconds")


@dataclass(frozen=True)
class BenchPlan:
    record_counts: Sequence[int] = PAPER_RECORD_COUNTS
    worker_counts: Sequence[int] = (1, 4)
    repetitions: int = 3
    seed: int = 42

    def __post_init__(self):
        if not self.record_counts or not self.worker_counts:
            raise ValueError("record and worker counts must be non-empty")
        if any(n < 1 for n in self.record_counts) or any(w < 1 for w in self.worker_counts):
            raise ValueError("record and worker counts must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


@dataclass
class BenchRow:
    records: int
    workers: int
    median_seconds: float
    times: List[float] = field(default_factory=list)


@dataclass
class BenchResult:
    rows: List[BenchRow]

    def series(self) -> List[charting.Series]:
        by_workers = {}
        for row in self.rows:
            by_workers.setdefault(row.workers, []).append((str(row.records), row.median_seconds))
        return [charting.Series(f"{w} worker{'s' if w != 1 else ''}", points)
                for w, points in sorted(by_workers.items())]

    def median(self, records: int, workers: int) -> float:
        for row in self.rows:
            if row.records == records and row.workers == workers:
                return row.median_seconds
        raise KeyError((records, workers))


def run_bench(plan: BenchPlan, tags=None, workdir: Union[str, Path, None] = None) -> BenchResult:
    """Time every (records, workers) cell of the plan.

    Repetitions are interleaved round-robin over the cells so slow drifts in
    host load spread evenly instead of landing on one record count.
    """
    cells = [(n, w) for n in plan.record_counts for w in plan.worker_counts]
    times = {cell: [] for cell in cells}
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        tmp = Path(tmp)
        logs = {}
        for n in plan.record_counts:
            logs[n] = tmp / f"log-{n}.txt"
            config = logmodel.GeneratorConfig(record_count=n, seed=plan.seed)
            logmodel.write_records(logmodel.generate(config), logs[n])
        for _ in range(plan.repetitions):
            for n, w in cells:
                result = hitcount.run_hitcount(logs[n], tmp / f"out-{n}-{w}", tags=tags,
                                               num_workers=w)
                times[(n, w)].append(result.wall_time)
    rows = []
    for n, w in cells:
        row = BenchRow(n, w, statistics.median(times[(n, w)]), times[(n, w)])
        log.info("records=%d workers=%d median=%.3fs", n, w, row.median_seconds)
        rows.append(row)
    return BenchResult(rows)


def write_csv(result: BenchResult, path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in result.rows:
            writer.writerow((row.records, row.workers, f"{row.median_seconds:.3f}"))


def chart_spec(result: BenchResult) -> charting.ChartSpec:
    return charting.ChartSpec("line", result.series(), title="Hit-count job time by input size",
                              width=720, height=420, x_label="records", y_label="seconds")
