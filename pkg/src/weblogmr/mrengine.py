"""In-process MapReduce runtime.

Input files are cut into record-aligned splits, each split is mapped by a
worker, map output is hash-partitioned (32-bit FNV-1a of the key's UTF-8
bytes), and each partition is reduced into ``part-NNNNN`` files whose lines
are ``key<TAB>value``.

Part-file bytes depend only on the input and the map/reduce functions, not on
the number of workers or on how tasks were scheduled: map outputs are merged
in split order, keys are sorted per partition and every group's values are
sorted before reduce is called.
"""

from __future__ import annotations

import math
import os
import pickle
import shutil
import time
from collections import Counter
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

PathLike = Union[str, Path]

FNV32_OFFSET = 0x811C9DC5
FNV32_PRIME = 0x01000193

DEFAULT_MIN_SPLIT_BYTES = 64 * 1024


class EngineError(Exception):
    pass


class EmptyFileError(EngineError):
    pass


class InvalidPairError(EngineError, ValueError):
    pass


class MapTaskError(EngineError):
    def __init__(self, split_index: int, line_number: int, cause: BaseException):
        self.split_index = split_index
        self.line_number = line_number
        self.cause = cause
        super().__init__(f"map failed in split {split_index}, line {line_number}: {cause!r}")


class ReduceTaskError(EngineError):
    def __init__(self, key: str, cause: BaseException):
        self.key = key
        self.cause = cause
        super().__init__(f"reduce failed for key {key!r}: {cause!r}")


class JobError(EngineError):
    def __init__(self, phase: str, cause: BaseException):
        self.phase = phase
        self.cause = cause
        super().__init__(f"{phase} phase failed: {cause}")


@dataclass(frozen=True)
class InputSplit:
    file_path: str
    byte_offset: int
    byte_length: int
    split_index: int


@dataclass(frozen=True)
class ProgressReport:
    phase: str
    fraction_complete: float
    records_processed: int


ProgressCallback = Callable[[ProgressReport], None]


class Collector:
    """Append-only sink for key/value pairs, plus named counters."""

    __slots__ = ("pairs", "counters")

    def __init__(self):
        self.pairs: List[Tuple[str, str]] = []
        self.counters: Counter = Counter()

    def collect(self, key: str, value: str) -> None:
        if not key or "\t" in key or "\n" in key:
            raise InvalidPairError(f"invalid key {key!r}")
        if "\t" in value or "\n" in value:
            raise InvalidPairError(f"invalid value {value!r} for key {key!r}")
        self.pairs.append((key, value))

    def increment(self, counter: str, amount: int = 1) -> None:
        self.counters[counter] += amount


MapFn = Callable[[str, Collector], None]
ReduceFn = Callable[[str, List[str], Collector], None]


@dataclass
class JobConfig:
    map_fn: MapFn
    reduce_fn: ReduceFn
    output_dir: PathLike
    num_workers: int = 1
    num_reduce_partitions: int = 1
    split_bytes: Optional[int] = None
    executor: str = "process"

    def __post_init__(self):
        if self.num_workers < 1:
            raise ValueError("num_workers must be >= 1")
        if self.num_reduce_partitions < 1:
            raise ValueError("num_reduce_partitions must be >= 1")
        if self.split_bytes is not None and self.split_bytes < 1:
            raise ValueError("split_bytes must be positive")
        if self.executor not in ("process", "thread"):
            raise ValueError("executor must be 'process' or 'thread'")


@dataclass
class IntermediateStore:
    """Map output routed to partitions: one ``key -> values`` dict each."""

    partitions: List[Dict[str, List[str]]]
    records_processed: int = 0
    counters: Counter = field(default_factory=Counter)

    def pairs(self):
        for part in self.partitions:
            for key, values in part.items():
                for value in values:
                    yield key, value


@dataclass
class JobResult:
    output_files: List[Path]
    wall_time: float
    records_processed: int
    counters: Counter
    reports: List[ProgressReport]


def fnv1a_32(data: bytes) -> int:
    h = FNV32_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV32_PRIME) & 0xFFFFFFFF
    return h


def partition(key: str, num_partitions: int) -> int:
    """Reduce partition of ``key``: FNV-1a (32-bit) of its UTF-8 bytes mod n."""
    if num_partitions < 1:
        raise ValueError("num_partitions must be >= 1")
    if num_partitions == 1:
        return 0
    return fnv1a_32(key.encode("utf-8")) % num_partitions


def compute_splits(file_path: PathLike, target_split_bytes: int,
                   first_index: int = 0) -> List[InputSplit]:
    """Cut a file into byte ranges of about ``target_split_bytes``.

    Each boundary is pushed forward past the next LF so no line straddles
    two splits; the ranges are contiguous and cover the whole file.
    """
    if target_split_bytes < 1:
        raise ValueError("target_split_bytes must be positive")
    path = str(file_path)
    data = Path(path).read_bytes()
    size = len(data)
    if size == 0:
        raise EmptyFileError(f"{path} is empty")
    splits = []
    start = 0
    while start < size:
        end = min(start + target_split_bytes, size)
        if end < size and data[end - 1] != 0x0A:
            newline = data.find(b"\n", end)
            end = size if newline < 0 else newline + 1
        splits.append(InputSplit(path, start, end - start, first_index + len(splits)))
        start = end
    return splits


def read_split(split: InputSplit) -> List[str]:
    with open(split.file_path, "rb") as fh:
        fh.seek(split.byte_offset)
        chunk = fh.read(split.byte_length)
    return chunk.decode("utf-8").splitlines()


def distribute(file_path: PathLike, node_count: int, out_root: PathLike) -> List[Path]:
    """Spread a file's records over ``node_count`` directories.

    Node i gets ``out_root/node-<i>/<basename>``; record counts differ by at
    most one (earlier nodes take the extra records) and concatenating the
    node files in order reproduces the input byte for byte.
    """
    if node_count < 1:
        raise ValueError("node_count must be >= 1")
    src = Path(file_path)
    data = src.read_bytes()
    if not data:
        raise EmptyFileError(f"{src} is empty")
    lines = data.splitlines(keepends=True)
    base, extra = divmod(len(lines), node_count)
    outputs = []
    start = 0
    for node in range(node_count):
        count = base + (1 if node < extra else 0)
        node_dir = Path(out_root) / f"node-{node}"
        node_dir.mkdir(parents=True, exist_ok=True)
        target = node_dir / src.name
        target.write_bytes(b"".join(lines[start:start + count]))
        outputs.append(target)
        start += count
    return outputs


def _map_task(split: InputSplit, map_fn: MapFn, num_partitions: int):
    collector = Collector()
    line_number = 0
    try:
        for line_number, line in enumerate(read_split(split), start=1):
            map_fn(line, collector)
    except Exception as exc:
        raise MapTaskError(split.split_index, line_number, exc) from exc

    routed: List[Dict[str, List[str]]] = [{} for _ in range(num_partitions)]
    slot_of: Dict[str, List[str]] = {}
    for key, value in collector.pairs:
        slot = slot_of.get(key)
        if slot is None:
            slot = routed[partition(key, num_partitions)].setdefault(key, [])
            slot_of[key] = slot
        slot.append(value)
    return split.split_index, routed, line_number, collector.counters


def _picklable(*objs) -> bool:
    try:
        pickle.dumps(objs)
    except Exception:
        return False
    return True


def _make_executor(kind: str, workers: int, *payload) -> Executor:
    if kind == "process" and _picklable(*payload):
        return ProcessPoolExecutor(max_workers=workers)
    return ThreadPoolExecutor(max_workers=workers)


def run_map_phase(splits: Sequence[InputSplit], map_fn: MapFn, num_workers: int = 1,
                  num_partitions: int = 1, progress: Optional[ProgressCallback] = None,
                  executor: str = "process") -> IntermediateStore:
    """Run ``map_fn`` over every line of every split and shuffle the output.

    With more than one worker, tasks go to a process pool when the map
    function pickles (falling back to threads otherwise); one worker runs
    inline.
    """
    if num_workers < 1:
        raise ValueError("num_workers must be >= 1")
    store = IntermediateStore([{} for _ in range(num_partitions)])
    results = {}
    done = 0

    def _finished(result):
        nonlocal done
        index, routed, lines, counters = result
        results[index] = routed
        store.records_processed += lines
        store.counters.update(counters)
        done += 1
        if progress:
            progress(ProgressReport("map", done / len(splits), store.records_processed))

    if num_workers == 1 or len(splits) <= 1:
        for split in splits:
            _finished(_map_task(split, map_fn, num_partitions))
    else:
        workers = min(num_workers, len(splits))
        with _make_executor(executor, workers, map_fn) as pool:
            futures = [pool.submit(_map_task, s, map_fn, num_partitions) for s in splits]
            for future in futures:
                _finished(future.result())

    for position, index in enumerate(sorted(results)):
        for target, routed in zip(store.partitions, results[index]):
            for key, values in routed.items():
                slot = target.get(key)
                if slot is None:
                    target[key] = values
                else:
                    slot.extend(values)
        if progress:
            progress(ProgressReport("shuffle", (position + 1) / len(results),
                                    store.records_processed))
    return store


def _reduce_partition(index: int, groups: Dict[str, List[str]], reduce_fn: ReduceFn,
                      output_dir: Path) -> Path:
    collector = Collector()
    for key in sorted(groups):
        try:
            reduce_fn(key, sorted(groups[key]), collector)
        except Exception as exc:
            raise ReduceTaskError(key, exc) from exc
    path = output_dir / f"part-{index:05d}"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in collector.pairs:
            fh.write(f"{key}\t{value}\n")
    return path


def run_reduce_phase(store: IntermediateStore, reduce_fn: ReduceFn, num_workers: int,
                     output_dir: PathLike,
                     progress: Optional[ProgressCallback] = None) -> List[Path]:
    """Reduce each partition into ``output_dir/part-<p>``, one file per partition."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for stale in out.glob("part-*"):
        stale.unlink()
    count = len(store.partitions)
    paths: List[Path] = []
    with ThreadPoolExecutor(max_workers=max(1, min(num_workers, count))) as pool:
        futures = [pool.submit(_reduce_partition, i, part, reduce_fn, out)
                   for i, part in enumerate(store.partitions)]
        for done, future in enumerate(futures, start=1):
            paths.append(future.result())
            if progress:
                progress(ProgressReport("reduce", done / count, store.records_processed))
    return paths


def _default_split_bytes(size: int, num_workers: int) -> int:
    return max(DEFAULT_MIN_SPLIT_BYTES, math.ceil(size / (2 * num_workers)))


def run_job(inputs: Union[PathLike, Sequence[PathLike]], config: JobConfig,
            progress: Optional[ProgressCallback] = None) -> JobResult:
    """Split, map, shuffle and reduce ``inputs`` into ``config.output_dir``.

    Empty input files contribute no splits; the part files are still written.
    """
    if isinstance(inputs, (str, Path)):
        inputs = [inputs]
    reports: List[ProgressReport] = []

    def _report(report: ProgressReport):
        reports.append(report)
        if progress:
            progress(report)

    started = time.perf_counter()
    try:
        splits: List[InputSplit] = []
        for path in inputs:
            size = os.path.getsize(path)
            if size == 0:
                continue
            target = config.split_bytes or _default_split_bytes(size, config.num_workers)
            splits.extend(compute_splits(path, target, first_index=len(splits)))
    except OSError as exc:
        raise JobError("split", exc) from exc

    try:
        store = run_map_phase(splits, config.map_fn, config.num_workers,
                              config.num_reduce_partitions, _report, config.executor)
    except Exception as exc:
        raise JobError("map", exc) from exc

    try:
        files = run_reduce_phase(store, config.reduce_fn, config.num_workers,
                                 config.output_dir, _report)
    except Exception as exc:
        raise JobError("reduce", exc) from exc

    return JobResult(files, time.perf_counter() - started, store.records_processed,
                     store.counters, reports)


def clear_output_dir(path: PathLike) -> None:
    shutil.rmtree(path, ignore_errors=True)
