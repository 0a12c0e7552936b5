"""Hit counting as a MapReduce job.

Every valid log record emits one ``(<Tag>-<value>, hit)`` pair per enabled
field tag, e.g. ``HitsCity-pune``; the reducer sums the values per key.
"""

from __future__ import annotations

import datetime as dt
import functools
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import logmodel
from .mrengine import Collector, JobConfig, JobResult, ProgressCallback, run_job

INT64_MAX = 2**63 - 1
SKIPPED = "skipped"


class NumericError(ValueError):
    def __init__(self, key: str, value: str):
        self.key = key
        self.value = value
        super().__init__(f"value {value!r} for key {key!r} is not a non-negative integer")


def quarter_of(date: dt.date) -> str:
    return f"Q{(date.month - 1) // 3 + 1}"


@dataclass(frozen=True)
class FieldTag:
    name: str
    extractor: Callable[[logmodel.LogRecord], str]


FIELD_TAGS: Dict[str, FieldTag] = {
    tag.name: tag
    for tag in (
        FieldTag("HitsPage", lambda r: r.url),
        FieldTag("HitsCity", lambda r: r.city),
        FieldTag("HitsState", lambda r: r.state),
        FieldTag("HitsCountry", lambda r: r.country),
        FieldTag("HitsAge", lambda r: str(r.age)),
        FieldTag("HitsQuarter", lambda r: quarter_of(r.date)),
        FieldTag("HitsDate", lambda r: logmodel.format_date(r.date)),
    )
}
ALL_TAGS: Tuple[str, ...] = tuple(FIELD_TAGS)


@dataclass(frozen=True)
class TaggedKey:
    tag: str
    value: str

    def serialize(self) -> str:
        return f"{self.tag}-{self.value}"

    @classmethod
    def parse(cls, key: str) -> "TaggedKey":
        # tag names never contain '-'; values may ("cosmos-e-solutions")
        tag, sep, value = key.partition("-")
        if not sep:
            raise ValueError(f"not a tagged key: {key!r}")
        return cls(tag, value)


def resolve_tags(tags: Union[str, Iterable[str], None]) -> Tuple[str, ...]:
    """Normalize a tag selection; accepts names, a comma list, or 'all'."""
    if tags is None:
        return ALL_TAGS
    if isinstance(tags, str):
        tags = [t.strip() for t in tags.split(",") if t.strip()]
    names = list(dict.fromkeys(tags))
    if names == ["all"]:
        return ALL_TAGS
    unknown = [n for n in names if n not in FIELD_TAGS]
    if unknown:
        raise ValueError(f"unknown tags {unknown}; choose from {list(ALL_TAGS)}")
    if not names:
        raise ValueError("at least one tag is required")
    return tuple(names)


def hit_map(line: str, collector: Collector, tags: Sequence[str] = ALL_TAGS) -> None:
    try:
        record = logmodel.parse_record(line)
    except logmodel.RecordError:
        collector.increment(SKIPPED)
        return
    hit = str(record.hit)
    for name in tags:
        collector.collect(f"{name}-{FIELD_TAGS[name].extractor(record)}", hit)


def hit_reduce(key: str, values: List[str], collector: Collector) -> None:
    total = 0
    for value in values:
        if not value.isascii() or not value.isdigit():
            raise NumericError(key, value)
        total += int(value)
    if total > INT64_MAX:
        raise OverflowError(f"sum for {key!r} exceeds 64-bit range")
    collector.collect(key, str(total))


def run_hitcount(inputs: Union[str, Path, Sequence[Union[str, Path]]],
                 output_dir: Union[str, Path],
                 tags: Union[str, Iterable[str], None] = None,
                 num_workers: int = 1,
                 num_reduce_partitions: int = 1,
                 split_bytes: Optional[int] = None,
                 executor: str = "process",
                 progress: Optional[ProgressCallback] = None) -> JobResult:
    names = resolve_tags(tags)
    config = JobConfig(
        map_fn=functools.partial(hit_map, tags=names),
        reduce_fn=hit_reduce,
        output_dir=output_dir,
        num_workers=num_workers,
        num_reduce_partitions=num_reduce_partitions,
        split_bytes=split_bytes,
        executor=executor,
    )
    return run_job(inputs, config, progress)


def read_counts(paths: Iterable[Union[str, Path]]) -> Dict[str, int]:
    """Load ``key<TAB>count`` lines from part files into a dict."""
    counts: Dict[str, int] = {}
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                key, _, value = line.rstrip("\n").partition("\t")
                counts[key] = counts.get(key, 0) + int(value)
    return counts
