"""Log record format, preprocessing, and a seeded synthetic log generator.

Records are seven '#'-separated fields::

    pizza/index.html#13/01/2012#1#48#india#mh#pune

in the order url, date (dd/mm/yyyy), hit, age, country, state, city.
"""

from __future__ import annotations

import datetime as dt
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

log = logging.getLogger(__name__)

SEPARATOR = "#"
FIELD_COUNT = 7
MAX_AGE = 120

DEFAULT_NOISE_SUFFIXES: Tuple[str, ...] = (
    ".jpg", ".jpeg", ".png", ".gif", ".ico", ".css", ".js", ".swf",
)

DEFAULT_PAGES: Tuple[str, ...] = (
    "pizza/index.html",
    "/pizza/anywhere-banking.html",
    "/pizza/cosmos-e-solutions-pvt-ltd.html",
)
DEFAULT_CITIES: Tuple[str, ...] = ("pune", "nashik", "bombay")


class RecordError(ValueError):
    """A line that cannot be turned into a LogRecord."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(where + message)


class FieldCountError(RecordError):
    pass


class DateError(RecordError):
    pass


class NumericError(RecordError):
    pass


@dataclass(frozen=True)
class LogRecord:
    url: str
    date: dt.date
    hit: int
    age: int
    country: str
    state: str
    city: str


@dataclass(frozen=True)
class RawLogLine:
    text: str
    line_number: int = 0


@dataclass(frozen=True)
class GeneratorConfig:
    record_count: int
    seed: int = 42
    page_catalog: Tuple[str, ...] = DEFAULT_PAGES
    city_catalog: Tuple[str, ...] = DEFAULT_CITIES
    country: str = "india"
    state: str = "mh"
    year: int = 2012

    def __post_init__(self):
        if self.record_count < 1:
            raise ValueError("record_count must be >= 1")
        if not self.page_catalog or not self.city_catalog:
            raise ValueError("catalogs must be non-empty")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class PreprocessReport:
    total: int = 0
    kept: int = 0
    noise: int = 0
    malformed: int = 0
    malformed_lines: List[int] = field(default_factory=list)

    def summary(self) -> str:
        text = (
            f"preprocess: {self.total} lines, kept {self.kept}, "
            f"noise {self.noise}, malformed {self.malformed}"
        )
        if self.malformed_lines:
            text += " (first malformed lines: " + ", ".join(map(str, self.malformed_lines)) + ")"
        return text


def _as_raw(line: Union[str, RawLogLine]) -> RawLogLine:
    if isinstance(line, RawLogLine):
        return line
    return RawLogLine(line.rstrip("\r\n"))


def _parse_int(text: str, name: str, line_number: Optional[int]) -> int:
    # int() alone would accept " 7", "+7" and "7_0"
    if not text.isascii() or not text.isdigit():
        raise NumericError(f"{name} is not an integer: {text!r}", line_number)
    return int(text)


def parse_date(text: str, line_number: Optional[int] = None) -> dt.date:
    parts = text.split("/")
    if len(parts) != 3 or not all(p.isascii() and p.isdigit() for p in parts):
        raise DateError(f"expected dd/mm/yyyy, got {text!r}", line_number)
    day, month, year = parts
    if len(day) > 2 or len(month) > 2 or len(year) != 4:
        raise DateError(f"expected dd/mm/yyyy, got {text!r}", line_number)
    try:
        return dt.date(int(year), int(month), int(day))
    except ValueError as exc:
        raise DateError(f"invalid date {text!r}: {exc}", line_number) from None


def format_date(date: dt.date) -> str:
    return f"{date.day:02d}/{date.month:02d}/{date.year:04d}"


def parse_record(line: Union[str, RawLogLine]) -> LogRecord:
    """Parse one '#'-separated line into a LogRecord.

    Raises FieldCountError, DateError or NumericError, each carrying the
    line number of the RawLogLine (None for bare strings).
    """
    raw = _as_raw(line)
    lineno = raw.line_number or None
    fields = raw.text.split(SEPARATOR)
    if len(fields) != FIELD_COUNT:
        raise FieldCountError(f"expected {FIELD_COUNT} fields, got {len(fields)}", lineno)
    for value in fields:
        if "\t" in value or "\n" in value:
            raise RecordError("fields may not contain tabs or newlines", lineno)
    url, date_text, hit_text, age_text, country, state, city = fields
    date = parse_date(date_text, lineno)
    hit = _parse_int(hit_text, "hit", lineno)
    age = _parse_int(age_text, "age", lineno)
    if hit < 1:
        raise NumericError(f"hit must be >= 1, got {hit}", lineno)
    if not 1 <= age <= MAX_AGE:
        raise NumericError(f"age must be in 1..{MAX_AGE}, got {age}", lineno)
    return LogRecord(url, date, hit, age, country, state, city)


def format_record(record: LogRecord) -> str:
    return SEPARATOR.join((
        record.url,
        format_date(record.date),
        str(record.hit),
        str(record.age),
        record.country,
        record.state,
        record.city,
    ))


def is_noise(line: Union[str, RawLogLine],
             suffixes: Sequence[str] = DEFAULT_NOISE_SUFFIXES) -> bool:
    """True when the line's path (first field) names a static asset."""
    text = _as_raw(line).text
    path = text.split(SEPARATOR, 1)[0].lower()
    return path.endswith(tuple(s.lower() for s in suffixes))


def iter_lines(source: Iterable[str]) -> Iterator[RawLogLine]:
    for number, text in enumerate(source, start=1):
        yield RawLogLine(text.rstrip("\r\n"), number)


def preprocess(lines: Iterable[Union[str, RawLogLine]],
               suffixes: Sequence[str] = DEFAULT_NOISE_SUFFIXES,
               max_reported: int = 10) -> Tuple[List[LogRecord], PreprocessReport]:
    """Drop noise and malformed lines, keeping valid records in input order."""
    report = PreprocessReport()
    kept: List[LogRecord] = []
    suffixes = tuple(s.lower() for s in suffixes)
    for number, item in enumerate(lines, start=1):
        raw = item if isinstance(item, RawLogLine) else RawLogLine(item.rstrip("\r\n"), number)
        report.total += 1
        if is_noise(raw, suffixes):
            report.noise += 1
            continue
        try:
            kept.append(parse_record(raw))
        except RecordError:
            report.malformed += 1
            if len(report.malformed_lines) < max_reported:
                report.malformed_lines.append(raw.line_number)
            continue
        report.kept += 1
    return kept, report


def preprocess_file(in_path: Union[str, Path], out_path: Union[str, Path],
                    suffixes: Sequence[str] = DEFAULT_NOISE_SUFFIXES) -> PreprocessReport:
    with open(in_path, encoding="utf-8", newline="") as fh:
        records, report = preprocess(iter_lines(fh), suffixes)
    write_records(records, out_path)
    log.info(report.summary())
    return report


def write_records(records: Iterable[LogRecord], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(format_record(record))
            fh.write("\n")


def generate(config: GeneratorConfig) -> List[LogRecord]:
    """Deterministic synthetic log: same config and seed, same records."""
    rng = random.Random(config.seed)
    start = dt.date(config.year, 1, 1)
    days = (dt.date(config.year + 1, 1, 1) - start).days
    pages = config.page_catalog
    cities = config.city_catalog
    records = []
    for _ in range(config.record_count):
        url = pages[rng.randrange(len(pages))]
        date = start + dt.timedelta(days=rng.randrange(days))
        age = rng.randint(1, 80)
        city = cities[rng.randrange(len(cities))]
        records.append(LogRecord(url, date, 1, age, config.country, config.state, city))
    return records
