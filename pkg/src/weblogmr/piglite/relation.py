"""Relations and the relational operators of the interpreter."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Sequence, Tuple, Union

from .errors import (ArityError, BadPattern, NoSuchColumn, PigTypeError,
                     SchemaMismatch)

CHARARRAY = "chararray"
INT = "int"
TYPES = (CHARARRAY, INT)
INT64_MIN, INT64_MAX = -2**63, 2**63 - 1

SCHEMA_SIDECAR = ".schema"
DATA_FILE = "part-00000"


@dataclass(frozen=True)
class Schema:
    columns: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        names = [name for name, _ in self.columns]
        if any(not n for n in names) or len(set(names)) != len(names):
            raise SchemaMismatch(f"column names must be unique and non-empty: {names}")
        for name, typ in self.columns:
            if typ not in TYPES:
                raise PigTypeError(f"unknown type {typ!r} for column {name!r}")

    @classmethod
    def of(cls, *columns: Tuple[str, str]) -> "Schema":
        return cls(tuple(columns))

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.columns]

    def index(self, column: str) -> int:
        for i, (name, _) in enumerate(self.columns):
            if name == column:
                return i
        raise NoSuchColumn(column, self.names)

    def type_of(self, column: str) -> str:
        return self.columns[self.index(column)][1]

    def render(self) -> str:
        return "".join(f"{name}:{typ}\n" for name, typ in self.columns)


@dataclass
class Relation:
    schema: Schema
    tuples: List[tuple] = field(default_factory=list)

    def __len__(self):
        return len(self.tuples)

    def column(self, name: str) -> List[Any]:
        i = self.schema.index(name)
        return [t[i] for t in self.tuples]


@dataclass
class GroupedRelation:
    """One ``(key, bag)`` entry per distinct key, ordered by first occurrence."""

    key_column: str
    key_type: str
    bag_name: str
    source_schema: Schema
    groups: List[Tuple[Any, List[tuple]]] = field(default_factory=list)


def _check_int(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"integer {value} exceeds 64-bit range")
    return value


def _coerce(text: str, typ: str, line_number: int, column: str):
    if typ == CHARARRAY:
        return text
    try:
        value = int(text)
    except ValueError:
        raise PigTypeError(f"line {line_number}: column {column!r} is not an int: {text!r}",
                           line_number, column) from None
    return _check_int(value)


def data_files(path: Union[str, Path]) -> List[Path]:
    path = Path(path)
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.is_file() and not p.name.startswith((".", "_")))
    if not path.exists():
        raise FileNotFoundError(path)
    return [path]


def load(path: Union[str, Path], delimiter: str, schema: Schema) -> Relation:
    """Read delimiter-separated lines; a directory means all its data files."""
    rows: List[tuple] = []
    arity = len(schema.columns)
    for file in data_files(path):
        with open(file, encoding="utf-8", newline="") as fh:
            for number, line in enumerate(fh, start=1):
                fields = line.rstrip("\n").split(delimiter)
                if len(fields) != arity:
                    raise ArityError(number, arity, len(fields))
                rows.append(tuple(_coerce(text, typ, number, name)
                                  for text, (name, typ) in zip(fields, schema.columns)))
    return Relation(schema, rows)


def store(relation: Relation, path: Union[str, Path], delimiter: str = "\t",
          schema_flag: bool = False) -> List[Path]:
    """Write ``path/part-00000`` and, with ``schema_flag``, ``path/.schema``."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    data = out / DATA_FILE
    with open(data, "w", encoding="utf-8", newline="\n") as fh:
        for row in relation.tuples:
            fh.write(delimiter.join(str(v) for v in row))
            fh.write("\n")
    written = [data]
    sidecar = out / SCHEMA_SIDECAR
    if schema_flag:
        sidecar.write_text(relation.schema.render(), encoding="utf-8")
        written.append(sidecar)
    elif sidecar.exists():
        sidecar.unlink()
    return written


def union(*relations: Relation) -> Relation:
    first = relations[0]
    rows: List[tuple] = []
    for rel in relations:
        if rel.schema != first.schema:
            raise SchemaMismatch(f"cannot union {rel.schema.columns} with {first.schema.columns}")
        rows.extend(rel.tuples)
    return Relation(first.schema, rows)


def compile_pattern(pattern: str) -> "re.Pattern[str]":
    try:
        return re.compile(pattern)
    except re.error as exc:
        raise BadPattern(f"bad pattern {pattern!r}: {exc}") from None


def filter_matches(relation: Relation, column: str, pattern: str) -> Relation:
    """Keep tuples whose column matches ``pattern`` over the whole value."""
    i = relation.schema.index(column)
    if relation.schema.columns[i][1] != CHARARRAY:
        raise PigTypeError(f"MATCHES needs a chararray column, {column!r} is int")
    regex = compile_pattern(pattern)
    return Relation(relation.schema, [t for t in relation.tuples if regex.fullmatch(t[i])])


def project(relation: Relation, columns: Sequence[str]) -> Relation:
    indices = [relation.schema.index(c) for c in columns]
    schema = Schema(tuple(relation.schema.columns[i] for i in indices))
    return Relation(schema, [tuple(t[i] for i in indices) for t in relation.tuples])


def group_by(relation: Relation, column: str, bag_name: str = "") -> GroupedRelation:
    i = relation.schema.index(column)
    bags: dict = {}
    for row in relation.tuples:
        bags.setdefault(row[i], []).append(row)
    return GroupedRelation(column, relation.schema.columns[i][1], bag_name,
                           relation.schema, list(bags.items()))


def aggregate(grouped: GroupedRelation, items: Sequence[Union[str, Tuple[str, str]]]) -> Relation:
    """Evaluate ``GENERATE`` over groups.

    Each item is either ``"group"`` (the key) or ``(bag, column)`` for
    ``SUM(bag.column)``. Output columns are named ``group`` and ``sum``
    (repeated sums get ``sum_1``, ``sum_2``, ...).
    """
    columns: List[Tuple[str, str]] = []
    getters = []
    sums = 0
    for item in items:
        if item == "group":
            columns.append(("group", grouped.key_type))
            getters.append(lambda key, bag: key)
            continue
        bag_name, column = item
        if grouped.bag_name and bag_name != grouped.bag_name:
            raise NoSuchColumn(bag_name, ["group", grouped.bag_name])
        i = grouped.source_schema.index(column)
        if grouped.source_schema.columns[i][1] != INT:
            raise PigTypeError(f"SUM needs an int column, {column!r} is chararray")
        columns.append(("sum" if sums == 0 else f"sum_{sums}", INT))
        sums += 1
        getters.append(lambda key, bag, i=i: _check_int(sum(row[i] for row in bag)))
    schema = Schema(tuple(columns))
    return Relation(schema, [tuple(get(key, bag) for get in getters)
                             for key, bag in grouped.groups])
