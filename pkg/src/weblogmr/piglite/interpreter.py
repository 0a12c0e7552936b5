from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Union

from . import relation as rel
from .errors import ExecutionError, PigError, UnboundRelation
from .parser import (Assign, Filter, ForEachAggregate, ForEachGenerate, GroupBy,
                     Load, Script, Store, UnionOf, parse)

Value = Union[rel.Relation, rel.GroupedRelation]


@dataclass
class ExecutionResult:
    env: Dict[str, Value] = field(default_factory=dict)
    stored: List[Path] = field(default_factory=list)


def _resolve(path: str, working_dir: Path) -> Path:
    p = Path(path)
    return p if p.is_absolute() else working_dir / p


def _lookup(env: Dict[str, Value], name: str, index: int, grouped: bool = False):
    if name not in env:
        raise UnboundRelation(name, index)
    value = env[name]
    if grouped != isinstance(value, rel.GroupedRelation):
        kind = "grouped" if grouped else "ungrouped"
        raise PigError(f"{name!r} is not an {kind} relation")
    return value


def _evaluate(expr, env: Dict[str, Value], index: int, working_dir: Path) -> Value:
    if isinstance(expr, Load):
        return rel.load(_resolve(expr.path, working_dir), expr.delimiter, expr.schema)
    if isinstance(expr, UnionOf):
        return rel.union(*(_lookup(env, name, index) for name in expr.sources))
    if isinstance(expr, Filter):
        return rel.filter_matches(_lookup(env, expr.source, index), expr.column, expr.pattern)
    if isinstance(expr, ForEachGenerate):
        return rel.project(_lookup(env, expr.source, index), expr.columns)
    if isinstance(expr, GroupBy):
        return rel.group_by(_lookup(env, expr.source, index), expr.column, bag_name=expr.source)
    if isinstance(expr, ForEachAggregate):
        grouped = _lookup(env, expr.source, index, grouped=True)
        items = ["group" if item == "group" else (item.bag, item.column) for item in expr.items]
        return rel.aggregate(grouped, items)
    raise TypeError(f"unknown expression {expr!r}")


def execute(script: Script, working_dir: Union[str, Path] = ".") -> ExecutionResult:
    """Evaluate statements in order; rebinding a name replaces it.

    Relative LOAD/STORE paths resolve against ``working_dir``. Failures are
    raised as ExecutionError carrying the 0-based statement index, except
    UnboundRelation which is raised as-is with its index set.
    """
    working_dir = Path(working_dir)
    result = ExecutionResult()
    for index, stmt in enumerate(script.statements):
        try:
            if isinstance(stmt, Store):
                source = _lookup(result.env, stmt.source, index)
                result.stored.extend(rel.store(source, _resolve(stmt.path, working_dir),
                                               stmt.delimiter, stmt.schema_flag))
            elif isinstance(stmt, Assign):
                result.env[stmt.target] = _evaluate(stmt.expr, result.env, index, working_dir)
            else:
                raise TypeError(f"unknown statement {stmt!r}")
        except UnboundRelation:
            raise
        except (PigError, OSError, OverflowError) as exc:
            raise ExecutionError(index, exc) from exc
    return result


def run_script(source: str, working_dir: Union[str, Path] = ".") -> ExecutionResult:
    return execute(parse(source), working_dir)
