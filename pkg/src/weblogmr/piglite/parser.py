"""Recursive-descent parser for the supported Pig Latin statements.

Grammar::

    script    := statement*
    statement := IDENT '=' expr ';'
               | STORE IDENT INTO STRING [USING storage] ';'
    expr      := LOAD STRING [USING storage] AS '(' coldef (',' coldef)* ')'
               | UNION IDENT (',' IDENT)+
               | FILTER IDENT BY cond
               | FOREACH IDENT GENERATE item (',' item)*
               | GROUP IDENT BY IDENT
    cond      := '(' cond ')' | IDENT MATCHES STRING
    item      := IDENT | GROUP | SUM '(' IDENT '.' IDENT ')'
    storage   := PigStorage '(' [STRING (',' STRING)*] ')'
    coldef    := IDENT ':' IDENT
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .errors import ParseError, UnboundRelation
from .lexer import Token, lex
from .relation import TYPES, Schema

SCHEMA_OPTION = "-schema"


@dataclass(frozen=True)
class Load:
    path: str
    delimiter: str
    schema: Schema


@dataclass(frozen=True)
class UnionOf:
    sources: Tuple[str, ...]


@dataclass(frozen=True)
class Filter:
    source: str
    column: str
    pattern: str


@dataclass(frozen=True)
class ForEachGenerate:
    source: str
    columns: Tuple[str, ...]


@dataclass(frozen=True)
class SumOf:
    bag: str
    column: str


@dataclass(frozen=True)
class ForEachAggregate:
    source: str
    items: Tuple[Union[str, SumOf], ...]  # "group" or SumOf


@dataclass(frozen=True)
class GroupBy:
    source: str
    column: str


Expr = Union[Load, UnionOf, Filter, ForEachGenerate, ForEachAggregate, GroupBy]


@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Store:
    source: str
    path: str
    delimiter: str = "\t"
    schema_flag: bool = False
    line: int = field(default=0, compare=False)


Statement = Union[Assign, Store]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...]


def _describe(token: Optional[Token]) -> str:
    if token is None:
        return "end of input"
    return repr(token.value) if token.kind != "STRING" else f"string {token.value!r}"


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        # name -> bag name for grouped relations, None for flat ones
        self.bound: Dict[str, Optional[str]] = {}

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def line(self) -> int:
        tok = self.peek()
        if tok is not None:
            return tok.line
        return self.tokens[-1].line if self.tokens else 1

    def error(self, expected: str):
        raise ParseError(self.line(), expected, _describe(self.peek()))

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (value is None or tok.value == value)

    def expect(self, kind: str, value: Optional[str] = None) -> Token:
        if not self.at(kind, value):
            self.error(value or kind.lower())
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, kind: str, value: Optional[str] = None) -> bool:
        if self.at(kind, value):
            self.pos += 1
            return True
        return False

    def relation_name(self, index: int, grouped: Optional[bool] = None) -> Tuple[str, Optional[str]]:
        tok = self.expect("IDENT")
        if tok.value not in self.bound:
            raise UnboundRelation(tok.value, index)
        bag = self.bound[tok.value]
        if grouped is True and bag is None:
            raise ParseError(tok.line, "a grouped relation", repr(tok.value))
        if grouped is False and bag is not None:
            raise ParseError(tok.line, "an ungrouped relation", repr(tok.value))
        return tok.value, bag

    def script(self) -> Script:
        statements = []
        while self.peek() is not None:
            statements.append(self.statement(len(statements)))
        return Script(tuple(statements))

    def statement(self, index: int) -> Statement:
        line = self.line()
        if self.accept("KEYWORD", "STORE"):
            source, _ = self.relation_name(index, grouped=False)
            self.expect("KEYWORD", "INTO")
            path = self.expect("STRING").value
            delimiter, flag = "\t", False
            if self.accept("KEYWORD", "USING"):
                delimiter, flag = self.storage(allow_schema=True)
            self.expect("PUNCT", ";")
            return Store(source, path, delimiter, flag, line=line)
        if not self.at("IDENT"):
            self.error("relation name or STORE")
        target = self.expect("IDENT").value
        self.expect("PUNCT", "=")
        expr, bag = self.expr(index)
        self.expect("PUNCT", ";")
        self.bound[target] = bag
        return Assign(target, expr, line=line)

    def expr(self, index: int):
        if self.accept("KEYWORD", "LOAD"):
            path = self.expect("STRING").value
            delimiter = "\t"
            if self.accept("KEYWORD", "USING"):
                delimiter, _ = self.storage(allow_schema=False)
            self.expect("KEYWORD", "AS")
            return Load(path, delimiter, self.schema()), None
        if self.accept("KEYWORD", "UNION"):
            sources = [self.relation_name(index, grouped=False)[0]]
            while self.accept("PUNCT", ","):
                sources.append(self.relation_name(index, grouped=False)[0])
            if len(sources) < 2:
                self.error("',' and a second relation")
            return UnionOf(tuple(sources)), None
        if self.accept("KEYWORD", "FILTER"):
            source, _ = self.relation_name(index, grouped=False)
            self.expect("KEYWORD", "BY")
            column, pattern = self.condition()
            return Filter(source, column, pattern), None
        if self.accept("KEYWORD", "FOREACH"):
            source, bag = self.relation_name(index)
            self.expect("KEYWORD", "GENERATE")
            items = [self.item(bag)]
            while self.accept("PUNCT", ","):
                items.append(self.item(bag))
            if bag is None:
                return ForEachGenerate(source, tuple(items)), None
            return ForEachAggregate(source, tuple(items)), None
        if self.accept("KEYWORD", "GROUP"):
            source, _ = self.relation_name(index, grouped=False)
            self.expect("KEYWORD", "BY")
            column = self.expect("IDENT").value
            return GroupBy(source, column), source
        self.error("LOAD, UNION, FILTER, FOREACH or GROUP")

    def condition(self) -> Tuple[str, str]:
        if self.accept("PUNCT", "("):
            result = self.condition()
            self.expect("PUNCT", ")")
            return result
        column = self.expect("IDENT").value
        self.expect("KEYWORD", "MATCHES")
        return column, self.expect("STRING").value

    def item(self, bag: Optional[str]):
        line = self.line()
        if bag is None:
            if self.at("KEYWORD", "GROUP") or self.at("KEYWORD", "SUM"):
                self.error("column name (GROUP and SUM need a grouped relation)")
            return self.expect("IDENT").value
        if self.accept("KEYWORD", "GROUP"):
            return "group"
        if self.accept("KEYWORD", "SUM"):
            self.expect("PUNCT", "(")
            rel = self.expect("IDENT")
            if rel.value != bag:
                raise ParseError(rel.line, f"bag {bag!r}", repr(rel.value))
            self.expect("PUNCT", ".")
            column = self.expect("IDENT").value
            self.expect("PUNCT", ")")
            return SumOf(rel.value, column)
        raise ParseError(line, "GROUP or SUM(...)", _describe(self.peek()))

    def storage(self, allow_schema: bool) -> Tuple[str, bool]:
        func = self.expect("IDENT")
        if func.value != "PigStorage":
            raise ParseError(func.line, "PigStorage", repr(func.value))
        self.expect("PUNCT", "(")
        args = []
        if self.at("STRING"):
            args.append(self.expect("STRING").value)
            while self.accept("PUNCT", ","):
                args.append(self.expect("STRING").value)
        self.expect("PUNCT", ")")
        delimiter = args[0] if args else "\t"
        if not delimiter or "\n" in delimiter:
            raise ParseError(func.line, "a non-empty delimiter", repr(delimiter))
        options = args[1:]
        for option in options:
            if option != SCHEMA_OPTION or not allow_schema:
                raise ParseError(func.line, "a supported PigStorage option", repr(option))
        return delimiter, SCHEMA_OPTION in options

    def schema(self) -> Schema:
        self.expect("PUNCT", "(")
        columns = [self.coldef()]
        while self.accept("PUNCT", ","):
            columns.append(self.coldef())
        self.expect("PUNCT", ")")
        names = [name for name, _ in columns]
        if len(set(names)) != len(names):
            raise ParseError(self.line(), "distinct column names", ", ".join(names))
        return Schema(tuple(columns))

    def coldef(self) -> Tuple[str, str]:
        name = self.expect("IDENT").value
        self.expect("PUNCT", ":")
        typ = self.expect("IDENT")
        if typ.value.lower() not in TYPES:
            raise ParseError(typ.line, "chararray or int", repr(typ.value))
        return name, typ.value.lower()


def parse(source: Union[str, List[Token]]) -> Script:
    tokens = lex(source) if isinstance(source, str) else list(source)
    return _Parser(tokens).script()


def quote(text: str) -> str:
    out = text.replace("\\", "\\\\").replace("'", "\\'").replace("\t", "\\t").replace("\n", "\\n")
    return f"'{out}'"


def _format_storage(delimiter: str, schema_flag: bool = False) -> str:
    args = [quote(delimiter)]
    if schema_flag:
        args.append(quote(SCHEMA_OPTION))
    return f"PigStorage({','.join(args)})"


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Load):
        cols = ",".join(f"{name}:{typ}" for name, typ in expr.schema.columns)
        return f"LOAD {quote(expr.path)} USING {_format_storage(expr.delimiter)} AS ({cols})"
    if isinstance(expr, UnionOf):
        return "UNION " + ", ".join(expr.sources)
    if isinstance(expr, Filter):
        return f"FILTER {expr.source} BY ({expr.column} MATCHES {quote(expr.pattern)})"
    if isinstance(expr, ForEachGenerate):
        return f"FOREACH {expr.source} GENERATE " + ", ".join(expr.columns)
    if isinstance(expr, ForEachAggregate):
        items = ["GROUP" if item == "group" else f"SUM({item.bag}.{item.column})"
                 for item in expr.items]
        return f"FOREACH {expr.source} GENERATE " + ", ".join(items)
    if isinstance(expr, GroupBy):
        return f"GROUP {expr.source} BY {expr.column}"
    raise TypeError(f"not an expression: {expr!r}")


def format_script(script: Script) -> str:
    """Canonical source text; ``parse(format_script(s)) == s``."""
    lines = []
    for stmt in script.statements:
        if isinstance(stmt, Store):
            lines.append(f"STORE {stmt.source} INTO {quote(stmt.path)} USING "
                         f"{_format_storage(stmt.delimiter, stmt.schema_flag)};")
        else:
            lines.append(f"{stmt.target} = {format_expr(stmt.expr)};")
    return "\n".join(lines) + ("\n" if lines else "")
