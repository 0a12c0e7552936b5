"""A small interpreter for the Pig Latin statements used to aggregate hit counts:
LOAD, UNION, FILTER ... MATCHES, FOREACH ... GENERATE, GROUP, SUM and STORE."""

from .errors import (ArityError, BadPattern, ExecutionError, NoSuchColumn, ParseError,
                     PigError, PigTypeError, SchemaMismatch, UnboundRelation)
from .interpreter import ExecutionResult, execute, run_script
from .lexer import LexError, Token, lex
from .parser import Script, format_script, parse, quote
from .relation import (GroupedRelation, Relation, Schema, aggregate, filter_matches,
                       group_by, load, project, store, union)

HITS_PER_PAGE_TEMPLATE = """\
{loads}
X = UNION {names};
Y = FILTER X BY (page matches '{pattern}') ;
X = FOREACH Y GENERATE page,hits;
X = GROUP X by page;
X = FOREACH X GENERATE group , SUM(X.hits);
store X into {store} using PigStorage('\\t','-schema');
"""


def hits_script(inputs, store_path, tag: str = "HitsPage") -> str:
    """Script summing ``<tag>-*`` counts over several part files or directories."""
    if len(inputs) < 2:
        raise ValueError("UNION needs at least two inputs")
    names = [f"A{i}" for i in range(len(inputs))]
    loads = "\n".join(
        f"{name} = load {quote(str(path))} using PigStorage('\\t') AS (page:chararray,hits:int);"
        for name, path in zip(names, inputs))
    return HITS_PER_PAGE_TEMPLATE.format(loads=loads, names=", ".join(names),
                                         pattern=f"^{tag}-.*", store=quote(str(store_path)))


__all__ = [
    "ArityError", "BadPattern", "ExecutionError", "ExecutionResult", "GroupedRelation",
    "LexError", "NoSuchColumn", "ParseError", "PigError", "PigTypeError", "Relation",
    "Schema", "SchemaMismatch", "Script", "Token", "UnboundRelation", "aggregate",
    "execute", "filter_matches", "format_script", "group_by", "hits_script", "lex",
    "load", "parse", "project", "run_script", "store", "union",
]
