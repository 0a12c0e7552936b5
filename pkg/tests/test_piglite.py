import pytest
from hypothesis import given, strategies as st

from weblogmr import hitcount, mrengine, piglite
from weblogmr.piglite import (ArityError, BadPattern, ExecutionError, LexError, NoSuchColumn,
                              ParseError, PigTypeError, Relation, Schema, SchemaMismatch,
                              UnboundRelation, lex, parse, format_script)
from weblogmr.piglite import relation as rel
from weblogmr.piglite.parser import (Assign, Filter, ForEachAggregate, ForEachGenerate,
                                     GroupBy, Load, Store, SumOf, UnionOf)

from conftest import FIG4_TEXT
from oracles import count_files
from pigscripts import VERBATIM, random_script, rewrite

PAGE_HITS = Schema.of(("page", "chararray"), ("hits", "int"))


def kinds(tokens):
    return [(t.kind, t.value) for t in tokens]


def test_lex_load_statement():
    tokens = lex("A = load 'p' using PigStorage('\\t');")
    assert kinds(tokens) == [
        ("IDENT", "A"), ("PUNCT", "="), ("KEYWORD", "LOAD"), ("STRING", "p"),
        ("KEYWORD", "USING"), ("IDENT", "PigStorage"), ("PUNCT", "("), ("STRING", "\t"),
        ("PUNCT", ")"), ("PUNCT", ";"),
    ]


def test_lex_empty():
    assert lex("") == []


def test_lex_bad_character():
    with pytest.raises(LexError) as err:
        lex("A = @;")
    assert (err.value.line, err.value.column, err.value.found) == (1, 5, "@")


def test_lex_positions_and_comments():
    tokens = lex("-- header\nX = UNION A,\n  B;")
    assert tokens[0].line == 2 and tokens[0].column == 1
    b = [t for t in tokens if t.value == "B"][0]
    assert (b.line, b.column) == (3, 3)


def test_lex_escapes_and_errors():
    assert lex(r"'a\\b\'c'")[0].value == "a\\b'c"
    with pytest.raises(LexError):
        lex(r"'bad \q escape'")
    with pytest.raises(LexError):
        lex("'unterminated")


def test_parse_verbatim_script():
    script = parse(VERBATIM)
    targets = [s.target for s in script.statements if isinstance(s, Assign)]
    assert targets == ["A", "B", "X", "Y", "X", "X", "X"]
    assert len(script.statements) == 8
    assert script.statements[0].expr == Load("/home/hadoop/output/1/part-00000", "\t", PAGE_HITS)
    assert script.statements[2].expr == UnionOf(("A", "B"))
    assert script.statements[3].expr == Filter("X", "page", "^HitsPage-.*")
    assert script.statements[4].expr == ForEachGenerate("Y", ("page", "hits"))
    assert script.statements[5].expr == GroupBy("X", "page")
    assert script.statements[6].expr == ForEachAggregate("X", ("group", SumOf("X", "hits")))
    assert script.statements[7] == Store("X", "Data/HitsPages", "\t", True)


def test_parse_filter_statement():
    script = parse("X = load 'f' AS (page:chararray);\n"
                   "Y = FILTER X BY (page matches '^HitsPage-.*');")
    assert script.statements[1].expr == Filter("X", "page", "^HitsPage-.*")


@pytest.mark.parametrize("source", [
    "A = load 'f' AS (p:chararray); X = UNION A;",
    "A = load 'f' AS (p:chararray) X = A;",
    "A = load 'f';",
    "A = load 'f' AS (p:float);",
    "A = load 'f' AS (p:int, p:int);",
    "A = load 'f' using Other('x') AS (p:int);",
    "A = load 'f' AS (p:int); B = FOREACH A GENERATE group;",
    "A = load 'f' AS (p:int); B = GROUP A BY p; C = FOREACH B GENERATE p;",
    "A = load 'f' AS (p:int); B = GROUP A BY p; C = FOREACH B GENERATE SUM(Q.p);",
    "A = load 'f' AS (p:int); B = GROUP A BY p; STORE B INTO 'o';",
    "A = load 'f' AS (p:int); STORE A INTO 'o' USING PigStorage('\\t', '-nope');",
    "STORE;",
])
def test_parse_errors(source):
    with pytest.raises(ParseError):
        parse(source)


def test_parse_error_location():
    with pytest.raises(ParseError) as err:
        parse("A = load 'f' AS (p:int);\nX = UNION A;")
    assert err.value.line == 2
    assert err.value.found == "';'"


def test_parse_unbound():
    with pytest.raises(UnboundRelation) as err:
        parse("A = load 'f' AS (p:int);\nB = UNION A, C;")
    assert err.value.name == "C" and err.value.statement_index == 1


def test_keywords_case_insensitive():
    a = parse("a = LOAD 'f' AS (p:chararray); b = filter a by p MATCHES 'x';")
    b = parse("a = load 'f' as (p:CHARARRAY); b = FILTER a BY (p matches 'x');")
    assert a == b


def test_round_trip_verbatim():
    script = parse(VERBATIM)
    assert parse(format_script(script)) == script


@pytest.mark.parametrize("seed", range(50))
def test_round_trip_random_scripts(seed):
    script = parse(random_script(seed))
    text = format_script(script)
    assert parse(text) == script
    assert format_script(parse(text)) == text


# relational operators

def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_part_file(tmp_path):
    f = write(tmp_path / "part-00000", "HitsPage-a\t3\nHitsPage-b\t5\n")
    r = rel.load(f, "\t", PAGE_HITS)
    assert r.tuples == [("HitsPage-a", 3), ("HitsPage-b", 5)]


def test_load_errors(tmp_path):
    with pytest.raises(ArityError) as err:
        rel.load(write(tmp_path / "a", "ok\t1\nx\n"), "\t", PAGE_HITS)
    assert err.value.line_number == 2
    with pytest.raises(PigTypeError) as err:
        rel.load(write(tmp_path / "b", "x\tone\n"), "\t", PAGE_HITS)
    assert (err.value.line_number, err.value.column) == (1, "hits")
    with pytest.raises(OverflowError):
        rel.load(write(tmp_path / "c", f"x\t{2**63}\n"), "\t", PAGE_HITS)
    with pytest.raises(FileNotFoundError):
        rel.load(tmp_path / "missing", "\t", PAGE_HITS)


def test_load_fig4_hitcount_output(fig4_file, tmp_path):
    result = hitcount.run_hitcount(fig4_file, tmp_path / "out")
    r = rel.load(result.output_files[0], "\t", PAGE_HITS)
    pages = rel.filter_matches(r, "page", "^HitsPage-.*")
    assert sum(pages.column("hits")) == 18


def relation(*rows):
    return Relation(PAGE_HITS, list(rows))


def test_union():
    a = relation(("a", 1), ("b", 2))
    b = relation(("a", 1), ("c", 3), ("d", 4))
    assert rel.union(a, b).tuples == a.tuples + b.tuples
    empty = relation()
    assert rel.union(a, empty).tuples == a.tuples
    with pytest.raises(SchemaMismatch):
        rel.union(a, Relation(Schema.of(("page", "chararray")), []))


def test_filter_whole_string():
    r = relation(("HitsPage-pizza/index.html", 1), ("HitsCity-pune", 2), ("HitsPage", 3))
    assert rel.filter_matches(r, "page", "^HitsPage-.*").column("page") == \
        ["HitsPage-pizza/index.html"]
    assert rel.filter_matches(r, "page", ".*").tuples == r.tuples
    assert rel.filter_matches(relation(("HitsPage-x", 1)), "page", "HitsPage").tuples == []
    none = rel.filter_matches(r, "page", "zzz")
    assert none.tuples == [] and none.schema == r.schema


def test_filter_pattern_constructs():
    r = relation(("a1", 1), ("ab", 2), ("a.", 3), ("b", 4), ("", 5))
    assert rel.filter_matches(r, "page", "a[0-9]").column("hits") == [1]
    assert rel.filter_matches(r, "page", r"a\.").column("hits") == [3]
    assert rel.filter_matches(r, "page", "a.?").column("hits") == [1, 2, 3]
    assert rel.filter_matches(r, "page", "b+$").column("hits") == [4]
    assert rel.filter_matches(r, "page", "a*").column("hits") == [5]


def test_filter_errors():
    r = relation(("a", 1))
    with pytest.raises(BadPattern):
        rel.filter_matches(r, "page", "[unclosed")
    with pytest.raises(NoSuchColumn):
        rel.filter_matches(r, "nope", ".*")
    with pytest.raises(PigTypeError):
        rel.filter_matches(r, "hits", ".*")


def test_group_by():
    g = rel.group_by(relation(("a", 1), ("b", 2), ("a", 3)), "page", "X")
    assert g.groups == [("a", [("a", 1), ("a", 3)]), ("b", [("b", 2)])]
    assert rel.group_by(relation(), "page").groups == []
    with pytest.raises(NoSuchColumn):
        rel.group_by(relation(), "nope")


def test_project_and_aggregate():
    r = relation(("a", 1), ("a", 1), ("b", 5))
    assert rel.project(r, ["page"]).tuples == [("a",), ("a",), ("b",)]
    assert rel.project(r, ["hits", "page"]).schema.names == ["hits", "page"]
    g = rel.group_by(r, "page", "X")
    out = rel.aggregate(g, ["group", ("X", "hits")])
    assert out.tuples == [("a", 2), ("b", 5)]
    assert out.schema == Schema.of(("group", "chararray"), ("sum", "int"))
    with pytest.raises(PigTypeError):
        rel.aggregate(g, ["group", ("X", "page")])
    with pytest.raises(NoSuchColumn):
        rel.project(r, ["nope"])


@given(st.lists(st.tuples(st.sampled_from("abcde"), st.integers(0, 1000)), max_size=40))
def test_sum_over_singletons_is_projection(rows):
    distinct = {}
    for k, v in rows:
        distinct.setdefault(k, v)
    r = relation(*distinct.items())
    out = rel.aggregate(rel.group_by(r, "page", "X"), [("X", "hits")])
    assert [t[0] for t in out.tuples] == r.column("hits")


@given(st.lists(st.tuples(st.sampled_from("abc"), st.integers(0, 50)), max_size=20),
       st.lists(st.tuples(st.sampled_from("abd"), st.integers(0, 50)), max_size=20))
def test_grouped_sums_over_union(a_rows, b_rows):
    a, b = relation(*a_rows), relation(*b_rows)
    out = rel.aggregate(rel.group_by(rel.union(a, b), "page", "X"), ["group", ("X", "hits")])
    expected = {}
    for k, v in a_rows + b_rows:
        expected[k] = expected.get(k, 0) + v
    assert dict(out.tuples) == expected


def test_store_with_schema(tmp_path):
    r = Relation(Schema.of(("group", "chararray"), ("sum", "int")), [("a", 2)])
    written = rel.store(r, tmp_path / "out", "\t", schema_flag=True)
    assert (tmp_path / "out" / "part-00000").read_bytes() == b"a\t2\n"
    assert (tmp_path / "out" / ".schema").read_bytes() == b"group:chararray\nsum:int\n"
    assert len(written) == 2


def test_store_empty(tmp_path):
    r = Relation(Schema.of(("group", "chararray"), ("sum", "int")), [])
    rel.store(r, tmp_path / "out", "\t", schema_flag=True)
    assert (tmp_path / "out" / "part-00000").read_bytes() == b""
    assert (tmp_path / "out" / ".schema").exists()


@given(st.lists(st.tuples(st.text(alphabet="ab-/.é", max_size=8),
                          st.integers(-2**63, 2**63 - 1)), max_size=20))
def test_store_load_round_trip(tmp_path_factory, rows):
    d = tmp_path_factory.mktemp("rt")
    r = relation(*rows)
    rel.store(r, d / "out", "\t", True)
    assert rel.load(d / "out", "\t", PAGE_HITS) == r


# interpreter

def test_execute_verbatim_two_part_files(tmp_path):
    a = write(tmp_path / "a", "HitsPage-x\t3\nHitsCity-pune\t4\nHitsPage-y\t1\n")
    b = write(tmp_path / "b", "HitsPage-y\t2\nHitsPage-x\t5\n")
    result = piglite.run_script(rewrite(VERBATIM, a, b), tmp_path)
    out = tmp_path / "Data" / "HitsPages"
    assert (out / "part-00000").read_text() == "HitsPage-x\t8\nHitsPage-y\t3\n"
    assert (out / ".schema").read_text() == "group:chararray\nsum:int\n"
    assert result.stored == [out / "part-00000", out / ".schema"]
    assert set(result.env) == {"A", "B", "X", "Y"}


def test_execute_load_store_canonical(tmp_path):
    write(tmp_path / "in", "a\t01\nb\t2\n")
    piglite.run_script("A = load 'in' AS (k:chararray, v:int);\nstore A into 'out';", tmp_path)
    assert (tmp_path / "out" / "part-00000").read_text() == "a\t1\nb\t2\n"


def test_execute_unbound_statement_index(tmp_path):
    from weblogmr.piglite.parser import Script
    script = Script((Store("C", "out"),))
    with pytest.raises(UnboundRelation) as err:
        piglite.execute(script, tmp_path)
    assert err.value.statement_index == 0


def test_execute_annotates_statement(tmp_path):
    with pytest.raises(ExecutionError) as err:
        piglite.run_script("A = load 'missing' AS (k:chararray);", tmp_path)
    assert err.value.statement_index == 0
    write(tmp_path / "in", "a\tb\n")
    with pytest.raises(ExecutionError) as err:
        piglite.run_script("A = load 'in' AS (k:chararray, v:chararray);\n"
                           "B = FILTER A BY k matches 'a';\n"
                           "C = GROUP B BY v;\n"
                           "D = FOREACH C GENERATE group, SUM(B.v);", tmp_path)
    assert err.value.statement_index == 3


def test_hits_script_over_distributed_fig4(fig4_file, tmp_path):
    nodes = mrengine.distribute(fig4_file, 2, tmp_path / "nodes")
    parts = []
    for i, node in enumerate(nodes):
        res = hitcount.run_hitcount(node, tmp_path / f"out{i}", tags="HitsPage,HitsCity")
        parts.append(res.output_files[0])
    piglite.run_script(piglite.hits_script(parts, "agg"), tmp_path)
    stored = dict(line.split("\t") for line in
                  (tmp_path / "agg" / "part-00000").read_text().splitlines())
    expected = count_files([fig4_file], ["HitsPage"])
    assert {k: int(v) for k, v in stored.items()} == expected
