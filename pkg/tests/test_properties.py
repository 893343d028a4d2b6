"""Property-based tests over generated programs and payloads."""

from __future__ import annotations

from hypothesis import given, settings, strategies as st

from babylang.annotations import extract_annotations, serialize_annotation
from babylang.instrument import InstrumentConfig, insert_guards, normalize_blocks
from babylang.lang import SourceSpan, location_key, parse_module, to_source
from babylang.lang import nodes as N
from babylang.lang.nodes import clone, same_shape

NAMES = st.sampled_from(["a", "b", "c", "x", "y", "data", "count", "thing"])


def _number():
    return st.integers(0, 999).map(lambda n: N.NumberLit(value=float(n), raw=str(n)))


def _string():
    return st.sampled_from(["", "a", "hi there", 'quo"te', "tab\there"]) \
        .map(lambda s: N.StringLit(value=s))


def _ident():
    return NAMES.map(lambda name: N.Identifier(name=name))


def _leaf():
    return st.one_of(_number(), _string(), _ident(),
                     st.just(N.NullLit()), st.booleans().map(lambda b: N.BoolLit(value=b)))


def _expr(child):
    binary = st.tuples(st.sampled_from(["+", "-", "*", "/", "%", "<", "<=", "===",
                                        "&&", "||", ">>"]), child, child) \
        .map(lambda t: N.Binary(op=t[0], left=t[1], right=t[2]))
    unary = st.tuples(st.sampled_from(["!", "-"]), child) \
        .map(lambda t: N.Unary(op=t[0], operand=t[1]))
    call = st.tuples(NAMES, st.lists(child, max_size=2)) \
        .map(lambda t: N.Call(callee=N.Identifier(name=t[0]), args=t[1]))
    member = st.tuples(child, NAMES).map(lambda t: N.Member(obj=_wrap(t[0]), prop=t[1]))
    index = st.tuples(child, child).map(lambda t: N.Index(obj=_wrap(t[0]), index=t[1]))
    array = st.lists(child, max_size=3).map(lambda xs: N.ArrayLit(elements=xs))
    obj = st.lists(st.tuples(NAMES, child), max_size=3, unique_by=lambda t: t[0]) \
        .map(lambda pairs: N.ObjectLit(keys=[N.Identifier(name=k) for k, _ in pairs],
                                       values=[v for _, v in pairs]))
    return st.one_of(binary, unary, call, member, index, array, obj)


def _wrap(node):
    # member/index bases must not be bare literals the printer would glue
    if node.kind in ("NumberLit",):
        return N.Identifier(name="w")
    return node


EXPRS = st.recursive(_leaf(), _expr, max_leaves=12)


def _stmt(child):
    var_decl = st.tuples(st.sampled_from(["var", "let", "const"]), NAMES, EXPRS) \
        .map(lambda t: N.VarDecl(decl_kind=t[0], name=N.Identifier(name=t[1]), init=t[2]))
    expr_stmt = st.tuples(NAMES, EXPRS).map(
        lambda t: N.ExprStmt(value=N.Assignment(op="=",
                                                target=N.Identifier(name=t[0]),
                                                value=t[1])))
    ret = EXPRS.map(lambda e: N.Return(value=e))
    branch = st.tuples(EXPRS, st.lists(child, min_size=1, max_size=2),
                       st.lists(child, max_size=2)) \
        .map(lambda t: N.If(test=t[0], then=N.Block(body=t[1]),
                            orelse=N.Block(body=t[2]) if t[2] else None))
    loop = st.tuples(EXPRS, st.lists(child, min_size=1, max_size=2)) \
        .map(lambda t: N.While(test=t[0], body=N.Block(body=t[1])))
    bare_if = st.tuples(EXPRS, child).map(lambda t: N.If(test=t[0], then=t[1]))
    return st.one_of(var_decl, expr_stmt, ret, branch, loop, bare_if)


STMTS = st.recursive(
    st.tuples(st.sampled_from(["var", "let"]), NAMES, EXPRS).map(
        lambda t: N.VarDecl(decl_kind=t[0], name=N.Identifier(name=t[1]), init=t[2])),
    _stmt, max_leaves=8)

MODULES = st.lists(STMTS, max_size=6).map(lambda body: N.Module(body=body))


@settings(max_examples=80, deadline=None)
@given(MODULES)
def test_printed_modules_reparse_to_same_shape(module):
    printed = to_source(module)
    reparsed = parse_module(printed, "gen")
    assert same_shape(module, reparsed.root), printed


@settings(max_examples=80, deadline=None)
@given(MODULES)
def test_normalize_and_guards_idempotent_on_generated_trees(module):
    config = InstrumentConfig()
    root = clone(module)
    normalize_blocks(root)
    once = clone(root)
    normalize_blocks(root)
    assert same_shape(once, root)
    insert_guards(root, config)
    twice = clone(root)
    insert_guards(root, config)
    assert same_shape(twice, root)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 40), st.integers(0, 60),
                          st.integers(0, 30), st.integers(0, 60)),
                min_size=2, max_size=10))
def test_location_key_injective(raw):
    spans = []
    for line, col, dline, dcol in raw:
        spans.append(SourceSpan(line, col, line + dline, dcol if dline else col + dcol))
    keys = [location_key(s) for s in spans]
    assert len(set(keys)) == len(set(spans))


@settings(max_examples=60, deadline=None)
@given(st.text(max_size=300))
def test_extraction_is_total_over_arbitrary_text(text):
    result = extract_annotations(text)
    assert isinstance(result.annotations, list)
    assert isinstance(result.errors, list)


@settings(max_examples=60, deadline=None)
@given(
    st.text(alphabet="abcdefghij XYZ", min_size=1, max_size=12),
    st.booleans(),
    st.lists(st.tuples(st.sampled_from(["k", "arr", "value", "n"]),
                       st.sampled_from(['"e"', "1 + 2", "@template:letters",
                                        "@resource:canvas", "[1, 2]"])),
             max_size=3, unique_by=lambda t: t[0]),
)
def test_example_payload_round_trips(name, enabled, params):
    import json
    payload = {"name": name, "enabled": enabled, "this": "null",
               "params": dict(params)}
    comment = "/*@example " + json.dumps(payload, separators=(",", ":"),
                                         ensure_ascii=False) + "*/"
    result = extract_annotations(comment)
    assert not result.errors
    assert serialize_annotation(result.annotations[0]) == comment
