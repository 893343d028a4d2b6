"""Lexer, parser, spans, location map, unparser."""

from __future__ import annotations

import pytest

from babylang.lang import (Lexer, ParseError, SourceSpan, build_location_map,
                           location_key, parse_module, to_source)
from babylang.lang.locations import keyword_span
from babylang.lang.nodes import same_shape
from babylang.lang.parser import InvalidAst

from conftest import ALL_FIXTURE_FILES, load_fixture


# --- spans ---------------------------------------------------------------------

def test_span_orders_and_rejects_inversion():
    SourceSpan(1, 0, 1, 0)
    SourceSpan(2, 5, 3, 0)
    with pytest.raises(ValueError):
        SourceSpan(3, 1, 2, 9)


def test_location_key_golden():
    assert location_key(SourceSpan(4, 5, 6, 7)) == (4, 5, 6, 7)


def test_location_key_degenerate():
    assert location_key(SourceSpan(1, 0, 1, 0)) == (1, 0, 1, 0)


def test_location_key_injective_on_distinct_spans():
    spans = [SourceSpan(a, b, c, d)
             for a in (1, 2) for b in (0, 3) for c in (2, 4) for d in (0, 1)
             if (a, b) <= (c, d)]
    keys = [location_key(s) for s in spans]
    assert len(set(keys)) == len(keys)


# --- lexer ---------------------------------------------------------------------

def test_lexer_tokens_and_annotations():
    lx = Lexer('var /*@probe*/x = "a\\n" + `t${y}z`; // end\n')
    toks = lx.tokens()
    values = [t.value or t.type for t in toks]
    assert values[:4] == ["var", "x", "=", "a\n"]
    assert any(t.type == "TEMPLATE" for t in toks)
    tpl = next(t for t in toks if t.type == "TEMPLATE")
    assert tpl.quasis == ["t", "z"]
    assert tpl.expr_parts[0][0] == "y"
    assert [a.text for a in lx.annotations] == ["/*@probe*/"]


def test_lexer_positions_are_code_points_and_lf_normalized():
    lx = Lexer("a\r\nbb\rc")
    toks = lx.tokens()
    spans = [(t.span.start_line, t.span.start_column) for t in toks if t.type == "NAME"]
    assert spans == [(1, 0), (2, 0), (3, 0)]


def test_lexer_unterminated_string_raises():
    with pytest.raises(ParseError):
        Lexer('"abc').tokens()


def test_lexer_number_forms():
    toks = Lexer("1 2.5 3e2 4.5e-1").tokens()
    nums = [t.number for t in toks if t.type == "NUMBER"]
    assert nums == [1.0, 2.5, 300.0, 0.45]


# --- parser -------------------------------------------------------------------

def test_parse_empty_module():
    ast = parse_module("", "empty")
    assert ast.root.kind == "Module"
    assert ast.root.body == []
    assert ast.root.id == 0


def test_parse_listing_structure():
    ast = parse_module(load_fixture("simple"), "simple")
    kinds = [s.kind for s in ast.root.body]
    assert kinds == ["ImportDecl", "FunctionDecl"]
    fn = ast.root.body[1]
    assert fn.name.name == "binarySearch"
    loop = next(n for n in ast.preorder if n.kind == "While")
    chain = [n for n in loop.walk() if n.kind == "If"]
    assert len(chain) >= 2  # if ... and the if/else ladder


def test_parse_error_has_span_and_no_partial_tree():
    with pytest.raises(ParseError) as err:
        parse_module("let x = ;", "bad")
    assert err.value.span.start_line == 1


def test_parse_is_deterministic():
    source = load_fixture("recursive")
    a = parse_module(source, "m")
    b = parse_module(source, "m")
    assert [n.id for n in a.preorder] == [n.id for n in b.preorder]
    assert [n.kind for n in a.preorder] == [n.kind for n in b.preorder]
    assert same_shape(a.root, b.root)


@pytest.mark.parametrize("name", ALL_FIXTURE_FILES)
def test_parse_fixture_span_containment_and_single_parent(name):
    ast = parse_module(load_fixture(name), name)
    seen_children = set()
    for node in ast.preorder:
        for child in node.children():
            assert id(child) not in seen_children, "node with two parents"
            seen_children.add(id(child))
            if child.span is not None and node.span is not None:
                assert node.span.contains(child.span), (
                    f"{name}: {child} outside parent {node}")


def test_parse_expressions():
    ast = parse_module(
        "var a = (1 + 2) * 3 >> 1;\n"
        "a += 2;\n"
        "a++;\n"
        "var f = (x, y) => x < y && !false;\n"
        "var g = v => v;\n"
        "var o = {k: 1, \"s\": [null, true, new Thing(a)]};\n"
        "o.k = o[\"k\"] === 1;\n", "expr")
    kinds = {n.kind for n in ast.preorder}
    assert {"Binary", "Assignment", "Update", "ArrowExpr", "ObjectLit",
            "ArrayLit", "New", "Member", "Index", "NullLit", "BoolLit"} <= kinds


def test_parse_rejects_invalid_assignment_target():
    with pytest.raises(ParseError):
        parse_module("1 = 2;", "bad")
    with pytest.raises(ParseError):
        parse_module("this = 2;", "bad")


# --- unparse round-trip ---------------------------------------------------------

@pytest.mark.parametrize("name", ALL_FIXTURE_FILES)
def test_unparse_reparses_to_isomorphic_tree(name):
    ast = parse_module(load_fixture(name), name)
    printed = to_source(ast.root)
    again = parse_module(printed, name)
    assert same_shape(ast.root, again.root), f"{name} round-trip changed shape"


# --- location map ---------------------------------------------------------------

def test_keyword_spans_cover_only_keywords():
    ast = parse_module("return;", "m")
    lmap = build_location_map(ast)
    ret = next(n for n in ast.preorder if n.kind == "Return")
    assert keyword_span(ret) == SourceSpan(1, 0, 1, 6)
    assert lmap.get((1, 0, 1, 6)) == ret.id
    # full statement span (with the semicolon) is not a key for the Return
    assert lmap.get(location_key(ret.span)) != ret.id or ret.span.end_column == 6


def test_simple_fixture_return_keyword_line14():
    ast = parse_module(load_fixture("simple"), "simple")
    lmap = build_location_map(ast)
    node_id = lmap.get((14, 8, 14, 14))
    assert node_id is not None
    assert ast.node_by_id[node_id].kind == "Return"


def test_location_map_is_preorder_with_overwrites():
    """Cross-check against an independent second traversal."""
    ast = parse_module(load_fixture("recursive"), "recursive")
    lmap = build_location_map(ast)

    def walk(node, out):
        out.append(node)
        for child in node.children():
            walk(child, out)
        return out

    expected = {}
    for node in walk(ast.root, []):
        if node.span is None:
            continue
        adjusted = keyword_span(node)
        key = location_key(adjusted if adjusted is not None else node.span)
        expected[key] = node.id
    assert lmap.entries == expected


def test_location_map_overwrite_by_later_visit():
    # A for-loop init expression statement shares its span with the
    # assignment inside it; the later (deeper) visit wins.
    ast = parse_module("var i = 0;\nfor (i = 0; i < 1; i++) {\n}\n", "m")
    lmap = build_location_map(ast)
    assignment = next(n for n in ast.preorder if n.kind == "Assignment")
    stmt = ast.parent_of(assignment)
    assert stmt.span == assignment.span
    assert lmap.get(location_key(assignment.span)) == assignment.id


def test_location_map_requires_ids():
    from babylang.lang import nodes as N
    from babylang.lang.parser import IdentifiedAst

    root = parse_module("return;", "m").root
    for node in root.walk():
        node.id = -1
    bare = IdentifiedAst.__new__(IdentifiedAst)
    bare.module_name = "m"
    bare.root = root
    bare.source = "return;"
    bare.comment_attachments = []
    bare._index()
    with pytest.raises(InvalidAst):
        build_location_map(bare)


def test_entry_count_matches_brute_force():
    for name in ("simple", "locmap", "complex"):
        ast = parse_module(load_fixture(name), name)
        lmap = build_location_map(ast)
        keys = set()
        for node in ast.preorder:
            if node.span is None:
                continue
            adjusted = keyword_span(node)
            keys.add(location_key(adjusted if adjusted is not None else node.span))
        assert len(lmap) == len(keys)
