"""Extraction, payload schemas, serialization round-trip, attach, sidecar."""

from __future__ import annotations

import pytest

from babylang.annotations import (attach, extract_annotations, parse_sidecar,
                                  serialize_annotation, serialize_payload,
                                  strip_annotations, SidecarError, ValueSpec)
from babylang.annotations.model import AnnotationSyntaxError
from babylang.lang import parse_module
from babylang.lang.nodes import same_shape

from conftest import ALL_FIXTURE_FILES, load_fixture


# --- extraction -----------------------------------------------------------------

def test_extract_single_probe():
    result = extract_annotations("/*@probe*/ x = 1;")
    assert len(result.annotations) == 1
    annotation = result.annotations[0]
    assert annotation.kind == "probe"
    assert annotation.anchor_span.start_line == 1


def test_extract_example_fig14_payload():
    source = ('/*@example {"name":"Found","enabled":true,"this":"null",'
              '"params":{"key":"\\"e\\"","array":"@template:letters"}}*/\n'
              "function binarySearch(key, array) {\n    return -1;\n}\n")
    result = extract_annotations(source)
    assert not result.errors
    payload = result.annotations[0].payload
    assert payload.name == "Found"
    assert payload.enabled is True
    assert payload.this_binding.variant == "literal_source"
    assert payload.params["array"].variant == "template_ref"
    assert payload.params["array"].text == "letters"
    assert payload.params["key"].text == '"e"'


def test_extract_replacement():
    result = extract_annotations('/*@replace "24"*/ prompt("t");')
    assert result.annotations[0].kind == "replacement"
    assert result.annotations[0].payload.replacement_source == "24"


def test_extract_reports_malformed_and_continues():
    source = ("/*@wat*/\n"
              "/*@example {broken*/\n"
              "/*@probe {\"x\":1}*/\n"
              "/*@probe*/\n"
              "x = 1;\n")
    result = extract_annotations(source)
    assert len(result.errors) == 3
    assert len(result.annotations) == 1
    assert result.annotations[0].kind == "probe"


def test_extract_ignores_comment_lookalikes_in_strings():
    source = 'var s = "/*@probe*/";\nvar t = `/*@slider*/`;\n// /*@probe*/\n'
    result = extract_annotations(source)
    assert result.annotations == []


def test_example_defaults():
    result = extract_annotations('/*@example {"name":"N"}*/ function f() {}')
    payload = result.annotations[0].payload
    assert payload.enabled is True
    assert payload.this_binding.text == "null"
    assert payload.params == {}


def test_value_spec_variants():
    assert ValueSpec.parse("@template:letters").variant == "template_ref"
    assert ValueSpec.parse("@custom:x").variant == "custom_ref"
    assert ValueSpec.parse("@resource:canvas").variant == "resource_ref"
    assert ValueSpec.parse("1 + 2").variant == "literal_source"
    with pytest.raises(AnnotationSyntaxError):
        ValueSpec.parse("1 +")


# --- persistence round trip ------------------------------------------------------

@pytest.mark.parametrize("name", ALL_FIXTURE_FILES)
def test_serialize_after_extract_is_payload_identical(name):
    source = load_fixture(name)
    result = extract_annotations(source)
    assert not result.errors, [str(e) for e in result.errors]
    comment_by_span = {c.span: c.text for c in result.comments}
    for annotation in result.annotations:
        original = comment_by_span[annotation.anchor_span]
        assert serialize_annotation(annotation) == original


@pytest.mark.parametrize("name", ALL_FIXTURE_FILES)
def test_strip_annotations_preserves_parse_shape(name):
    source = load_fixture(name)
    stripped = strip_annotations(source)
    assert "/*@" not in stripped
    before = parse_module(source, name)
    after = parse_module(stripped, name)
    assert same_shape(before.root, after.root)


# --- attach ----------------------------------------------------------------------

def _attach(source: str):
    ast = parse_module(source, "m")
    result = extract_annotations(source)
    assert not result.errors
    return attach(result.annotations, ast), ast


def test_probe_binds_to_return():
    attached, ast = _attach("function f() {\n    /*@probe*/\n    return -1;\n}\n")
    assert len(attached.probes) == 1
    assert ast.node_by_id[attached.probes[0].target_id].kind == "Return"


def test_slider_binds_to_while():
    attached, ast = _attach("function f(n) {\n    /*@slider*/\n    while (n > 0) {\n        n = n - 1;\n    }\n}\n")
    assert len(attached.sliders) == 1
    assert ast.node_by_id[attached.sliders[0].target_id].kind == "While"


def test_example_on_var_decl_is_attach_error():
    attached, _ = _attach('/*@example {"name":"X"}*/\nvar value = 1;\n')
    assert attached.examples == []
    assert len(attached.errors) == 1
    assert "no eligible node" in attached.errors[0].reason


def test_example_param_mismatch_is_attach_error():
    attached, _ = _attach(
        '/*@example {"name":"X","params":{"wrong":"1"}}*/\nfunction f(right) {\n    return right;\n}\n')
    assert attached.examples == []
    assert "do not match" in attached.errors[0].reason


def test_stacked_annotations_attach_through_comment_lines():
    source = load_fixture("simple")
    ast = parse_module(source, "simple")
    attached = attach(extract_annotations(source).annotations, ast)
    assert not attached.errors
    assert [e.name for e in attached.examples] == ["Found", "Not Found", "First"]
    assert [e.payload.color_index for e in attached.examples] == [0, 1, 2]
    # all three examples attach to the same function
    assert len({e.target_id for e in attached.examples}) == 1


def test_gap_breaks_adjacency():
    attached, _ = _attach("/*@probe*/\nvar a = 1;\n\nvar x = 2;\n")
    assert len(attached.probes) == 1  # binds to `a` on the next line
    attached2, _ = _attach("/*@probe*/\n\nvar unrelated = 0;\nvar x = 2;\n")
    # blank line is transparent, so the declarator two lines down still binds
    assert len(attached2.probes) == 1
    attached3, _ = _attach("/*@slider*/\nvar a = 1;\nwhile (a > 0) {\n    a = a - 1;\n}\n")
    # a real statement between the comment and the loop breaks adjacency
    assert attached3.sliders == []
    assert len(attached3.errors) == 1


def test_replacement_skips_binding_identifier():
    attached, ast = _attach(
        'function f() {\n    /*@replace "24"*/\n    var celsius = prompt("t");\n    return celsius;\n}\n')
    assert len(attached.replacements) == 1
    target = ast.node_by_id[attached.replacements[0].target_id]
    assert target.kind == "Call"


def test_attach_is_deterministic():
    source = load_fixture("locmap")
    ast = parse_module(source, "locmap")
    annotations = extract_annotations(source).annotations
    first = attach(annotations, ast)
    second = attach(annotations, ast)
    assert [(p.probe_id, p.target_id) for p in first.probes] == \
           [(p.probe_id, p.target_id) for p in second.probes]
    assert [(e.example_id, e.target_id) for e in first.examples] == \
           [(e.example_id, e.target_id) for e in second.examples]


def test_attach_instance_template_to_class():
    source = load_fixture("person")
    ast = parse_module(source, "person")
    attached = attach(extract_annotations(source).annotations, ast)
    assert len(attached.instance_templates) == 1
    assert attached.instance_templates[0].class_name == "Person"


def test_attach_method_example_records_class():
    source = load_fixture("locconv")
    ast = parse_module(source, "locconv")
    attached = attach(extract_annotations(source).annotations, ast)
    example = attached.examples[0]
    assert example.target_kind == "method"
    assert example.class_name == "LocationConverter"
    assert example.is_static


# --- sidecar ----------------------------------------------------------------------

def test_sidecar_parses_shipped_templates():
    from babylang.session import fixtures_dir
    templates = parse_sidecar((fixtures_dir() / "templates.babytpl").read_text())
    names = {t.name for t in templates}
    assert {"letters", "comparator", "simpleAst", "fibonacciAst"} <= names


def test_sidecar_rejects_duplicates_and_nonsense():
    with pytest.raises(SidecarError):
        parse_sidecar("template a { 1; }\ntemplate a { 2; }")
    with pytest.raises(SidecarError):
        parse_sidecar("nonsense")
    with pytest.raises(SidecarError):
        parse_sidecar("template a { var x = 1; }")  # must end in an expression
    with pytest.raises(SidecarError):
        parse_sidecar("template a { 1; ")


def test_sidecar_quoted_names():
    templates = parse_sidecar('template "Simple AST" { 1; }')
    assert templates[0].name == "Simple AST"
