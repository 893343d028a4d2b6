"""Annotation kinds, payload schemas, and their comment serialization.

Annotations persist as structured comments `/*@kind payload*/` so tooling
that does not know about them sees ordinary comments. The payload is one
JSON value; expression-valued fields hold BabyLang source text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..lang import ParseError, parse_expression_text, parse_statements_text
from ..lang.spans import SourceSpan

KINDS = ("probe", "slider", "example", "replacement", "instance_template")

# Comment keyword <-> internal kind.
KIND_BY_MARKER = {
    "probe": "probe",
    "slider": "slider",
    "example": "example",
    "replace": "replacement",
    "instance": "instance_template",
}
MARKER_BY_KIND = {v: k for k, v in KIND_BY_MARKER.items()}


class AnnotationSyntaxError(Exception):
    def __init__(self, span: Optional[SourceSpan], message: str):
        super().__init__(message)
        self.span = span
        self.message = message


@dataclass
class ValueSpec:
    """How an example argument is produced."""
    variant: str  # literal_source | template_ref | custom_ref | resource_ref
    text: str     # expression source or referenced name

    @classmethod
    def parse(cls, raw: str, span: Optional[SourceSpan] = None) -> "ValueSpec":
        if raw.startswith("@template:"):
            return cls("template_ref", raw[len("@template:"):])
        if raw.startswith("@custom:"):
            return cls("custom_ref", raw[len("@custom:"):])
        if raw.startswith("@resource:"):
            return cls("resource_ref", raw[len("@resource:"):])
        try:
            parse_expression_text(raw)
        except ParseError as exc:
            raise AnnotationSyntaxError(span, f"value {raw!r} is not a BabyLang expression: {exc}")
        return cls("literal_source", raw)

    def serialize(self) -> str:
        if self.variant == "template_ref":
            return f"@template:{self.text}"
        if self.variant == "custom_ref":
            return f"@custom:{self.text}"
        if self.variant == "resource_ref":
            return f"@resource:{self.text}"
        return self.text


@dataclass
class ExamplePayload:
    name: str
    enabled: bool = True
    this_binding: ValueSpec = field(default_factory=lambda: ValueSpec("literal_source", "null"))
    params: dict[str, ValueSpec] = field(default_factory=dict)
    prescript: Optional[str] = None
    postscript: Optional[str] = None
    color_index: int = -1  # assigned at attach time, by document order


@dataclass
class InstanceTemplatePayload:
    name: str
    ctor_args: list[ValueSpec] = field(default_factory=list)


@dataclass
class ReplacementPayload:
    replacement_source: str


@dataclass
class CustomTemplate:
    name: str
    body: str  # BabyLang statements ending in an expression


@dataclass
class Annotation:
    kind: str
    payload: object  # kind-specific payload, None for probe/slider
    anchor_span: SourceSpan
    target_node: Optional[int] = None

    @property
    def display_name(self) -> str:
        if self.kind == "example" or self.kind == "instance_template":
            return self.payload.name
        return self.kind


def parse_payload(kind: str, payload_json, span: SourceSpan):
    """Validate a decoded JSON payload against its kind-specific schema."""
    if kind in ("probe", "slider"):
        if payload_json is not None:
            raise AnnotationSyntaxError(span, f"@{MARKER_BY_KIND[kind]} takes no payload")
        return None
    if payload_json is None:
        raise AnnotationSyntaxError(span, f"@{MARKER_BY_KIND[kind]} requires a payload")
    if kind == "replacement":
        if not isinstance(payload_json, str):
            raise AnnotationSyntaxError(span, "@replace payload must be a string of expression source")
        return ReplacementPayload(replacement_source=payload_json)
    if kind == "example":
        return _parse_example(payload_json, span)
    if kind == "instance_template":
        return _parse_instance(payload_json, span)
    raise AnnotationSyntaxError(span, f"unknown annotation kind {kind!r}")


_EXAMPLE_KEYS = ("name", "enabled", "this", "params", "prescript", "postscript")


def _parse_example(data, span) -> ExamplePayload:
    if not isinstance(data, dict):
        raise AnnotationSyntaxError(span, "@example payload must be an object")
    unknown = set(data) - set(_EXAMPLE_KEYS)
    if unknown:
        raise AnnotationSyntaxError(span, f"unknown example keys: {sorted(unknown)}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise AnnotationSyntaxError(span, "example needs a nonempty string name")
    enabled = data.get("enabled", True)
    if not isinstance(enabled, bool):
        raise AnnotationSyntaxError(span, "example 'enabled' must be a boolean")
    this_raw = data.get("this", "null")
    if not isinstance(this_raw, str):
        raise AnnotationSyntaxError(span, "example 'this' must be a string")
    params_raw = data.get("params", {})
    if not isinstance(params_raw, dict) or any(not isinstance(v, str) for v in params_raw.values()):
        raise AnnotationSyntaxError(span, "example 'params' must map names to strings")
    params = {k: ValueSpec.parse(v, span) for k, v in params_raw.items()}
    for key in ("prescript", "postscript"):
        script = data.get(key)
        if script is None:
            continue
        if not isinstance(script, str):
            raise AnnotationSyntaxError(span, f"example {key!r} must be a string")
        try:
            parse_statements_text(script)
        except ParseError as exc:
            raise AnnotationSyntaxError(span, f"example {key} does not parse: {exc}")
    return ExamplePayload(
        name=name, enabled=enabled,
        this_binding=ValueSpec.parse(this_raw, span),
        params=params,
        prescript=data.get("prescript"), postscript=data.get("postscript"),
    )


def _parse_instance(data, span) -> InstanceTemplatePayload:
    if not isinstance(data, dict):
        raise AnnotationSyntaxError(span, "@instance payload must be an object")
    unknown = set(data) - {"name", "args"}
    if unknown:
        raise AnnotationSyntaxError(span, f"unknown instance keys: {sorted(unknown)}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise AnnotationSyntaxError(span, "instance template needs a nonempty name")
    args_raw = data.get("args", [])
    if not isinstance(args_raw, list) or any(not isinstance(a, str) for a in args_raw):
        raise AnnotationSyntaxError(span, "instance 'args' must be a list of strings")
    return InstanceTemplatePayload(name=name,
                                   ctor_args=[ValueSpec.parse(a, span) for a in args_raw])


def _dump(value) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"))


def serialize_payload(annotation: Annotation) -> Optional[str]:
    """Canonical payload text: fixed key order, compact separators, params
    kept in stored (document) order."""
    p = annotation.payload
    if annotation.kind in ("probe", "slider"):
        return None
    if annotation.kind == "replacement":
        return _dump(p.replacement_source)
    if annotation.kind == "example":
        data = {"name": p.name, "enabled": p.enabled, "this": p.this_binding.serialize(),
                "params": {k: v.serialize() for k, v in p.params.items()}}
        if p.prescript is not None:
            data["prescript"] = p.prescript
        if p.postscript is not None:
            data["postscript"] = p.postscript
        return _dump(data)
    if annotation.kind == "instance_template":
        return _dump({"name": p.name, "args": [a.serialize() for a in p.ctor_args]})
    raise ValueError(f"unknown annotation kind {annotation.kind!r}")


def serialize_annotation(annotation: Annotation) -> str:
    marker = MARKER_BY_KIND[annotation.kind]
    payload = serialize_payload(annotation)
    if payload is None:
        return f"/*@{marker}*/"
    return f"/*@{marker} {payload}*/"
