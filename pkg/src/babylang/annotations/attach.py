"""Bind extracted annotations to AST nodes.

An annotation attaches to the first node beginning at or after its
comment's end that passes the kind's eligibility predicate. Lines holding
only further annotation comments or whitespace do not break the
same-or-next-line adjacency requirement, so annotations can stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..lang import nodes as N
from ..lang.lexer import normalize_newlines
from ..lang.parser import IdentifiedAst
from .eligibility import PREDICATES
from .extract import scan_structured_comments
from .model import Annotation, ExamplePayload


@dataclass
class AttachError:
    annotation: Annotation
    reason: str


@dataclass
class AttachedProbe:
    probe_id: str
    annotation: Annotation
    target_id: int


@dataclass
class AttachedSlider:
    slider_id: str
    annotation: Annotation
    target_id: int


@dataclass
class AttachedExample:
    example_id: str
    annotation: Annotation
    target_id: int
    target_kind: str  # "function" | "method"
    function_name: str
    class_name: Optional[str] = None
    is_static: bool = False
    param_names: list[str] = field(default_factory=list)

    @property
    def payload(self) -> ExamplePayload:
        return self.annotation.payload

    @property
    def name(self) -> str:
        return self.payload.name

    @property
    def enabled(self) -> bool:
        return self.payload.enabled


@dataclass
class AttachedReplacement:
    annotation: Annotation
    target_id: int


@dataclass
class AttachedInstanceTemplate:
    annotation: Annotation
    target_id: int
    class_name: str


@dataclass
class AttachedAnnotations:
    module_name: str
    probes: list[AttachedProbe] = field(default_factory=list)
    sliders: list[AttachedSlider] = field(default_factory=list)
    examples: list[AttachedExample] = field(default_factory=list)
    replacements: list[AttachedReplacement] = field(default_factory=list)
    instance_templates: list[AttachedInstanceTemplate] = field(default_factory=list)
    errors: list[AttachError] = field(default_factory=list)

    def enabled_examples(self) -> list[AttachedExample]:
        return [e for e in self.examples if e.enabled]


def _transparent_lines(source: str) -> set[int]:
    """Lines that are blank once structured comments are removed."""
    src = normalize_newlines(source)
    lines = src.split("\n")
    masked = [list(line) for line in lines]
    for comment in scan_structured_comments(src):
        span = comment.span
        for line_no in range(span.start_line, span.end_line + 1):
            row = masked[line_no - 1]
            lo = span.start_column if line_no == span.start_line else 0
            hi = span.end_column if line_no == span.end_line else len(row)
            for i in range(lo, min(hi, len(row))):
                row[i] = " "
    return {i + 1 for i, row in enumerate(masked) if "".join(row).strip() == ""}


def attach(annotations: list[Annotation], ast: IdentifiedAst) -> AttachedAnnotations:
    result = AttachedAnnotations(module_name=ast.module_name)
    transparent = _transparent_lines(ast.source)
    module = ast.module_name

    for annotation in annotations:
        predicate = PREDICATES[annotation.kind]
        target = _find_target(annotation, ast, predicate)
        if target is None:
            result.errors.append(AttachError(
                annotation, f"no eligible node for @{annotation.kind} at {annotation.anchor_span}"))
            continue
        if not _adjacent(annotation.anchor_span, target.span.start_line, transparent):
            result.errors.append(AttachError(
                annotation,
                f"eligible node at line {target.span.start_line} is not on the same or next line"))
            continue
        annotation.target_node = target.id
        _bind(result, module, annotation, target, ast)

    # Ids and example colors follow document order of successful bindings.
    for i, probe in enumerate(result.probes):
        probe.probe_id = f"{module}:p{i}"
    for i, slider in enumerate(result.sliders):
        slider.slider_id = f"{module}:s{i}"
    for i, example in enumerate(result.examples):
        example.example_id = f"{module}:e{i}"
        example.payload.color_index = i
    return result


def _find_target(annotation: Annotation, ast: IdentifiedAst, predicate) -> Optional[N.Node]:
    anchor_end = annotation.anchor_span.end
    for node in ast.preorder:
        if node.span is None or node.span.start < anchor_end:
            continue
        if predicate(node, ast):
            return node
    return None


def _adjacent(anchor: "N.SourceSpan", target_line: int, transparent: set[int]) -> bool:
    if target_line <= anchor.end_line + 1:
        return True
    return all(line in transparent for line in range(anchor.end_line + 1, target_line))


def _bind(result: AttachedAnnotations, module: str, annotation: Annotation,
          target: N.Node, ast: IdentifiedAst) -> None:
    kind = annotation.kind
    if kind == "probe":
        result.probes.append(AttachedProbe("", annotation, target.id))
    elif kind == "slider":
        result.sliders.append(AttachedSlider("", annotation, target.id))
    elif kind == "replacement":
        result.replacements.append(AttachedReplacement(annotation, target.id))
    elif kind == "instance_template":
        result.instance_templates.append(AttachedInstanceTemplate(
            annotation, target.id, class_name=target.name.name))
    elif kind == "example":
        example = _bind_example(result, module, annotation, target, ast)
        if example is not None:
            result.examples.append(example)


def _bind_example(result, module, annotation, target, ast) -> Optional[AttachedExample]:
    payload: ExamplePayload = annotation.payload
    param_names = [p.name for p in target.params]
    given = list(payload.params.keys())
    if set(given) != set(param_names):
        result.errors.append(AttachError(
            annotation,
            f"example {payload.name!r} params {given} do not match "
            f"target parameters {param_names}"))
        return None
    if target.kind == "FunctionDecl":
        return AttachedExample(
            "", annotation, target.id, target_kind="function",
            function_name=target.name.name, param_names=param_names)
    owner = ast.parent_of(target)
    class_name = owner.name.name if owner is not None and owner.kind == "ClassDecl" else None
    if class_name is None:
        result.errors.append(AttachError(annotation, "method target has no owning class"))
        return None
    return AttachedExample(
        "", annotation, target.id, target_kind="method",
        function_name=target.name.name, class_name=class_name,
        is_static=target.is_static, param_names=param_names)
