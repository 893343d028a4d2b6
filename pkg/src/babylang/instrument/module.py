"""Instrumented module artifacts: value plans, example plans, and the
transformed executable tree with its map back to original nodes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..annotations.model import ValueSpec
from ..lang import nodes as N
from ..lang import parse_expression_text, parse_statements_text


class InstrumentError(Exception):
    pass


class UnresolvedImport(InstrumentError):
    def __init__(self, name: str):
        super().__init__(f"import {name!r} matches no session module or file")
        self.name = name


class ReplacementParseError(InstrumentError):
    pass


class UnknownClass(InstrumentError):
    pass


class UnresolvedValueSpec(InstrumentError):
    def __init__(self, name: str, namespace: str):
        super().__init__(f"unknown {namespace} name {name!r}")
        self.name = name


@dataclass
class ValuePlan:
    """A ValueSpec ready to materialize: parsed expression or resolved ref."""
    variant: str
    text: str
    expr: Optional[N.Node] = None

    @classmethod
    def from_spec(cls, spec: ValueSpec) -> "ValuePlan":
        expr = parse_expression_text(spec.text) if spec.variant == "literal_source" else None
        return cls(variant=spec.variant, text=spec.text, expr=expr)


@dataclass
class ExamplePlan:
    example_id: str
    name: str
    color_index: int
    enabled: bool
    target_kind: str            # "function" | "method"
    function_name: str
    class_name: Optional[str]
    is_static: bool
    param_names: list[str]
    this_plan: ValuePlan
    param_plans: list[ValuePlan]
    prescript: list[N.Node] = field(default_factory=list)
    postscript: list[N.Node] = field(default_factory=list)
    target_origin_id: int = -1


@dataclass
class ProbePlan:
    probe_id: str
    target_origin_id: int
    label: str
    mode: str  # "declarator" | "assignment" | "member" | "return" | "parameter"


@dataclass
class SliderPlan:
    slider_id: str
    target_origin_id: int
    label: str


@dataclass
class Diagnostic:
    severity: str  # "warning" | "error"
    message: str

    def to_json(self):
        return {"severity": self.severity, "message": self.message}


@dataclass
class InstrumentedModule:
    module_name: str
    exec_tree: N.Module
    probe_table: dict[str, ProbePlan] = field(default_factory=dict)
    slider_table: dict[str, SliderPlan] = field(default_factory=dict)
    example_table: list[ExamplePlan] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def id_map(self) -> dict[int, int]:
        """Identity of each exec node -> original node id."""
        return {id(node): node.origin_id for node in self.exec_tree.walk()}


def parse_script(text: Optional[str]) -> list[N.Node]:
    if not text:
        return []
    return parse_statements_text(text)
