"""AST node definitions for BabyLang.

Every node carries a span and, after identification, a pre-order id.
Instrumented (executable) trees reuse the same classes plus a handful of
interpreter-internal kinds; `origin_id` on a copied or synthesized node
points back at the source node that motivated it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, ClassVar, Iterator, Optional

from .spans import SourceSpan

# Kinds of the surface language.
SURFACE_KINDS = (
    "Module", "ImportDecl", "ExportDecl", "FunctionDecl", "ClassDecl",
    "MethodDef", "VarDecl", "Block", "If", "While", "For", "Return",
    "ExprStmt", "TryCatch", "Assignment", "Binary", "Unary", "Update",
    "Call", "New", "Member", "Index", "Identifier", "NumberLit",
    "StringLit", "TemplateLit", "BoolLit", "NullLit", "ArrayLit",
    "ObjectLit", "FunctionExpr", "ArrowExpr",
)

# Interpreter-internal kinds produced by instrumentation.
EXEC_KINDS = ("ProbeCapture", "CounterBump", "GuardCheck", "ExampleBlock", "FactoryDecl")

ALL_KINDS = SURFACE_KINDS + EXEC_KINDS


@dataclass
class Node:
    kind: ClassVar[str] = "Node"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ()

    span: Optional[SourceSpan] = field(default=None, kw_only=True, compare=False)
    id: int = field(default=-1, kw_only=True, compare=False)
    origin_id: int = field(default=-1, kw_only=True, compare=False)

    def children(self) -> Iterator["Node"]:
        for name in self.CHILD_FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, list):
                for item in value:
                    if item is not None:
                        yield item
            else:
                yield value

    def walk(self) -> Iterator["Node"]:
        """Pre-order traversal including self."""
        yield self
        for child in self.children():
            yield from child.walk()

    def replace_child(self, old: "Node", new: "Node") -> bool:
        for name in self.CHILD_FIELDS:
            value = getattr(self, name)
            if value is old:
                setattr(self, name, new)
                return True
            if isinstance(value, list):
                for i, item in enumerate(value):
                    if item is old:
                        value[i] = new
                        return True
        return False

    def __repr__(self):
        return f"<{self.kind} id={self.id} span={self.span}>"


# --- statements -------------------------------------------------------------

@dataclass(repr=False)
class Module(Node):
    kind: ClassVar[str] = "Module"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("body",)
    body: list[Node] = field(default_factory=list)


@dataclass(repr=False)
class ImportDecl(Node):
    kind: ClassVar[str] = "ImportDecl"
    default_name: Optional[str] = None
    named: list[str] = field(default_factory=list)
    source: str = ""
    # Filled in by the import-rewriting pass: "session" | "file".
    mode: str = field(default="file", compare=False)


@dataclass(repr=False)
class ExportDecl(Node):
    kind: ClassVar[str] = "ExportDecl"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("decl",)
    decl: Optional[Node] = None
    default: bool = False


@dataclass(repr=False)
class FunctionDecl(Node):
    kind: ClassVar[str] = "FunctionDecl"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("name", "params", "body")
    name: "Identifier" = None
    params: list["Identifier"] = field(default_factory=list)
    body: "Block" = None


@dataclass(repr=False)
class ClassDecl(Node):
    kind: ClassVar[str] = "ClassDecl"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("name", "methods")
    name: "Identifier" = None
    methods: list["MethodDef"] = field(default_factory=list)


@dataclass(repr=False)
class MethodDef(Node):
    kind: ClassVar[str] = "MethodDef"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("name", "params", "body")
    name: "Identifier" = None
    params: list["Identifier"] = field(default_factory=list)
    body: "Block" = None
    is_static: bool = False
    is_ctor: bool = False


@dataclass(repr=False)
class VarDecl(Node):
    kind: ClassVar[str] = "VarDecl"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("name", "init")
    decl_kind: str = "var"
    name: "Identifier" = None
    init: Optional[Node] = None


@dataclass(repr=False)
class Block(Node):
    kind: ClassVar[str] = "Block"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("body",)
    body: list[Node] = field(default_factory=list)


@dataclass(repr=False)
class If(Node):
    kind: ClassVar[str] = "If"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("test", "then", "orelse")
    test: Node = None
    then: Node = None
    orelse: Optional[Node] = None


@dataclass(repr=False)
class While(Node):
    kind: ClassVar[str] = "While"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("test", "body")
    test: Node = None
    body: Node = None


@dataclass(repr=False)
class For(Node):
    kind: ClassVar[str] = "For"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("init", "test", "update", "body")
    init: Optional[Node] = None
    test: Optional[Node] = None
    update: Optional[Node] = None
    body: Node = None


@dataclass(repr=False)
class Return(Node):
    kind: ClassVar[str] = "Return"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("value",)
    value: Optional[Node] = None
    probe_id: Optional[str] = field(default=None, compare=False)


@dataclass(repr=False)
class ExprStmt(Node):
    kind: ClassVar[str] = "ExprStmt"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("value",)
    value: Node = None


@dataclass(repr=False)
class TryCatch(Node):
    """Interpreter-internal error isolation; never parsed from surface syntax."""
    kind: ClassVar[str] = "TryCatch"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("body", "handler")
    body: "Block" = None
    handler: Optional["Block"] = None


# --- expressions ------------------------------------------------------------

@dataclass(repr=False)
class Assignment(Node):
    kind: ClassVar[str] = "Assignment"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("target", "value")
    op: str = "="
    target: Node = None
    value: Node = None


@dataclass(repr=False)
class Binary(Node):
    kind: ClassVar[str] = "Binary"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("left", "right")
    op: str = ""
    left: Node = None
    right: Node = None


@dataclass(repr=False)
class Unary(Node):
    kind: ClassVar[str] = "Unary"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("operand",)
    op: str = ""
    operand: Node = None


@dataclass(repr=False)
class Update(Node):
    kind: ClassVar[str] = "Update"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("target",)
    op: str = "++"
    target: Node = None
    prefix: bool = False


@dataclass(repr=False)
class Call(Node):
    kind: ClassVar[str] = "Call"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("callee", "args")
    callee: Node = None
    args: list[Node] = field(default_factory=list)


@dataclass(repr=False)
class New(Node):
    kind: ClassVar[str] = "New"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("callee", "args")
    callee: Node = None
    args: list[Node] = field(default_factory=list)


@dataclass(repr=False)
class Member(Node):
    kind: ClassVar[str] = "Member"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("obj",)
    obj: Node = None
    prop: str = ""


@dataclass(repr=False)
class Index(Node):
    kind: ClassVar[str] = "Index"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("obj", "index")
    obj: Node = None
    index: Node = None


@dataclass(repr=False)
class Identifier(Node):
    kind: ClassVar[str] = "Identifier"
    name: str = ""


@dataclass(repr=False)
class NumberLit(Node):
    kind: ClassVar[str] = "NumberLit"
    value: float = 0.0
    raw: str = ""


@dataclass(repr=False)
class StringLit(Node):
    kind: ClassVar[str] = "StringLit"
    value: str = ""


@dataclass(repr=False)
class TemplateLit(Node):
    kind: ClassVar[str] = "TemplateLit"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("exprs",)
    quasis: list[str] = field(default_factory=lambda: [""])
    exprs: list[Node] = field(default_factory=list)


@dataclass(repr=False)
class BoolLit(Node):
    kind: ClassVar[str] = "BoolLit"
    value: bool = False


@dataclass(repr=False)
class NullLit(Node):
    kind: ClassVar[str] = "NullLit"


@dataclass(repr=False)
class ArrayLit(Node):
    kind: ClassVar[str] = "ArrayLit"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("elements",)
    elements: list[Node] = field(default_factory=list)


@dataclass(repr=False)
class ObjectLit(Node):
    kind: ClassVar[str] = "ObjectLit"
    keys: list[Node] = field(default_factory=list)
    values: list[Node] = field(default_factory=list)

    def children(self) -> Iterator[Node]:
        for k, v in zip(self.keys, self.values):
            yield k
            yield v

    def replace_child(self, old: Node, new: Node) -> bool:
        for seq in (self.keys, self.values):
            for i, item in enumerate(seq):
                if item is old:
                    seq[i] = new
                    return True
        return False


@dataclass(repr=False)
class FunctionExpr(Node):
    kind: ClassVar[str] = "FunctionExpr"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("params", "body")
    params: list[Identifier] = field(default_factory=list)
    body: Block = None


@dataclass(repr=False)
class ArrowExpr(Node):
    kind: ClassVar[str] = "ArrowExpr"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("params", "body")
    params: list[Identifier] = field(default_factory=list)
    body: Node = None  # Block or a bare expression


# --- interpreter-internal kinds ---------------------------------------------

@dataclass(repr=False)
class ProbeCapture(Node):
    kind: ClassVar[str] = "ProbeCapture"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("expr",)
    probe_id: str = ""
    phase: str = "after"  # "before" | "after"
    expr: Optional[Node] = None


@dataclass(repr=False)
class CounterBump(Node):
    kind: ClassVar[str] = "CounterBump"
    slider_id: str = ""


@dataclass(repr=False)
class GuardCheck(Node):
    kind: ClassVar[str] = "GuardCheck"


@dataclass(repr=False)
class ExampleBlock(Node):
    kind: ClassVar[str] = "ExampleBlock"
    plan: Any = None  # instrument.module.ExamplePlan


@dataclass(repr=False)
class FactoryDecl(Node):
    kind: ClassVar[str] = "FactoryDecl"
    CHILD_FIELDS: ClassVar[tuple[str, ...]] = ("body",)
    name: str = ""
    factory_kind: str = "ctor"  # "ctor" | "custom"
    class_name: str = ""
    arg_plans: list = field(default_factory=list)  # instrument.module.ValuePlan
    body: list[Node] = field(default_factory=list)


STATEMENT_KINDS = frozenset({
    "ImportDecl", "ExportDecl", "FunctionDecl", "ClassDecl", "VarDecl",
    "If", "While", "For", "Return", "ExprStmt",
})

EXPRESSION_KINDS = frozenset({
    "Assignment", "Binary", "Unary", "Update", "Call", "New", "Member",
    "Index", "Identifier", "NumberLit", "StringLit", "TemplateLit",
    "BoolLit", "NullLit", "ArrayLit", "ObjectLit", "FunctionExpr", "ArrowExpr",
})


def assign_ids(root: Node) -> int:
    """Number all nodes in a single deterministic pre-order pass, starting at 0.

    Also sets origin_id == id, so freshly parsed trees map to themselves.
    Returns the number of nodes.
    """
    count = 0
    for node in root.walk():
        node.id = count
        node.origin_id = count
        count += 1
    return count


def clone(node: Node) -> Node:
    """Deep copy preserving spans and origin ids (ids too)."""
    copies = {}
    new = _clone_rec(node, copies)
    return new


def _clone_rec(node: Node, copies: dict) -> Node:
    cls = type(node)
    kwargs = {}
    for f in fields(cls):
        if f.name in ("span", "id", "origin_id"):
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node):
            value = _clone_rec(value, copies)
        elif isinstance(value, list):
            value = [_clone_rec(v, copies) if isinstance(v, Node) else v for v in value]
        kwargs[f.name] = value
    new = cls(**kwargs)
    new.span = node.span
    new.id = node.id
    new.origin_id = node.origin_id
    return new


def same_shape(a: Node, b: Node) -> bool:
    """Structural equality ignoring spans and ids."""
    if type(a) is not type(b):
        return False
    for f in fields(type(a)):
        if f.name in ("span", "id", "origin_id", "mode", "probe_id"):
            continue
        va, vb = getattr(a, f.name), getattr(b, f.name)
        if isinstance(va, Node) or isinstance(vb, Node):
            if not (isinstance(va, Node) and isinstance(vb, Node) and same_shape(va, vb)):
                return False
        elif isinstance(va, list):
            if not isinstance(vb, list) or len(va) != len(vb):
                return False
            for xa, xb in zip(va, vb):
                if isinstance(xa, Node) or isinstance(xb, Node):
                    if not (isinstance(xa, Node) and isinstance(xb, Node) and same_shape(xa, xb)):
                        return False
                elif xa != xb:
                    return False
        elif va != vb:
            return False
    return True
