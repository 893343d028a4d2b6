"""Which syntax elements can carry which annotation.

All predicates are pure and total over every node kind.
"""

from __future__ import annotations

from ..lang import nodes as N
from ..lang.parser import IdentifiedAst

FUNCTION_LIKE = ("FunctionDecl", "MethodDef", "FunctionExpr", "ArrowExpr")


def _parent(ast: IdentifiedAst, node: N.Node) -> N.Node | None:
    return ast.parent.get(node.id)


def _is_param(node: N.Node, parent: N.Node | None) -> bool:
    return (parent is not None and parent.kind in FUNCTION_LIKE
            and any(p is node for p in parent.params))


def _is_effect_free(node: N.Node) -> bool:
    """True when re-evaluating the expression cannot run code or mutate state;
    probe captures re-evaluate their expression around the statement."""
    for sub in node.walk():
        if sub.kind in ("Call", "New", "Assignment", "Update"):
            return False
    return True


def can_be_probe(node: N.Node, ast: IdentifiedAst) -> bool:
    """Trackable identifiers (assignment target or declarator), parameters,
    side-effect-free member expressions, and return statements."""
    if node.kind in ("Member", "Index"):
        return _is_effect_free(node)
    if node.kind == "Return":
        return True
    if node.kind != "Identifier" or node.name == "this":
        return False
    parent = _parent(ast, node)
    if parent is None:
        return False
    if parent.kind == "VarDecl" and parent.name is node:
        return True
    if parent.kind == "Assignment" and parent.target is node:
        return True
    if parent.kind == "Update" and parent.target is node:
        return True
    return _is_param(node, parent)


def can_be_slider(node: N.Node, ast: IdentifiedAst) -> bool:
    """Loops, and the name identifier of a function, method, or
    function-valued object property."""
    if node.kind in ("While", "For"):
        return True
    if node.kind != "Identifier":
        return False
    parent = _parent(ast, node)
    if parent is None:
        return False
    if parent.kind in ("FunctionDecl", "MethodDef") and parent.name is node:
        return True
    if parent.kind == "ObjectLit":
        for key, value in zip(parent.keys, parent.values):
            if key is node:
                return value.kind in ("FunctionExpr", "ArrowExpr")
    return False


def can_be_example_target(node: N.Node, ast: IdentifiedAst) -> bool:
    return node.kind in ("FunctionDecl", "MethodDef")


def can_be_instance_target(node: N.Node, ast: IdentifiedAst) -> bool:
    return node.kind == "ClassDecl"


def can_be_replacement_target(node: N.Node, ast: IdentifiedAst) -> bool:
    """Any expression in value position: binding names, assignment targets,
    and object keys are not replaceable."""
    if node.kind not in N.EXPRESSION_KINDS:
        return False
    parent = _parent(ast, node)
    if parent is None:
        return False
    if node.kind == "Identifier":
        if node.name == "this":
            return False
        if parent.kind in ("VarDecl", "FunctionDecl", "ClassDecl", "MethodDef") \
                and parent.name is node:
            return False
        if _is_param(node, parent):
            return False
    if parent.kind in ("Assignment", "Update") and parent.target is node:
        return False
    if parent.kind == "ObjectLit" and any(k is node for k in parent.keys):
        return False
    return True


PREDICATES = {
    "probe": can_be_probe,
    "slider": can_be_slider,
    "example": can_be_example_target,
    "replacement": can_be_replacement_target,
    "instance_template": can_be_instance_target,
}
