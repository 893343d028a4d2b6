"""Location map: lookup table from source locations to node ids.

Keyword-anchored node kinds are stored under the span of their leading
keyword only, so a cursor on `while` finds the loop and not its body.
"""

from __future__ import annotations

from . import nodes as N
from .parser import IdentifiedAst, InvalidAst
from .spans import SourceSpan, location_key

# Kind -> leading keyword length; VarDecl depends on its declaration keyword.
KEYWORD_KINDS = {
    "If": 2,          # if
    "While": 5,       # while
    "For": 3,         # for
    "Return": 6,      # return
    "ClassDecl": 5,   # class
    "FunctionDecl": 8,  # function
    "ImportDecl": 6,  # import
    "ExportDecl": 6,  # export
}


def keyword_span(node: N.Node) -> SourceSpan | None:
    """Span of the node's leading keyword, or None for non-keyword kinds."""
    if node.span is None:
        return None
    length = None
    if node.kind == "VarDecl":
        length = len(node.decl_kind)
    elif node.kind in KEYWORD_KINDS:
        length = KEYWORD_KINDS[node.kind]
    if length is None:
        return None
    return SourceSpan(node.span.start_line, node.span.start_column,
                      node.span.start_line, node.span.start_column + length)


class LocationMap:
    def __init__(self):
        self.entries: dict[tuple[int, int, int, int], int] = {}

    def put(self, key: tuple[int, int, int, int], node_id: int) -> None:
        self.entries[key] = node_id

    def get(self, key: tuple[int, int, int, int]) -> int | None:
        return self.entries.get(key)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        return key in self.entries


def build_location_map(ast: IdentifiedAst) -> LocationMap:
    """Pre-order walk; keyword kinds stored under their keyword span,
    later visits overwrite earlier identical keys."""
    if ast.root.id < 0:
        raise InvalidAst("ast has no node ids; run assign_ids before mapping")
    lmap = LocationMap()
    for node in ast.preorder:
        if node.span is None:
            continue
        adjusted = keyword_span(node)
        span = adjusted if adjusted is not None else node.span
        lmap.put(location_key(span), node.id)
    return lmap
