"""Coverage complement: which lines does no enabled example reach."""

from __future__ import annotations

from ..lang import nodes as N
from ..lang.parser import IdentifiedAst

EXECUTABLE_KINDS = N.STATEMENT_KINDS


def executable_lines(ast: IdentifiedAst) -> set[int]:
    """Lines on which a statement starts; comment-only lines never qualify."""
    lines = set()
    for node in ast.preorder:
        if node.kind in EXECUTABLE_KINDS and node.span is not None:
            lines.add(node.span.start_line)
    return lines


def lines_for_nodes(ast: IdentifiedAst, node_ids) -> set[int]:
    lines = set()
    for node_id in node_ids:
        node = ast.node_by_id.get(node_id)
        if node is not None and node.span is not None and node.kind in EXECUTABLE_KINDS:
            lines.add(node.span.start_line)
    return lines


def compute_faded_lines(ast: IdentifiedAst, example_coverage: list[set[int]],
                        load_coverage: set[int], any_example_enabled: bool) -> set[int]:
    """Executable lines minus everything reached by enabled examples or by
    loading the module on their behalf. No fading while no example is enabled."""
    if not any_example_enabled:
        return set()
    executed: set[int] = set(load_coverage)
    for covered in example_coverage:
        executed |= covered
    return executable_lines(ast) - lines_for_nodes(ast, executed)
