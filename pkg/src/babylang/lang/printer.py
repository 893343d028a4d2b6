"""Unparser: turn an AST back into source text.

Formatting is normalized (4-space indent, required semicolons), so the
output reparses to an isomorphic tree rather than identical spans.
"""

from __future__ import annotations

from . import nodes as N

INDENT = "    "


def to_source(node: N.Node) -> str:
    if node.kind == "Module":
        return "".join(_stmt(s, 0) for s in node.body)
    if node.kind in N.STATEMENT_KINDS or node.kind == "Block":
        return _stmt(node, 0)
    return _expr(node)


def _stmt(node: N.Node, level: int) -> str:
    pad = INDENT * level
    k = node.kind
    if k == "ImportDecl":
        if node.default_name:
            binding = node.default_name
        else:
            binding = "{ " + ", ".join(node.named) + " }"
        return f'{pad}import {binding} from "{_escape(node.source)}";\n'
    if k == "ExportDecl":
        inner = _stmt(node.decl, level)
        head = "export default " if node.default else "export "
        return pad + head + inner[len(pad):]
    if k == "FunctionDecl":
        params = ", ".join(p.name for p in node.params)
        return f"{pad}function {node.name.name}({params}) {_block(node.body, level)}\n"
    if k == "ClassDecl":
        out = [f"{pad}class {node.name.name} {{\n"]
        for m in node.methods:
            static = "static " if m.is_static else ""
            params = ", ".join(p.name for p in m.params)
            out.append(f"{pad}{INDENT}{static}{m.name.name}({params}) "
                       f"{_block(m.body, level + 1)}\n")
        out.append(pad + "}\n")
        return "".join(out)
    if k == "VarDecl":
        init = f" = {_expr(node.init)}" if node.init is not None else ""
        return f"{pad}{node.decl_kind} {node.name.name}{init};\n"
    if k == "If":
        body, inline = _body(node.then, level)
        out = f"{pad}if ({_expr(node.test)}){body}"
        if node.orelse is not None:
            out += " else" if inline else f"\n{pad}else"
            if node.orelse.kind == "If":
                return out + " " + _stmt(node.orelse, level).lstrip()
            else_body, _ = _body(node.orelse, level)
            out += else_body
        return out + "\n"
    if k == "While":
        body, _ = _body(node.body, level)
        return f"{pad}while ({_expr(node.test)}){body}\n"
    if k == "For":
        init = ""
        if node.init is not None:
            init = _stmt(node.init, 0).strip().rstrip(";") if node.init.kind == "VarDecl" \
                else _expr(node.init.value)
        test = _expr(node.test) if node.test is not None else ""
        update = _expr(node.update) if node.update is not None else ""
        body, _ = _body(node.body, level)
        return f"{pad}for ({init}; {test}; {update}){body}\n"
    if k == "Return":
        value = f" {_expr(node.value)}" if node.value is not None else ""
        return f"{pad}return{value};\n"
    if k == "ExprStmt":
        return f"{pad}{_expr(node.value)};\n"
    if k == "Block":
        return pad + _block(node, level) + "\n"
    raise ValueError(f"cannot print statement kind {k}")


def _body(node: N.Node, level: int) -> tuple[str, bool]:
    """Render a statement body: blocks inline, bare statements on the next line."""
    if node.kind == "Block":
        return " " + _block(node, level), True
    return "\n" + _stmt(node, level + 1).rstrip("\n"), False


def _block(block: N.Block, level: int) -> str:
    if not block.body:
        return "{\n" + INDENT * level + "}"
    inner = "".join(_stmt(s, level + 1) for s in block.body)
    return "{\n" + inner + INDENT * level + "}"


_PRECEDENCE = {
    "||": 1, "&&": 2,
    "==": 3, "!=": 3, "===": 3, "!==": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    ">>": 5,
    "+": 6, "-": 6,
    "*": 7, "/": 7, "%": 7,
}


def _expr(node: N.Node, parent_prec: int = 0) -> str:
    k = node.kind
    if k == "Assignment":
        text = f"{_expr(node.target)} {node.op} {_expr(node.value)}"
        return f"({text})" if parent_prec > 0 else text
    if k == "Binary":
        prec = _PRECEDENCE[node.op]
        text = f"{_expr(node.left, prec)} {node.op} {_expr(node.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    if k == "Unary":
        text = f"{node.op}{_expr(node.operand, 8)}"
        return f"({text})" if parent_prec > 8 else text
    if k == "Update":
        if node.prefix:
            text = f"++{_expr(node.target, 8)}"
            return f"({text})" if parent_prec > 8 else text
        return f"{_expr(node.target, 9)}++"
    if k == "Call":
        args = ", ".join(_expr(a) for a in node.args)
        return f"{_expr(node.callee, 9)}({args})"
    if k == "New":
        args = ", ".join(_expr(a) for a in node.args)
        return f"new {_expr(node.callee, 9)}({args})"
    if k == "Member":
        return f"{_expr(node.obj, 9)}.{node.prop}"
    if k == "Index":
        return f"{_expr(node.obj, 9)}[{_expr(node.index)}]"
    if k == "Identifier":
        return node.name
    if k == "NumberLit":
        return node.raw or _format_raw(node.value)
    if k == "StringLit":
        return f'"{_escape(node.value)}"'
    if k == "TemplateLit":
        parts = ["`"]
        for i, quasi in enumerate(node.quasis):
            parts.append(quasi.replace("\\", "\\\\").replace("`", "\\`").replace("$", "\\$"))
            if i < len(node.exprs):
                parts.append("${" + _expr(node.exprs[i]) + "}")
        parts.append("`")
        return "".join(parts)
    if k == "BoolLit":
        return "true" if node.value else "false"
    if k == "NullLit":
        return "null"
    if k == "ArrayLit":
        return "[" + ", ".join(_expr(e) for e in node.elements) + "]"
    if k == "ObjectLit":
        parts = []
        for key, value in zip(node.keys, node.values):
            if key.kind == "Identifier":
                key_text = key.name
            elif key.kind == "StringLit":
                key_text = f'"{_escape(key.value)}"'
            else:
                key_text = key.raw or _format_raw(key.value)
            parts.append(f"{key_text}: {_expr(value)}")
        return "{" + ", ".join(parts) + "}"
    if k == "FunctionExpr":
        params = ", ".join(p.name for p in node.params)
        text = f"function ({params}) {_block(node.body, 0)}"
        return f"({text})" if parent_prec >= 9 else text
    if k == "ArrowExpr":
        params = ", ".join(p.name for p in node.params)
        if node.body.kind == "Block":
            text = f"({params}) => {_block(node.body, 0)}"
        else:
            text = f"({params}) => {_expr(node.body)}"
        return f"({text})" if parent_prec > 0 else text
    raise ValueError(f"cannot print expression kind {k}")


def _format_raw(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def _escape(text: str) -> str:
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\t", "\\t"))
