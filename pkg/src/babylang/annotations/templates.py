"""Custom template sidecar (`templates.babytpl`).

Format: repeated blocks

    template NAME {
        <BabyLang statements ending in an expression>
    }

NAME is a bare word or a double-quoted string.
"""

from __future__ import annotations

from ..lang import ParseError, parse_statements_text
from ..lang.lexer import normalize_newlines
from .model import CustomTemplate


class SidecarError(Exception):
    pass


def parse_sidecar(text: str) -> list[CustomTemplate]:
    src = normalize_newlines(text)
    pos = 0
    templates: list[CustomTemplate] = []
    seen: set[str] = set()
    while True:
        pos = _skip_ws(src, pos)
        if pos >= len(src):
            break
        if not src.startswith("template", pos):
            raise SidecarError(f"expected 'template' at offset {pos}")
        pos = _skip_ws(src, pos + len("template"))
        name, pos = _read_name(src, pos)
        pos = _skip_ws(src, pos)
        if pos >= len(src) or src[pos] != "{":
            raise SidecarError(f"expected '{{' after template name {name!r}")
        body, pos = _read_braced(src, pos)
        if name in seen:
            raise SidecarError(f"duplicate template name {name!r}")
        seen.add(name)
        _validate_body(name, body)
        templates.append(CustomTemplate(name=name, body=body))
    return templates


def _skip_ws(src: str, pos: int) -> int:
    while pos < len(src):
        c = src[pos]
        if c in " \t\n":
            pos += 1
        elif src.startswith("//", pos):
            while pos < len(src) and src[pos] != "\n":
                pos += 1
        else:
            return pos
    return pos


def _read_name(src: str, pos: int) -> tuple[str, int]:
    if pos < len(src) and src[pos] == '"':
        end = pos + 1
        while end < len(src) and src[end] != '"':
            end += 1
        if end >= len(src):
            raise SidecarError("unterminated template name")
        return src[pos + 1:end], end + 1
    end = pos
    while end < len(src) and (src[end].isalnum() or src[end] in "_$"):
        end += 1
    if end == pos:
        raise SidecarError(f"expected template name at offset {pos}")
    return src[pos:end], end


def _read_braced(src: str, pos: int) -> tuple[str, int]:
    assert src[pos] == "{"
    depth = 0
    i = pos
    while i < len(src):
        c = src[i]
        if c in ("'", '"', "`"):
            i = _skip_string(src, i, c)
            continue
        if src.startswith("//", i):
            while i < len(src) and src[i] != "\n":
                i += 1
            continue
        if src.startswith("/*", i):
            end = src.find("*/", i + 2)
            i = len(src) if end < 0 else end + 2
            continue
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return src[pos + 1:i], i + 1
        i += 1
    raise SidecarError("unterminated template body")


def _skip_string(src: str, pos: int, quote: str) -> int:
    i = pos + 1
    while i < len(src):
        if src[i] == "\\":
            i += 2
            continue
        if src[i] == quote:
            return i + 1
        i += 1
    return i


def _validate_body(name: str, body: str) -> None:
    try:
        stmts = parse_statements_text(body)
    except ParseError as exc:
        raise SidecarError(f"template {name!r} body does not parse: {exc}")
    if not stmts or stmts[-1].kind != "ExprStmt":
        raise SidecarError(f"template {name!r} must end in an expression")
