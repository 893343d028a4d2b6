"""Structured-comment extraction, independent of the full parser.

The scanner only understands enough of the language (strings, templates,
comments) to tell real comments from comment-looking text, so it is total
over arbitrary input and keeps going past malformed annotations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..lang.lexer import normalize_newlines
from ..lang.spans import SourceSpan
from .model import (Annotation, AnnotationSyntaxError, KIND_BY_MARKER, parse_payload)


@dataclass
class RawComment:
    span: SourceSpan
    text: str  # including the /* */ delimiters


@dataclass
class ExtractResult:
    annotations: list[Annotation] = field(default_factory=list)
    errors: list[AnnotationSyntaxError] = field(default_factory=list)
    comments: list[RawComment] = field(default_factory=list)  # all structured comments


class _Scanner:
    def __init__(self, source: str):
        self.src = normalize_newlines(source)
        self.pos = 0
        self.line = 1
        self.col = 0

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def advance(self) -> None:
        if self.pos >= len(self.src):
            return
        if self.src[self.pos] == "\n":
            self.line += 1
            self.col = 0
        else:
            self.col += 1
        self.pos += 1

    def scan_comments(self) -> list[RawComment]:
        found = []
        while self.pos < len(self.src):
            c = self.peek()
            if c in ("'", '"'):
                self._skip_string(c)
            elif c == "`":
                self._skip_template()
            elif c == "/" and self.peek(1) == "/":
                while self.peek() not in ("", "\n"):
                    self.advance()
            elif c == "/" and self.peek(1) == "*":
                comment = self._read_block_comment()
                if comment is not None:
                    found.append(comment)
            else:
                self.advance()
        return found

    def _skip_string(self, quote: str) -> None:
        self.advance()
        while True:
            c = self.peek()
            if c == "" or c == "\n":
                return  # unterminated; extraction stays total
            if c == "\\":
                self.advance()
                self.advance()
                continue
            self.advance()
            if c == quote:
                return

    def _skip_template(self) -> None:
        self.advance()
        while True:
            c = self.peek()
            if c == "":
                return
            if c == "\\":
                self.advance()
                self.advance()
                continue
            if c == "`":
                self.advance()
                return
            if c == "$" and self.peek(1) == "{":
                self.advance()
                self.advance()
                depth = 1
                while depth > 0:
                    ec = self.peek()
                    if ec == "":
                        return
                    if ec in ("'", '"'):
                        self._skip_string(ec)
                        continue
                    if ec == "{":
                        depth += 1
                    elif ec == "}":
                        depth -= 1
                    self.advance()
                continue
            self.advance()

    def _read_block_comment(self) -> RawComment | None:
        start_line, start_col, start_pos = self.line, self.col, self.pos
        self.advance()
        self.advance()
        structured = self.peek() == "@"
        while True:
            if self.peek() == "":
                break  # unterminated comment; drop it
            if self.peek() == "*" and self.peek(1) == "/":
                self.advance()
                self.advance()
                if structured:
                    span = SourceSpan(start_line, start_col, self.line, self.col)
                    return RawComment(span, self.src[start_pos:self.pos])
                return None
            self.advance()
        return None


def scan_structured_comments(source: str) -> list[RawComment]:
    return _Scanner(source).scan_comments()


def extract_annotations(source: str) -> ExtractResult:
    """Find `/*@kind json-payload*/` comments in document order."""
    result = ExtractResult()
    for comment in scan_structured_comments(source):
        result.comments.append(comment)
        try:
            result.annotations.append(_parse_comment(comment))
        except AnnotationSyntaxError as exc:
            result.errors.append(exc)
    return result


def _parse_comment(comment: RawComment) -> Annotation:
    inner = comment.text[2:-2]  # strip /* and */
    assert inner.startswith("@")
    body = inner[1:]
    marker = ""
    for ch in body:
        if ch.isalpha():
            marker += ch
        else:
            break
    rest = body[len(marker):]
    if marker not in KIND_BY_MARKER:
        raise AnnotationSyntaxError(comment.span, f"unknown annotation kind @{marker}")
    kind = KIND_BY_MARKER[marker]
    payload_json = None
    if rest.strip():
        if not rest[0].isspace():
            raise AnnotationSyntaxError(comment.span, "annotation kind must be followed by whitespace")
        try:
            payload_json = json.loads(rest)
        except json.JSONDecodeError as exc:
            raise AnnotationSyntaxError(comment.span, f"annotation payload is not valid JSON: {exc}")
    payload = parse_payload(kind, payload_json, comment.span)
    return Annotation(kind=kind, payload=payload, anchor_span=comment.span)


def strip_annotations(source: str) -> str:
    """Remove every structured comment; the parse tree shape is unchanged."""
    src = normalize_newlines(source)
    comments = scan_structured_comments(src)
    # Work on offsets: recompute via a second scan that records positions.
    out = []
    lines = src.split("\n")
    # Build per-comment absolute offsets from line/col spans.
    line_offsets = [0]
    for ln in lines[:-1]:
        line_offsets.append(line_offsets[-1] + len(ln) + 1)
    cut = []
    for c in comments:
        start = line_offsets[c.span.start_line - 1] + c.span.start_column
        end = line_offsets[c.span.end_line - 1] + c.span.end_column
        cut.append((start, end))
    prev = 0
    for start, end in cut:
        out.append(src[prev:start])
        prev = end
    out.append(src[prev:])
    return "".join(out)
