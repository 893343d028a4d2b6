"""Tokenizer for BabyLang source text."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .spans import SourceSpan

KEYWORDS = frozenset({
    "import", "export", "from", "default", "function", "class", "static",
    "new", "let", "const", "var", "while", "for", "if", "else", "return",
    "true", "false", "null", "this",
})

# Longest-match-first punctuation.
PUNCTUATION = (
    "===", "!==", "==", "!=", "<=", ">=", "&&", "||",
    "+=", "-=", "*=", "++", ">>", "=>",
    "+", "-", "*", "/", "%", "<", ">", "=", "!",
    "(", ")", "{", "}", "[", "]", ",", ";", ":", ".",
)


class ParseError(Exception):
    def __init__(self, span: Optional[SourceSpan], message: str):
        super().__init__(message)
        self.span = span
        self.message = message

    def __str__(self):
        where = f" at {self.span}" if self.span else ""
        return f"{self.message}{where}"


@dataclass
class Token:
    type: str  # NAME | KEYWORD | NUMBER | STRING | TEMPLATE | PUNCT | EOF
    value: str
    span: SourceSpan
    number: float = 0.0
    # TEMPLATE only: literal chunks and embedded expression sources with positions.
    quasis: list[str] = field(default_factory=list)
    expr_parts: list[tuple[str, int, int]] = field(default_factory=list)

    def __repr__(self):
        return f"Token({self.type}, {self.value!r})"


@dataclass
class CommentAttachment:
    """A structured `/*@...*/` comment kept off the token stream."""
    span: SourceSpan
    text: str  # full comment text including delimiters


def normalize_newlines(source: str) -> str:
    return source.replace("\r\n", "\n").replace("\r", "\n")


class Lexer:
    def __init__(self, source: str, start_line: int = 1, start_col: int = 0):
        self.src = normalize_newlines(source)
        self.pos = 0
        self.line = start_line
        self.col = start_col
        self.annotations: list[CommentAttachment] = []

    # -- position helpers --

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos >= len(self.src):
                return
            if self.src[self.pos] == "\n":
                self.line += 1
                self.col = 0
            else:
                self.col += 1
            self.pos += 1

    def _mark(self) -> tuple[int, int]:
        return (self.line, self.col)

    def _span_from(self, mark: tuple[int, int]) -> SourceSpan:
        return SourceSpan(mark[0], mark[1], self.line, self.col)

    def _error(self, message: str, mark: Optional[tuple[int, int]] = None) -> ParseError:
        line, col = mark if mark else (self.line, self.col)
        return ParseError(SourceSpan(line, col, line, col), message)

    # -- scanning --

    def tokens(self) -> list[Token]:
        out = []
        while True:
            tok = self.next_token()
            out.append(tok)
            if tok.type == "EOF":
                return out

    def next_token(self) -> Token:
        self._skip_trivia()
        mark = self._mark()
        c = self._peek()
        if c == "":
            return Token("EOF", "", self._span_from(mark))
        if c.isalpha() or c == "_" or c == "$":
            return self._name(mark)
        if c.isdigit():
            return self._number(mark)
        if c in "'\"":
            return self._string(mark, c)
        if c == "`":
            return self._template(mark)
        for p in PUNCTUATION:
            if self.src.startswith(p, self.pos):
                self._advance(len(p))
                return Token("PUNCT", p, self._span_from(mark))
        raise self._error(f"unexpected character {c!r}")

    def _skip_trivia(self) -> None:
        while True:
            c = self._peek()
            if c and c in " \t\n":
                self._advance()
            elif c == "/" and self._peek(1) == "/":
                while self._peek() not in ("", "\n"):
                    self._advance()
            elif c == "/" and self._peek(1) == "*":
                self._block_comment()
            else:
                return

    def _block_comment(self) -> None:
        mark = self._mark()
        start = self.pos
        self._advance(2)
        structured = self._peek() == "@"
        while True:
            if self._peek() == "":
                raise self._error("unterminated comment", mark)
            if self._peek() == "*" and self._peek(1) == "/":
                self._advance(2)
                break
            self._advance()
        if structured:
            text = self.src[start:self.pos]
            self.annotations.append(CommentAttachment(self._span_from(mark), text))

    def _name(self, mark) -> Token:
        start = self.pos
        while True:
            c = self._peek()
            if c.isalnum() or c == "_" or c == "$":
                self._advance()
            else:
                break
        text = self.src[start:self.pos]
        kind = "KEYWORD" if text in KEYWORDS else "NAME"
        return Token(kind, text, self._span_from(mark))

    def _number(self, mark) -> Token:
        start = self.pos
        while self._peek().isdigit():
            self._advance()
        if self._peek() == "." and self._peek(1).isdigit():
            self._advance()
            while self._peek().isdigit():
                self._advance()
        if self._peek() in "eE" and (
            self._peek(1).isdigit()
            or (self._peek(1) in "+-" and self._peek(2).isdigit())
        ):
            self._advance()
            if self._peek() in "+-":
                self._advance()
            while self._peek().isdigit():
                self._advance()
        raw = self.src[start:self.pos]
        return Token("NUMBER", raw, self._span_from(mark), number=float(raw))

    _ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"', "`": "`", "0": "\0", "$": "$"}

    def _string(self, mark, quote: str) -> Token:
        self._advance()
        parts = []
        while True:
            c = self._peek()
            if c == "" or c == "\n":
                raise self._error("unterminated string literal", mark)
            if c == quote:
                self._advance()
                break
            if c == "\\":
                self._advance()
                esc = self._peek()
                if esc == "":
                    raise self._error("unterminated string literal", mark)
                parts.append(self._ESCAPES.get(esc, esc))
                self._advance()
            else:
                parts.append(c)
                self._advance()
        return Token("STRING", "".join(parts), self._span_from(mark))

    def _template(self, mark) -> Token:
        self._advance()
        quasis = []
        expr_parts = []
        current = []
        while True:
            c = self._peek()
            if c == "":
                raise self._error("unterminated template literal", mark)
            if c == "`":
                self._advance()
                break
            if c == "\\":
                self._advance()
                esc = self._peek()
                if esc == "":
                    raise self._error("unterminated template literal", mark)
                current.append(self._ESCAPES.get(esc, esc))
                self._advance()
            elif c == "$" and self._peek(1) == "{":
                quasis.append("".join(current))
                current = []
                self._advance(2)
                expr_line, expr_col = self.line, self.col
                expr_start = self.pos
                depth = 1
                while depth > 0:
                    ec = self._peek()
                    if ec == "":
                        raise self._error("unterminated template expression", mark)
                    if ec in "'\"":
                        self._string(self._mark(), ec)
                        continue
                    if ec == "{":
                        depth += 1
                    elif ec == "}":
                        depth -= 1
                        if depth == 0:
                            break
                    self._advance()
                expr_parts.append((self.src[expr_start:self.pos], expr_line, expr_col))
                self._advance()  # closing }
            else:
                current.append(c)
                self._advance()
        quasis.append("".join(current))
        return Token("TEMPLATE", "", self._span_from(mark), quasis=quasis, expr_parts=expr_parts)
