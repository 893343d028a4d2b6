from .spans import SourceSpan, location_key
from .lexer import Lexer, ParseError, Token, CommentAttachment, normalize_newlines
from .parser import (IdentifiedAst, InvalidAst, parse_module,
                     parse_expression_text, parse_statements_text)
from .locations import LocationMap, build_location_map, keyword_span
from .printer import to_source
from . import nodes

__all__ = [
    "SourceSpan", "location_key", "Lexer", "ParseError", "Token",
    "CommentAttachment", "normalize_newlines", "IdentifiedAst", "InvalidAst",
    "parse_module", "parse_expression_text", "parse_statements_text",
    "LocationMap", "build_location_map", "keyword_span", "to_source", "nodes",
]
