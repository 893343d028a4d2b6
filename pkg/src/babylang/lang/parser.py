"""Recursive-descent parser producing identified ASTs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import nodes as N
from .lexer import CommentAttachment, Lexer, ParseError, Token
from .spans import SourceSpan


@dataclass
class IdentifiedAst:
    """A parsed module whose nodes carry pre-order ids and spans."""
    module_name: str
    root: N.Module
    source: str
    comment_attachments: list[CommentAttachment] = field(default_factory=list)

    def __post_init__(self):
        self._index()

    def _index(self):
        self.preorder: list[N.Node] = list(self.root.walk())
        self.node_by_id: dict[int, N.Node] = {n.id: n for n in self.preorder}
        self.parent: dict[int, Optional[N.Node]] = {self.root.id: None}
        for node in self.preorder:
            for child in node.children():
                self.parent[child.id] = node

    def parent_of(self, node: N.Node) -> Optional[N.Node]:
        return self.parent.get(node.id)


class InvalidAst(Exception):
    """Signals a pipeline-order bug such as a tree without ids."""


ASSIGN_OPS = ("=", "+=", "-=", "*=")


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # -- token helpers --

    def peek(self, offset: int = 0) -> Token:
        i = min(self.i + offset, len(self.toks) - 1)
        return self.toks[i]

    def at(self, type_: str, value: Optional[str] = None, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.type == type_ and (value is None or tok.value == value)

    def at_punct(self, value: str, offset: int = 0) -> bool:
        return self.at("PUNCT", value, offset)

    def at_keyword(self, value: str, offset: int = 0) -> bool:
        return self.at("KEYWORD", value, offset)

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.type != "EOF":
            self.i += 1
        return tok

    def expect(self, type_: str, value: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.type != type_ or (value is not None and tok.value != value):
            want = value if value is not None else type_.lower()
            raise ParseError(tok.span, f"expected {want!r}, found {tok.value or tok.type!r}")
        return self.advance()

    def expect_punct(self, value: str) -> Token:
        return self.expect("PUNCT", value)

    def _span(self, start: SourceSpan, end_tok_span: Optional[SourceSpan] = None) -> SourceSpan:
        end = end_tok_span if end_tok_span is not None else self.toks[self.i - 1].span
        return SourceSpan(start.start_line, start.start_column, end.end_line, end.end_column)

    # -- entry points --

    def parse_module(self) -> N.Module:
        start = self.peek().span
        body = []
        while not self.at("EOF"):
            body.append(self.parse_statement())
        end = self.peek().span
        span = SourceSpan(1, 0, end.end_line, end.end_column) if body else SourceSpan(1, 0, 1, 0)
        del start
        return N.Module(body=body, span=span)

    def parse_statement_list(self) -> list[N.Node]:
        body = []
        while not self.at("EOF"):
            body.append(self.parse_statement())
        return body

    def parse_single_expression(self) -> N.Node:
        expr = self.parse_expression()
        if not self.at("EOF"):
            tok = self.peek()
            raise ParseError(tok.span, f"unexpected trailing input {tok.value!r}")
        return expr

    # -- statements --

    def parse_statement(self) -> N.Node:
        tok = self.peek()
        if tok.type == "KEYWORD":
            if tok.value == "import":
                return self.parse_import()
            if tok.value == "export":
                return self.parse_export()
            if tok.value == "function":
                return self.parse_function_decl()
            if tok.value == "class":
                return self.parse_class_decl()
            if tok.value in ("let", "const", "var"):
                stmt = self.parse_var_decl()
                self.expect_punct(";")
                return stmt
            if tok.value == "if":
                return self.parse_if()
            if tok.value == "while":
                return self.parse_while()
            if tok.value == "for":
                return self.parse_for()
            if tok.value == "return":
                return self.parse_return()
        expr = self.parse_expression()
        end = self.expect_punct(";")
        return N.ExprStmt(value=expr, span=self._span(expr.span, end.span))

    def parse_import(self) -> N.Node:
        start = self.expect("KEYWORD", "import").span
        default_name = None
        named: list[str] = []
        if self.peek().type == "NAME":
            default_name = self.advance().value
        elif self.at_punct("{"):
            self.advance()
            while not self.at_punct("}"):
                named.append(self.expect("NAME").value)
                if not self.at_punct("}"):
                    self.expect_punct(",")
            self.expect_punct("}")
        else:
            raise ParseError(self.peek().span, "expected import binding")
        self.expect("KEYWORD", "from")
        source = self.expect("STRING").value
        end = self.expect_punct(";")
        return N.ImportDecl(default_name=default_name, named=named, source=source,
                            span=self._span(start, end.span))

    def parse_export(self) -> N.Node:
        start = self.expect("KEYWORD", "export").span
        default = False
        if self.at_keyword("default"):
            self.advance()
            default = True
        tok = self.peek()
        if self.at_keyword("function"):
            decl = self.parse_function_decl()
        elif self.at_keyword("class"):
            decl = self.parse_class_decl()
        elif tok.type == "KEYWORD" and tok.value in ("let", "const", "var"):
            decl = self.parse_var_decl()
            self.expect_punct(";")
        else:
            raise ParseError(tok.span, "expected declaration after 'export'")
        return N.ExportDecl(decl=decl, default=default, span=self._span(start))

    def parse_function_decl(self) -> N.Node:
        start = self.expect("KEYWORD", "function").span
        name_tok = self.expect("NAME")
        name = N.Identifier(name=name_tok.value, span=name_tok.span)
        params = self.parse_params()
        body = self.parse_block()
        return N.FunctionDecl(name=name, params=params, body=body, span=self._span(start))

    def parse_params(self) -> list[N.Identifier]:
        self.expect_punct("(")
        params = []
        while not self.at_punct(")"):
            tok = self.expect("NAME")
            params.append(N.Identifier(name=tok.value, span=tok.span))
            if not self.at_punct(")"):
                self.expect_punct(",")
        self.expect_punct(")")
        return params

    def parse_class_decl(self) -> N.Node:
        start = self.expect("KEYWORD", "class").span
        name_tok = self.expect("NAME")
        name = N.Identifier(name=name_tok.value, span=name_tok.span)
        self.expect_punct("{")
        methods = []
        while not self.at_punct("}"):
            methods.append(self.parse_method())
        self.expect_punct("}")
        return N.ClassDecl(name=name, methods=methods, span=self._span(start))

    def parse_method(self) -> N.MethodDef:
        start_tok = self.peek()
        is_static = False
        if self.at_keyword("static"):
            self.advance()
            is_static = True
        name_tok = self.peek()
        if name_tok.type not in ("NAME", "KEYWORD"):
            raise ParseError(name_tok.span, "expected method name")
        self.advance()
        name = N.Identifier(name=name_tok.value, span=name_tok.span)
        params = self.parse_params()
        body = self.parse_block()
        return N.MethodDef(name=name, params=params, body=body, is_static=is_static,
                           is_ctor=(name_tok.value == "constructor"),
                           span=self._span(start_tok.span))

    def parse_var_decl(self) -> N.Node:
        kw = self.advance()  # let | const | var
        name_tok = self.expect("NAME")
        name = N.Identifier(name=name_tok.value, span=name_tok.span)
        init = None
        if self.at_punct("="):
            self.advance()
            init = self.parse_assignment_expr()
        return N.VarDecl(decl_kind=kw.value, name=name, init=init, span=self._span(kw.span))

    def parse_if(self) -> N.Node:
        start = self.expect("KEYWORD", "if").span
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        then = self.parse_block_or_statement()
        orelse = None
        if self.at_keyword("else"):
            self.advance()
            if self.at_keyword("if"):
                orelse = self.parse_if()
            else:
                orelse = self.parse_block_or_statement()
        return N.If(test=test, then=then, orelse=orelse, span=self._span(start))

    def parse_while(self) -> N.Node:
        start = self.expect("KEYWORD", "while").span
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_block_or_statement()
        return N.While(test=test, body=body, span=self._span(start))

    def parse_for(self) -> N.Node:
        start = self.expect("KEYWORD", "for").span
        self.expect_punct("(")
        init = None
        if not self.at_punct(";"):
            if self.peek().type == "KEYWORD" and self.peek().value in ("let", "const", "var"):
                init = self.parse_var_decl()
            else:
                expr = self.parse_expression()
                init = N.ExprStmt(value=expr, span=expr.span)
        self.expect_punct(";")
        test = None if self.at_punct(";") else self.parse_expression()
        self.expect_punct(";")
        update = None if self.at_punct(")") else self.parse_expression()
        self.expect_punct(")")
        body = self.parse_block_or_statement()
        return N.For(init=init, test=test, update=update, body=body, span=self._span(start))

    def parse_return(self) -> N.Node:
        start = self.expect("KEYWORD", "return").span
        value = None
        if not self.at_punct(";"):
            value = self.parse_expression()
        end = self.expect_punct(";")
        return N.Return(value=value, span=self._span(start, end.span))

    def parse_block(self) -> N.Block:
        start = self.expect_punct("{").span
        body = []
        while not self.at_punct("}"):
            if self.at("EOF"):
                raise ParseError(self.peek().span, "unterminated block")
            body.append(self.parse_statement())
        end = self.expect_punct("}")
        return N.Block(body=body, span=self._span(start, end.span))

    def parse_block_or_statement(self) -> N.Node:
        if self.at_punct("{"):
            # `{` opening a body is always a block, never an object literal.
            return self.parse_block()
        return self.parse_statement()

    # -- expressions --

    def parse_expression(self) -> N.Node:
        return self.parse_assignment_expr()

    def parse_assignment_expr(self) -> N.Node:
        left = self.parse_or()
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value in ASSIGN_OPS:
            self._check_target(left, tok)
            self.advance()
            value = self.parse_assignment_expr()
            return N.Assignment(op=tok.value, target=left, value=value,
                                span=self._span(left.span))
        return left

    def _check_target(self, node: N.Node, tok: Token) -> None:
        if node.kind == "Identifier" and node.name != "this":
            return
        if node.kind in ("Member", "Index"):
            return
        raise ParseError(tok.span, "invalid assignment target")

    def _binary_level(self, ops: tuple[str, ...], next_level) -> N.Node:
        left = next_level()
        while self.peek().type == "PUNCT" and self.peek().value in ops:
            op = self.advance().value
            right = next_level()
            left = N.Binary(op=op, left=left, right=right, span=self._span(left.span))
        return left

    def parse_or(self) -> N.Node:
        return self._binary_level(("||",), self.parse_and)

    def parse_and(self) -> N.Node:
        return self._binary_level(("&&",), self.parse_equality)

    def parse_equality(self) -> N.Node:
        return self._binary_level(("===", "!==", "==", "!="), self.parse_relational)

    def parse_relational(self) -> N.Node:
        return self._binary_level(("<", "<=", ">", ">="), self.parse_shift)

    def parse_shift(self) -> N.Node:
        return self._binary_level((">>",), self.parse_additive)

    def parse_additive(self) -> N.Node:
        return self._binary_level(("+", "-"), self.parse_multiplicative)

    def parse_multiplicative(self) -> N.Node:
        return self._binary_level(("*", "/", "%"), self.parse_unary)

    def parse_unary(self) -> N.Node:
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value in ("!", "-"):
            self.advance()
            operand = self.parse_unary()
            return N.Unary(op=tok.value, operand=operand, span=self._span(tok.span))
        if tok.type == "PUNCT" and tok.value == "++":
            self.advance()
            target = self.parse_postfix()
            self._check_target(target, tok)
            return N.Update(op="++", target=target, prefix=True, span=self._span(tok.span))
        return self.parse_postfix()

    def parse_postfix(self) -> N.Node:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if self.at_punct("."):
                self.advance()
                prop = self.peek()
                if prop.type not in ("NAME", "KEYWORD"):
                    raise ParseError(prop.span, "expected property name")
                self.advance()
                expr = N.Member(obj=expr, prop=prop.value, span=self._span(expr.span))
            elif self.at_punct("["):
                self.advance()
                index = self.parse_expression()
                end = self.expect_punct("]")
                expr = N.Index(obj=expr, index=index, span=self._span(expr.span, end.span))
            elif self.at_punct("("):
                args = self.parse_args()
                expr = N.Call(callee=expr, args=args, span=self._span(expr.span))
            elif self.at_punct("++"):
                self._check_target(expr, tok)
                self.advance()
                expr = N.Update(op="++", target=expr, prefix=False, span=self._span(expr.span))
            else:
                return expr

    def parse_args(self) -> list[N.Node]:
        self.expect_punct("(")
        args = []
        while not self.at_punct(")"):
            args.append(self.parse_assignment_expr())
            if not self.at_punct(")"):
                self.expect_punct(",")
        self.expect_punct(")")
        return args

    def parse_primary(self) -> N.Node:
        tok = self.peek()
        if tok.type == "NUMBER":
            self.advance()
            return N.NumberLit(value=tok.number, raw=tok.value, span=tok.span)
        if tok.type == "STRING":
            self.advance()
            return N.StringLit(value=tok.value, span=tok.span)
        if tok.type == "TEMPLATE":
            self.advance()
            exprs = [parse_expression_text(src, line, col)
                     for src, line, col in tok.expr_parts]
            return N.TemplateLit(quasis=list(tok.quasis), exprs=exprs, span=tok.span)
        if tok.type == "KEYWORD":
            if tok.value in ("true", "false"):
                self.advance()
                return N.BoolLit(value=(tok.value == "true"), span=tok.span)
            if tok.value == "null":
                self.advance()
                return N.NullLit(span=tok.span)
            if tok.value == "this":
                self.advance()
                return N.Identifier(name="this", span=tok.span)
            if tok.value == "function":
                return self.parse_function_expr()
            if tok.value == "new":
                return self.parse_new()
        if tok.type == "NAME":
            if self.at_punct("=>", offset=1):
                return self.parse_arrow_single(tok)
            self.advance()
            return N.Identifier(name=tok.value, span=tok.span)
        if self.at_punct("("):
            if self._looks_like_arrow_params():
                return self.parse_arrow_parenthesized()
            self.advance()
            expr = self.parse_expression()
            self.expect_punct(")")
            return expr
        if self.at_punct("["):
            return self.parse_array_lit()
        if self.at_punct("{"):
            return self.parse_object_lit()
        raise ParseError(tok.span, f"unexpected token {tok.value or tok.type!r}")

    def parse_function_expr(self) -> N.Node:
        start = self.expect("KEYWORD", "function").span
        params = self.parse_params()
        body = self.parse_block()
        return N.FunctionExpr(params=params, body=body, span=self._span(start))

    def parse_new(self) -> N.Node:
        start = self.expect("KEYWORD", "new").span
        callee = self.parse_primary()
        while self.at_punct("."):
            self.advance()
            prop = self.expect("NAME")
            callee = N.Member(obj=callee, prop=prop.value, span=self._span(callee.span))
        args = self.parse_args()
        return N.New(callee=callee, args=args, span=self._span(start))

    def _looks_like_arrow_params(self) -> bool:
        # At "(", scan to the matching ")" and check for "=>".
        depth = 0
        j = 0
        while True:
            tok = self.peek(j)
            if tok.type == "EOF":
                return False
            if tok.type == "PUNCT":
                if tok.value == "(":
                    depth += 1
                elif tok.value == ")":
                    depth -= 1
                    if depth == 0:
                        return self.at_punct("=>", offset=j + 1)
            j += 1

    def parse_arrow_single(self, tok: Token) -> N.Node:
        self.advance()  # name
        self.expect_punct("=>")
        param = N.Identifier(name=tok.value, span=tok.span)
        body = self.parse_arrow_body()
        return N.ArrowExpr(params=[param], body=body, span=self._span(tok.span))

    def parse_arrow_parenthesized(self) -> N.Node:
        start = self.peek().span
        params = self.parse_params()
        self.expect_punct("=>")
        body = self.parse_arrow_body()
        return N.ArrowExpr(params=params, body=body, span=self._span(start))

    def parse_arrow_body(self) -> N.Node:
        if self.at_punct("{"):
            return self.parse_block()
        return self.parse_assignment_expr()

    def parse_array_lit(self) -> N.Node:
        start = self.expect_punct("[").span
        elements = []
        while not self.at_punct("]"):
            elements.append(self.parse_assignment_expr())
            if not self.at_punct("]"):
                self.expect_punct(",")
        end = self.expect_punct("]")
        return N.ArrayLit(elements=elements, span=self._span(start, end.span))

    def parse_object_lit(self) -> N.Node:
        start = self.expect_punct("{").span
        keys = []
        values = []
        while not self.at_punct("}"):
            key_tok = self.peek()
            if key_tok.type in ("NAME", "KEYWORD"):
                self.advance()
                keys.append(N.Identifier(name=key_tok.value, span=key_tok.span))
            elif key_tok.type == "STRING":
                self.advance()
                keys.append(N.StringLit(value=key_tok.value, span=key_tok.span))
            elif key_tok.type == "NUMBER":
                self.advance()
                keys.append(N.NumberLit(value=key_tok.number, raw=key_tok.value, span=key_tok.span))
            else:
                raise ParseError(key_tok.span, "expected property key")
            self.expect_punct(":")
            values.append(self.parse_assignment_expr())
            if not self.at_punct("}"):
                self.expect_punct(",")
        end = self.expect_punct("}")
        return N.ObjectLit(keys=keys, values=values, span=self._span(start, end.span))


def parse_module(source: str, module_name: str) -> IdentifiedAst:
    """Parse a whole module; raises ParseError, never returns a partial tree."""
    if not module_name:
        raise ValueError("module_name must be nonempty")
    lexer = Lexer(source)
    tokens = lexer.tokens()
    root = Parser(tokens).parse_module()
    N.assign_ids(root)
    return IdentifiedAst(module_name=module_name, root=root, source=source,
                         comment_attachments=list(lexer.annotations))


def parse_expression_text(source: str, start_line: int = 1, start_col: int = 0) -> N.Node:
    """Parse a single expression (used for payloads and template interpolations)."""
    lexer = Lexer(source, start_line=start_line, start_col=start_col)
    return Parser(lexer.tokens()).parse_single_expression()


def parse_statements_text(source: str, start_line: int = 1, start_col: int = 0) -> list[N.Node]:
    """Parse a statement list (used for scripts and custom template bodies)."""
    lexer = Lexer(source, start_line=start_line, start_col=start_col)
    return Parser(lexer.tokens()).parse_statement_list()
