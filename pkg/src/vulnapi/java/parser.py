"""Recursive-descent parser for the supported Java subset.

Covered: package/imports, classes, interfaces and enums with one level of
nested types, fields, methods, constructors, and the common statement and
expression forms. Local type declarations and switch expressions are kept
as opaque token runs; anonymous class bodies are kept as opaque tokens on
their ``New`` node. Annotations, annotation types and records are skipped.
"""

from __future__ import annotations

from ..errors import ParseError
from . import nodes as n
from .lexer import PRIMITIVES, Token, tokenize

_CLASS_MODIFIERS = frozenset(
    "public private protected static final abstract native synchronized transient "
    "volatile strictfp default".split()
)
_ASSIGN_OPS = frozenset("= += -= *= /= %= &= |= ^= <<= >>= >>>=".split())
_BINARY_PREC = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5, "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7,
    "<<": 8, ">>": 8, ">>>": 8, "+": 9, "-": 9, "*": 10, "/": 10, "%": 10,
}
_PREFIX_OPS = frozenset("+ - ++ -- ! ~".split())
_LITERAL_KW = frozenset(("true", "false", "null"))
_CAST_FOLLOW_KW = frozenset(("this", "super", "new", "true", "false", "null", "switch"))


def erase_type(type_text: str) -> str:
    """Drop generic arguments and normalize varargs to array form."""
    out = []
    depth = 0
    for ch in type_text:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif depth == 0 and not ch.isspace():
            out.append(ch)
    text = "".join(out)
    if text.endswith("..."):
        text = text[:-3] + "[]"
    return text


def parse_source(text: str, path: str = "<string>") -> n.CompilationUnit:
    """Parse one Java source file into a compilation unit.

    Raises ParseError with a line/column location on malformed input.
    """
    return _Parser(tokenize(text, path), path).compilation_unit()


def parse_statements(text: str, path: str = "<string>") -> tuple[n.Stmt, ...]:
    """Parse a bare statement list (handy for tests and debugging)."""
    p = _Parser(tokenize(text, path), path)
    stmts = []
    while p.tok.kind != "eof":
        stmts.append(p.statement())
    return tuple(stmts)


def parse_expression(text: str, path: str = "<string>") -> n.Expr:
    p = _Parser(tokenize(text, path), path)
    e = p.expression()
    p.expect_kind("eof")
    return e


class _Parser:
    def __init__(self, tokens: list[Token], path: str):
        self.toks = tokens
        self.pos = 0
        self.path = path
        self.no_lambda = False

    # --- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        i = min(self.pos + k, len(self.toks) - 1)
        return self.toks[i]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind != "string" and t.kind != "char" and t.text in texts

    def peek_is(self, k: int, *texts: str) -> bool:
        t = self.peek(k)
        return t.kind not in ("string", "char") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        t = tok or self.tok
        found = t.text if t.kind != "eof" else "end of input"
        return ParseError(f"{message} (found {found!r})", self.path, t.line, t.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def expect_kind(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {kind}")
        return self.advance()

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise self.error("expected identifier")
        return self.advance().text

    def collect_balanced(self) -> list[str]:
        """Consume one bracketed group starting at ``(``, ``{`` or ``[``."""
        pairs = {"(": ")", "{": "}", "[": "]"}
        if not self.at(*pairs):
            raise self.error("expected bracket")
        stack = []
        out = []
        while True:
            t = self.advance()
            if t.kind == "eof":
                raise self.error("unbalanced brackets", t)
            out.append(t.text)
            if t.kind == "op" and t.text in pairs:
                stack.append(pairs[t.text])
            elif t.kind == "op" and t.text in (")", "}", "]"):
                if not stack or stack.pop() != t.text:
                    raise self.error("mismatched bracket", t)
                if not stack:
                    return out

    def skip_annotation(self):
        self.expect("@")
        self.ident()
        while self.at(".") and self.peek().kind == "ident":
            self.advance()
            self.advance()
        if self.at("("):
            self.collect_balanced()

    def skip_annotations(self):
        while self.at("@") and not self.peek_is(1, "interface"):
            self.skip_annotation()

    # --- types -------------------------------------------------------------

    def type_(self, allow_varargs: bool = False) -> str:
        self.skip_annotations()
        t = self.tok
        if t.kind == "keyword" and t.text in PRIMITIVES:
            self.advance()
            text = t.text
        elif t.kind == "ident":
            text = self.class_type()
        else:
            raise self.error("expected type")
        while self.at("[") and self.peek_is(1, "]"):
            self.advance()
            self.advance()
            text += "[]"
        if allow_varargs and self.accept("..."):
            text += "..."
        return text

    def class_type(self) -> str:
        text = self.ident()
        if self.at("<"):
            text += self.type_args()
        while self.at(".") and self.peek().kind == "ident":
            self.advance()
            text += "." + self.ident()
            if self.at("<"):
                text += self.type_args()
        return text

    def type_args(self) -> str:
        self.expect("<")
        if self.accept(">"):
            return "<>"
        args = [self.type_arg()]
        while self.accept(","):
            args.append(self.type_arg())
        self.expect(">")
        return "<" + ", ".join(args) + ">"

    def type_arg(self) -> str:
        self.skip_annotations()
        if self.accept("?"):
            if self.at("extends", "super"):
                kw = self.advance().text
                return f"? {kw} {self.type_()}"
            return "?"
        return self.type_()

    def type_params(self) -> str:
        """Consume ``<T extends Foo & Bar, U>`` and return canonical text."""
        self.expect("<")
        params = []
        while True:
            self.skip_annotations()
            name = self.ident()
            if self.accept("extends"):
                bounds = [self.type_()]
                while self.accept("&"):
                    bounds.append(self.type_())
                name += " extends " + " & ".join(bounds)
            params.append(name)
            if not self.accept(","):
                break
        self.expect(">")
        return "<" + ", ".join(params) + ">"

    # --- declarations ------------------------------------------------------

    def compilation_unit(self) -> n.CompilationUnit:
        self.skip_annotations()
        package = ""
        if self.accept("package"):
            package = self.qualified_name()
            self.expect(";")
        imports = []
        while self.at("import"):
            self.advance()
            static = self.accept("static")
            name = self.qualified_name()
            wildcard = False
            if self.accept("."):
                self.expect("*")
                wildcard = True
            self.expect(";")
            imports.append(n.Import(name, static, wildcard))
        classes = []
        while self.tok.kind != "eof":
            if self.accept(";"):
                continue
            decl = self.type_decl(depth=0)
            if decl is not None:
                classes.append(decl)
        names = [c.name for c in classes]
        if len(set(names)) != len(names):
            raise ParseError("duplicate class name in unit", self.path, 1, 1)
        return n.CompilationUnit(package, tuple(imports), tuple(classes), self.path)

    def qualified_name(self) -> str:
        parts = [self.ident()]
        while self.at(".") and self.peek().kind == "ident":
            self.advance()
            parts.append(self.ident())
        return ".".join(parts)

    def modifiers(self) -> tuple[str, ...]:
        mods = []
        while True:
            if self.at("@") and not self.peek_is(1, "interface"):
                self.skip_annotation()
            elif self.tok.kind == "keyword" and self.tok.text in _CLASS_MODIFIERS:
                if self.tok.text == "default" and self.peek_is(1, ":", "->"):
                    break
                mods.append(self.advance().text)
            elif self.tok.kind == "ident" and self.tok.text in ("sealed", "non") and self._is_sealed_modifier():
                continue
            else:
                break
        return tuple(mods)

    def _is_sealed_modifier(self) -> bool:
        if self.tok.text == "sealed" and self.peek().kind in ("keyword", "ident"):
            if self.peek_is(1, "class", "interface", "abstract", "public", "static", "final"):
                self.advance()
                return True
        if self.tok.text == "non" and self.peek_is(1, "-") and self.peek(2).text == "sealed":
            self.advance(), self.advance(), self.advance()
            return True
        return False

    def _at_type_decl_keyword(self) -> bool:
        if self.at("class", "interface", "enum"):
            return True
        if self.at("@") and self.peek_is(1, "interface"):
            return True
        return self.tok.kind == "ident" and self.tok.text == "record" and self.peek().kind == "ident"

    def type_decl(self, depth: int, mods: tuple[str, ...] | None = None) -> n.ClassDecl | None:
        if mods is None:
            mods = self.modifiers()
        if self.at("@"):
            self.advance()
            self.expect("interface")
            self.ident()
            self.collect_balanced()
            return None
        if self.tok.text == "record":
            while not self.at("{"):
                if self.tok.kind == "eof":
                    raise self.error("unterminated record declaration")
                self.advance()
            self.collect_balanced()
            return None
        kind = self.advance().text
        if kind not in ("class", "interface", "enum"):
            raise self.error("expected class, interface or enum", self.peek(-1))
        name = self.ident()
        tparams = self.type_params() if self.at("<") else ""
        super_name = None
        interfaces: list[str] = []
        if self.accept("extends"):
            if kind == "interface":
                interfaces.append(self.type_())
                while self.accept(","):
                    interfaces.append(self.type_())
            else:
                super_name = self.type_()
        if self.accept("implements"):
            interfaces.append(self.type_())
            while self.accept(","):
                interfaces.append(self.type_())
        if self.tok.kind == "ident" and self.tok.text == "permits":
            self.advance()
            self.type_()
            while self.accept(","):
                self.type_()
        self.expect("{")
        constants: list[str] = []
        if kind == "enum":
            constants = self.enum_constants()
        fields: list[n.FieldDecl] = []
        methods: list[n.MethodDecl] = []
        inner: list[n.ClassDecl] = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated class body")
            self.member(name, depth, fields, methods, inner)
        seen = set()
        for m in methods:
            key = (m.name, tuple(erase_type(p.type) for p in m.params))
            if key in seen:
                raise ParseError(f"duplicate method {m.name} in class {name}", self.path, m.span[0], 1)
            seen.add(key)
        fnames = [f.name for f in fields]
        if len(set(fnames)) != len(fnames):
            raise ParseError(f"duplicate field in class {name}", self.path, 1, 1)
        return n.ClassDecl(
            name=name, kind=kind, super_name=super_name, interfaces=tuple(interfaces),
            fields=tuple(fields), methods=tuple(methods), inner=tuple(inner),
            modifiers=mods, type_params=tparams, enum_constants=tuple(constants),
        )

    def enum_constants(self) -> list[str]:
        constants: list[str] = []
        current: list[str] = []
        depth = 0
        while True:
            t = self.tok
            if t.kind == "eof":
                raise self.error("unterminated enum body")
            if depth == 0 and t.kind == "op" and t.text in (";", "}"):
                if current:
                    constants.append(" ".join(current))
                if t.text == ";":
                    self.advance()
                return constants
            if depth == 0 and t.kind == "op" and t.text == ",":
                self.advance()
                if current:
                    constants.append(" ".join(current))
                current = []
                continue
            if t.kind == "op" and t.text == "@" and depth == 0 and not current:
                self.skip_annotation()
                continue
            if t.kind == "op" and t.text in "({[":
                depth += 1
            elif t.kind == "op" and t.text in ")}]":
                depth -= 1
            current.append(self.advance().text)

    def member(self, cname, depth, fields, methods, inner):
        if self.accept(";"):
            return
        if self.at("{") or (self.at("static") and self.peek_is(1, "{")):
            self.accept("static")
            self.collect_balanced()  # initializer blocks are not methods
            return
        start = self.tok
        mods = self.modifiers()
        if self._at_type_decl_keyword():
            if depth == 0:
                decl = self.type_decl(depth=1, mods=mods)
                if decl is not None:
                    inner.append(decl)
            else:
                while not self.at("{"):
                    if self.tok.kind == "eof":
                        raise self.error("unterminated nested type")
                    self.advance()
                self.collect_balanced()
            return
        tparams = self.type_params() if self.at("<") else ""
        if self.tok.kind == "ident" and self.tok.text == cname and self.peek_is(1, "("):
            self.advance()
            methods.append(self.method_rest("<init>", "void", mods, tparams, start))
            return
        rtype = self.type_()
        name_tok = self.tok
        name = self.ident()
        if self.at("("):
            methods.append(self.method_rest(name, rtype, mods, tparams, start))
            return
        if tparams:
            raise self.error("type parameters on a field", name_tok)
        self.pos -= 1
        while True:
            fname = self.ident()
            ftype = rtype
            while self.at("[") and self.peek_is(1, "]"):
                self.advance()
                self.advance()
                ftype += "[]"
            init = None
            if self.accept("="):
                init = self.var_init()
            fields.append(n.FieldDecl(fname, ftype, init, mods))
            if not self.accept(","):
                break
        self.expect(";")

    def method_rest(self, name, rtype, mods, tparams, start_tok) -> n.MethodDecl:
        params = self.formal_params()
        while self.at("[") and self.peek_is(1, "]"):
            self.advance()
            self.advance()
            rtype += "[]"
        throws = []
        if self.accept("throws"):
            throws.append(self.type_())
            while self.accept(","):
                throws.append(self.type_())
        body = None
        if self.at("{"):
            body = self.block()
        elif self.accept("default"):
            self.expression()
            self.expect(";")
        else:
            self.expect(";")
        end_line = self.toks[self.pos - 1].line
        return n.MethodDecl(
            name=name, return_type=rtype, params=tuple(params), body=body, modifiers=mods,
            type_params=tparams, throws=tuple(throws), span=(start_tok.line, end_line),
        )

    def formal_params(self) -> list[n.Param]:
        self.expect("(")
        params: list[n.Param] = []
        if self.accept(")"):
            return params
        while True:
            pmods = self.local_modifiers()
            ptype = self.type_(allow_varargs=True)
            if self.at("this"):
                self.advance()  # receiver parameter
            else:
                pname = self.ident()
                while self.at("[") and self.peek_is(1, "]"):
                    self.advance()
                    self.advance()
                    ptype += "[]"
                varargs = ptype.endswith("...")
                params.append(n.Param(ptype, pname, varargs, pmods))
            if not self.accept(","):
                break
        self.expect(")")
        return params

    def local_modifiers(self) -> tuple[str, ...]:
        mods = []
        while True:
            if self.at("@") and not self.peek_is(1, "interface"):
                self.skip_annotation()
            elif self.at("final"):
                mods.append(self.advance().text)
            else:
                return tuple(mods)

    def var_init(self) -> n.Expr:
        if self.at("{"):
            return self.array_init()
        return self.expression()

    def array_init(self) -> n.ArrayInit:
        self.expect("{")
        elems = []
        while not self.at("}"):
            elems.append(self.var_init())
            if not self.accept(","):
                break
        self.expect("}")
        return n.ArrayInit(tuple(elems))

    # --- statements --------------------------------------------------------

    def block(self) -> n.Block:
        self.expect("{")
        stmts = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated block")
            stmts.append(self.statement())
        return n.Block(tuple(stmts))

    def body(self) -> n.Block:
        s = self.statement()
        return s if isinstance(s, n.Block) else n.Block((s,))

    def statement(self) -> n.Stmt:
        t = self.tok
        if t.kind == "op":
            if t.text == "{":
                return self.block()
            if t.text == ";":
                self.advance()
                return n.Empty()
        if t.kind == "keyword":
            handler = getattr(self, f"stmt_{t.text}", None)
            if handler is not None:
                return handler()
        if t.kind == "ident" and self.peek_is(1, ":") and not self.peek_is(2, ":"):
            label = self.advance().text
            self.advance()
            return n.Labeled(label, self.statement())
        if self._at_local_type_decl():
            return self.opaque_type_decl()
        local = self.try_local_var()
        if local is not None:
            self.expect(";")
            return local
        e = self.expression()
        self.expect(";")
        return n.ExprStmt(e)

    def _at_local_type_decl(self) -> bool:
        i = 0
        while True:
            t = self.peek(i)
            if t.kind == "keyword" and t.text in ("final", "abstract", "static", "strictfp"):
                i += 1
            elif t.kind == "op" and t.text == "@":
                return self.peek_is(i + 1, "interface") or self.peek(i + 1).kind == "ident" and self._annotation_then_decl(i)
            else:
                break
        t = self.peek(i)
        if t.kind == "keyword" and t.text in ("class", "interface", "enum"):
            return True
        return t.kind == "ident" and t.text == "record" and self.peek(i + 1).kind == "ident" and self.peek_is(i + 2, "(", "<")

    def _annotation_then_decl(self, offset: int) -> bool:
        mark = self.pos
        try:
            self.pos += offset
            self.skip_annotations()
            while self.at("final", "abstract", "static"):
                self.advance()
            return self.at("class", "interface", "enum")
        except ParseError:
            return False
        finally:
            self.pos = mark

    def opaque_type_decl(self) -> n.UnknownStmt:
        toks = []
        while not self.at("{"):
            if self.tok.kind == "eof":
                raise self.error("unterminated local type declaration")
            toks.append(self.advance().text)
        toks.extend(self.collect_balanced())
        return n.UnknownStmt(tuple(toks))

    def try_local_var(self) -> n.LocalVar | None:
        mark = self.pos
        try:
            mods = self.local_modifiers()
            vtype = self.type_()
            if self.tok.kind != "ident" or not self.peek_is(1, "=", ";", ",", "["):
                raise self.error("not a declaration")
        except ParseError:
            self.pos = mark
            return None
        decls = []
        while True:
            name = self.ident()
            dims = 0
            while self.at("[") and self.peek_is(1, "]"):
                self.advance()
                self.advance()
                dims += 1
            init = self.var_init() if self.accept("=") else None
            decls.append(n.Declarator(name, dims, init))
            if not self.accept(","):
                break
        return n.LocalVar(vtype, tuple(decls), mods)

    def paren_expr(self) -> n.Expr:
        self.expect("(")
        e = self.expression()
        self.expect(")")
        return e

    def stmt_if(self):
        self.advance()
        cond = self.paren_expr()
        then = self.body()
        otherwise = self.body() if self.accept("else") else None
        return n.If(cond, then, otherwise)

    def stmt_while(self):
        self.advance()
        cond = self.paren_expr()
        return n.While(cond, self.body())

    def stmt_do(self):
        self.advance()
        body = self.body()
        self.expect("while")
        cond = self.paren_expr()
        self.expect(";")
        return n.DoWhile(body, cond)

    def stmt_for(self):
        self.advance()
        self.expect("(")
        mark = self.pos
        try:
            mods = self.local_modifiers()
            vtype = self.type_()
            vname = self.ident()
            self.expect(":")
        except ParseError:
            self.pos = mark
        else:
            iterable = self.expression()
            self.expect(")")
            return n.ForEach(vtype, vname, iterable, self.body(), mods)
        init: list[n.Stmt] = []
        if not self.at(";"):
            local = self.try_local_var()
            if local is not None:
                init.append(local)
            else:
                init.append(n.ExprStmt(self.expression()))
                while self.accept(","):
                    init.append(n.ExprStmt(self.expression()))
        self.expect(";")
        cond = None if self.at(";") else self.expression()
        self.expect(";")
        update = []
        if not self.at(")"):
            update.append(self.expression())
            while self.accept(","):
                update.append(self.expression())
        self.expect(")")
        return n.For(tuple(init), cond, tuple(update), self.body())

    def stmt_return(self):
        self.advance()
        e = None if self.at(";") else self.expression()
        self.expect(";")
        return n.Return(e)

    def stmt_throw(self):
        self.advance()
        e = self.expression()
        self.expect(";")
        return n.Throw(e)

    def stmt_break(self):
        self.advance()
        label = self.ident() if self.tok.kind == "ident" else None
        self.expect(";")
        return n.Break(label)

    def stmt_continue(self):
        self.advance()
        label = self.ident() if self.tok.kind == "ident" else None
        self.expect(";")
        return n.Continue(label)

    def stmt_synchronized(self):
        self.advance()
        lock = self.paren_expr()
        return n.Synchronized(lock, self.block())

    def stmt_assert(self):
        self.advance()
        cond = self.expression()
        msg = self.expression() if self.accept(":") else None
        self.expect(";")
        return n.Assert(cond, msg)

    def stmt_try(self):
        self.advance()
        resources: list[n.Stmt] = []
        if self.accept("("):
            while not self.at(")"):
                local = self.try_local_var()
                resources.append(local if local is not None else n.ExprStmt(self.expression()))
                if not self.accept(";"):
                    break
            self.expect(")")
        body = self.block()
        catches = []
        while self.accept("catch"):
            self.expect("(")
            cmods = self.local_modifiers()
            types = [self.type_()]
            while self.accept("|"):
                types.append(self.type_())
            cname = self.ident()
            self.expect(")")
            catches.append(n.Catch(tuple(types), cname, self.block(), cmods))
        final = self.block() if self.accept("finally") else None
        if not catches and final is None and not resources:
            raise self.error("try without catch or finally")
        return n.Try(tuple(resources), body, tuple(catches), final)

    def stmt_switch(self):
        self.advance()
        selector = self.paren_expr()
        self.expect("{")
        cases = []
        while not self.accept("}"):
            labels: list[n.Expr] = []
            if self.accept("default"):
                pass
            elif self.accept("case"):
                saved = self.no_lambda
                self.no_lambda = True
                try:
                    labels.append(self.conditional())
                    while self.accept(","):
                        labels.append(self.conditional())
                finally:
                    self.no_lambda = saved
            else:
                raise self.error("expected case or default")
            if self.accept("->"):
                if self.at("{"):
                    body = (self.block(),)
                elif self.at("throw"):
                    body = (self.stmt_throw(),)
                else:
                    e = self.expression()
                    self.expect(";")
                    body = (n.ExprStmt(e),)
                cases.append(n.SwitchCase(tuple(labels), True, body))
                continue
            self.expect(":")
            stmts = []
            while not self.at("case", "default", "}"):
                if self.tok.kind == "eof":
                    raise self.error("unterminated switch")
                stmts.append(self.statement())
            cases.append(n.SwitchCase(tuple(labels), False, tuple(stmts)))
        return n.Switch(selector, tuple(cases))

    # --- expressions -------------------------------------------------------

    def expression(self) -> n.Expr:
        lam = self.try_lambda()
        if lam is not None:
            return lam
        lhs = self.conditional()
        if self.tok.kind == "op" and self.tok.text in _ASSIGN_OPS:
            op = self.advance().text
            return n.Assign(op, lhs, self.expression())
        return lhs

    def try_lambda(self) -> n.Lambda | None:
        if self.no_lambda:
            return None
        if self.tok.kind == "ident" and self.peek_is(1, "->"):
            name = self.advance().text
            self.advance()
            return n.Lambda((name,), False, self.lambda_body())
        if not self.at("("):
            return None
        depth = 0
        i = self.pos
        while True:
            t = self.toks[i]
            if t.kind == "eof":
                return None
            if t.kind == "op" and t.text == "(":
                depth += 1
            elif t.kind == "op" and t.text == ")":
                depth -= 1
                if depth == 0:
                    break
            i += 1
        nxt = self.toks[i + 1]
        if not (nxt.kind == "op" and nxt.text == "->"):
            return None
        self.advance()
        params = []
        while not self.at(")"):
            pmods = self.local_modifiers()
            if self.tok.kind == "ident" and self.peek_is(1, ",", ")"):
                params.append(" ".join(pmods + (self.advance().text,)))
            else:
                ptype = self.type_(allow_varargs=True)
                params.append(" ".join(pmods + (ptype, self.ident())))
            if not self.accept(","):
                break
        self.expect(")")
        self.expect("->")
        return n.Lambda(tuple(params), True, self.lambda_body())

    def lambda_body(self):
        saved = self.no_lambda
        self.no_lambda = False
        try:
            if self.at("{"):
                return self.block()
            return self.expression()
        finally:
            self.no_lambda = saved

    def conditional(self) -> n.Expr:
        cond = self.binary(1)
        if self.accept("?"):
            then = self.expression()
            self.expect(":")
            lam = self.try_lambda()
            otherwise = lam if lam is not None else self.conditional()
            return n.Conditional(cond, then, otherwise)
        return cond

    def binop(self) -> tuple[str, int] | None:
        t = self.tok
        if t.kind == "keyword" and t.text == "instanceof":
            return "instanceof", 1
        if t.kind != "op":
            return None
        if t.text == ">":
            a = self.peek(1)
            if a.kind == "op" and a.text == ">" and a.start == t.end:
                b = self.peek(2)
                if b.kind == "op" and b.text == ">" and b.start == a.end:
                    return ">>>", 3
                return ">>", 2
            return ">", 1
        if t.text in _BINARY_PREC:
            return t.text, 1
        return None

    def binary(self, min_prec: int) -> n.Expr:
        left = self.unary()
        while True:
            found = self.binop()
            if found is None:
                return left
            op, width = found
            prec = _BINARY_PREC[op]
            if prec < min_prec:
                return left
            self.pos += width
            if op == "instanceof":
                final = self.accept("final")
                itype = self.type_()
                binding = None
                if self.tok.kind == "ident":
                    binding = self.advance().text
                elif final:
                    raise self.error("expected pattern variable")
                left = n.InstanceOf(left, itype, binding)
            else:
                left = n.Binary(op, left, self.binary(prec + 1))

    def unary(self) -> n.Expr:
        t = self.tok
        if t.kind == "op" and t.text in _PREFIX_OPS:
            self.advance()
            return n.Unary(t.text, self.unary())
        if self.at("("):
            cast = self.try_cast()
            if cast is not None:
                return cast
        return self.postfix(self.primary())

    def try_cast(self) -> n.Cast | None:
        mark = self.pos
        try:
            self.advance()
            ctype = self.type_()
            while self.accept("&"):
                ctype += " & " + self.type_()
            self.expect(")")
        except ParseError:
            self.pos = mark
            return None
        base = ctype.rstrip("[]")
        nxt = self.tok
        if base in PRIMITIVES:
            if nxt.kind == "op" and nxt.text in (")", ";", ",", ".", "}", "]"):
                self.pos = mark
                return None
            return n.Cast(ctype, self.unary())
        ok = (
            nxt.kind in ("ident", "number", "string", "char")
            or (nxt.kind == "keyword" and (nxt.text in _CAST_FOLLOW_KW or nxt.text in PRIMITIVES))
            or (nxt.kind == "op" and nxt.text in ("(", "!", "~"))
        )
        if not ok:
            self.pos = mark
            return None
        lam = self.try_lambda()
        if lam is not None:
            return n.Cast(ctype, lam)
        return n.Cast(ctype, self.unary())

    def arguments(self) -> tuple[n.Expr, ...]:
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.expression())
            while self.accept(","):
                args.append(self.expression())
        self.expect(")")
        return tuple(args)

    def primary(self) -> n.Expr:
        t = self.tok
        if t.kind in ("number", "string", "char") or (t.kind == "keyword" and t.text in _LITERAL_KW):
            self.advance()
            return n.Literal(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.expression()
            self.expect(")")
            return n.Paren(e)
        if t.kind == "keyword":
            if t.text in ("this", "super"):
                self.advance()
                if self.at("("):
                    return n.Call(t.text, None, self.arguments())
                return n.Name(t.text)
            if t.text == "new":
                return self.creator()
            if t.text in PRIMITIVES:
                ptype = self.type_()
                if self.accept("::"):
                    return n.MethodRef(ptype, self.expect("new").text)
                self.expect(".")
                self.expect("class")
                return n.ClassLit(ptype)
            if t.text == "switch":
                toks = [self.advance().text]
                toks.extend(self.collect_balanced())
                toks.extend(self.collect_balanced())
                return n.Opaque(tuple(toks))
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                return n.Call(t.text, None, self.arguments())
            return n.Name(t.text)
        raise self.error("expected expression")

    def creator(self) -> n.Expr:
        self.expect("new")
        if self.at("<"):
            self.type_args()
        self.skip_annotations()
        if self.tok.kind == "keyword" and self.tok.text in PRIMITIVES:
            ctype = self.advance().text
        else:
            ctype = self.class_type()
        if self.at("["):
            dims: list[n.Expr | None] = []
            while self.at("["):
                self.advance()
                if self.accept("]"):
                    dims.append(None)
                else:
                    dims.append(self.expression())
                    self.expect("]")
            init = self.array_init() if self.at("{") else None
            return n.NewArray(ctype, tuple(dims), init)
        args = self.arguments()
        body = tuple(self.collect_balanced()) if self.at("{") else None
        return n.New(ctype, args, body)

    def postfix(self, e: n.Expr) -> n.Expr:
        from .render import expr_text

        while True:
            t = self.tok
            if t.kind != "op":
                return e
            if t.text == ".":
                self.advance()
                if self.at("<"):
                    targs = self.type_args()
                    name = self.ident()
                    e = n.Call(name, e, self.arguments(), targs)
                elif self.at("new"):
                    e = self.creator()
                elif self.at("class"):
                    self.advance()
                    e = n.ClassLit(expr_text(e))
                elif self.at("this", "super"):
                    word = self.advance().text
                    if word == "super" and self.at("("):
                        e = n.Call("super", e, self.arguments())
                    else:
                        e = n.FieldAccess(e, word)
                else:
                    name = self.ident()
                    if self.at("("):
                        e = n.Call(name, e, self.arguments())
                    else:
                        e = n.FieldAccess(e, name)
            elif t.text == "[":
                if self.peek_is(1, "]"):
                    text = expr_text(e)
                    while self.at("[") and self.peek_is(1, "]"):
                        self.advance()
                        self.advance()
                        text += "[]"
                    if self.accept("::"):
                        name = "new" if self.accept("new") else self.ident()
                        return n.MethodRef(text, name)
                    self.expect(".")
                    self.expect("class")
                    e = n.ClassLit(text)
                else:
                    self.advance()
                    idx = self.expression()
                    self.expect("]")
                    e = n.ArrayAccess(e, idx)
            elif t.text in ("++", "--"):
                self.advance()
                e = n.Unary(t.text, e, postfix=True)
            elif t.text == "::":
                self.advance()
                name = "new" if self.accept("new") else self.ident()
                e = n.MethodRef(expr_text(e), name)
            else:
                return e

