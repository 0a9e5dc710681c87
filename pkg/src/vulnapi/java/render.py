"""Canonical source rendering.

``stmt_key`` is the normalized single-line form of a statement used for
diffing and hashing: comments and layout are gone, tokens get canonical
spacing, identifiers and literals are kept verbatim. ``unparse`` renders a
whole compilation unit as indented source that parses back to an equal tree.
"""

from __future__ import annotations

import hashlib

from . import nodes as n

_INDENT = "    "


def expr_text(e: n.Expr) -> str:
    if isinstance(e, n.Literal):
        return e.text
    if isinstance(e, n.Name):
        return e.name
    if isinstance(e, n.FieldAccess):
        return f"{expr_text(e.target)}.{e.name}"
    if isinstance(e, n.ArrayAccess):
        return f"{expr_text(e.target)}[{expr_text(e.index)}]"
    if isinstance(e, n.Call):
        args = ", ".join(expr_text(a) for a in e.args)
        if e.receiver is None:
            return f"{e.name}({args})"
        return f"{expr_text(e.receiver)}.{e.type_args}{e.name}({args})"
    if isinstance(e, n.New):
        args = ", ".join(expr_text(a) for a in e.args)
        text = f"new {e.type}({args})"
        if e.body is not None:
            text += " " + " ".join(e.body)
        return text
    if isinstance(e, n.NewArray):
        dims = "".join("[]" if d is None else f"[{expr_text(d)}]" for d in e.dims)
        text = f"new {e.type}{dims}"
        if e.init is not None:
            text += " " + expr_text(e.init)
        return text
    if isinstance(e, n.ArrayInit):
        return "{" + ", ".join(expr_text(x) for x in e.elements) + "}"
    if isinstance(e, n.Unary):
        inner = expr_text(e.operand)
        if e.postfix:
            return inner + e.op
        if inner[:1] in "+-" and e.op[:1] in "+-":
            return f"{e.op} {inner}"
        return e.op + inner
    if isinstance(e, n.Binary):
        return f"{expr_text(e.left)} {e.op} {expr_text(e.right)}"
    if isinstance(e, n.InstanceOf):
        text = f"{expr_text(e.expr)} instanceof {e.type}"
        return f"{text} {e.binding}" if e.binding else text
    if isinstance(e, n.Assign):
        return f"{expr_text(e.target)} {e.op} {expr_text(e.value)}"
    if isinstance(e, n.Conditional):
        return f"{expr_text(e.cond)} ? {expr_text(e.then)} : {expr_text(e.otherwise)}"
    if isinstance(e, n.Cast):
        return f"({e.type}) {expr_text(e.expr)}"
    if isinstance(e, n.Paren):
        return f"({expr_text(e.expr)})"
    if isinstance(e, n.Lambda):
        params = ", ".join(e.params)
        head = f"({params})" if e.parenthesized else params
        if isinstance(e.body, n.Block):
            return f"{head} -> {block_key(e.body)}"
        return f"{head} -> {expr_text(e.body)}"
    if isinstance(e, n.MethodRef):
        return f"{e.target}::{e.name}"
    if isinstance(e, n.ClassLit):
        return f"{e.type}.class"
    if isinstance(e, n.Opaque):
        return " ".join(e.tokens)
    raise TypeError(f"not an expression node: {e!r}")


def _mods(mods: tuple[str, ...]) -> str:
    return "".join(m + " " for m in mods)


def _local_var(s: n.LocalVar) -> str:
    parts = []
    for d in s.declarators:
        text = d.name + "[]" * d.dims
        if d.init is not None:
            text += f" = {expr_text(d.init)}"
        parts.append(text)
    return f"{_mods(s.modifiers)}{s.type} {', '.join(parts)}"


def _inline(s: n.Stmt) -> str:
    """Rendering of statements used inside a for header or try resources."""
    if isinstance(s, n.LocalVar):
        return _local_var(s)
    if isinstance(s, n.ExprStmt):
        return expr_text(s.expr)
    raise TypeError(f"unexpected header statement {s!r}")


def stmt_lines(s: n.Stmt, depth: int = 0) -> list[str]:
    pad = _INDENT * depth
    if isinstance(s, n.Block):
        return [pad + "{", *_body_lines(s, depth + 1), pad + "}"]
    if isinstance(s, n.LocalVar):
        return [pad + _local_var(s) + ";"]
    if isinstance(s, n.ExprStmt):
        return [pad + expr_text(s.expr) + ";"]
    if isinstance(s, n.If):
        lines = [f"{pad}if ({expr_text(s.cond)}) {{", *_body_lines(s.then, depth + 1)]
        if s.otherwise is not None:
            lines += [pad + "} else {", *_body_lines(s.otherwise, depth + 1)]
        return lines + [pad + "}"]
    if isinstance(s, n.While):
        return [f"{pad}while ({expr_text(s.cond)}) {{", *_body_lines(s.body, depth + 1), pad + "}"]
    if isinstance(s, n.DoWhile):
        return [pad + "do {", *_body_lines(s.body, depth + 1), f"{pad}}} while ({expr_text(s.cond)});"]
    if isinstance(s, n.For):
        init = ", ".join(_inline(i) for i in s.init)
        cond = expr_text(s.cond) if s.cond is not None else ""
        update = ", ".join(expr_text(u) for u in s.update)
        head = f"for ({init}; {cond}; {update})"
        return [f"{pad}{head} {{", *_body_lines(s.body, depth + 1), pad + "}"]
    if isinstance(s, n.ForEach):
        head = f"for ({_mods(s.modifiers)}{s.var_type} {s.var_name} : {expr_text(s.iterable)})"
        return [f"{pad}{head} {{", *_body_lines(s.body, depth + 1), pad + "}"]
    if isinstance(s, n.Return):
        return [pad + ("return;" if s.expr is None else f"return {expr_text(s.expr)};")]
    if isinstance(s, n.Throw):
        return [f"{pad}throw {expr_text(s.expr)};"]
    if isinstance(s, n.Try):
        head = "try"
        if s.resources:
            head += " (" + "; ".join(_inline(r) for r in s.resources) + ")"
        lines = [f"{pad}{head} {{", *_body_lines(s.body, depth + 1)]
        for c in s.catches:
            lines.append(f"{pad}}} catch ({_mods(c.modifiers)}{' | '.join(c.types)} {c.name}) {{")
            lines += _body_lines(c.body, depth + 1)
        if s.final is not None:
            lines += [pad + "} finally {", *_body_lines(s.final, depth + 1)]
        return lines + [pad + "}"]
    if isinstance(s, n.Switch):
        lines = [f"{pad}switch ({expr_text(s.selector)}) {{"]
        for c in s.cases:
            label = "default" if not c.labels else "case " + ", ".join(expr_text(x) for x in c.labels)
            if c.arrow:
                body = c.body[0]
                inner = stmt_lines(body, depth + 1)
                lines.append(f"{pad}{_INDENT}{label} -> {inner[0].strip()}")
                lines += inner[1:]
            else:
                lines.append(f"{pad}{_INDENT}{label}:")
                for b in c.body:
                    lines += stmt_lines(b, depth + 2)
        return lines + [pad + "}"]
    if isinstance(s, n.Break):
        return [pad + (f"break {s.label};" if s.label else "break;")]
    if isinstance(s, n.Continue):
        return [pad + (f"continue {s.label};" if s.label else "continue;")]
    if isinstance(s, n.Empty):
        return [pad + ";"]
    if isinstance(s, n.Assert):
        msg = f" : {expr_text(s.message)}" if s.message is not None else ""
        return [f"{pad}assert {expr_text(s.cond)}{msg};"]
    if isinstance(s, n.Labeled):
        inner = stmt_lines(s.stmt, depth)
        return [f"{pad}{s.label}: {inner[0].strip()}", *inner[1:]]
    if isinstance(s, n.Synchronized):
        return [f"{pad}synchronized ({expr_text(s.lock)}) {{", *_body_lines(s.body, depth + 1), pad + "}"]
    if isinstance(s, n.UnknownStmt):
        return [pad + " ".join(s.tokens)]
    raise TypeError(f"not a statement node: {s!r}")


def _body_lines(b: n.Block, depth: int) -> list[str]:
    out: list[str] = []
    for s in b.stmts:
        out += stmt_lines(s, depth)
    return out


def stmt_key(s: n.Stmt) -> str:
    """Normalized single-line serialization of one statement."""
    return " ".join(line.strip() for line in stmt_lines(s))


def block_key(b: n.Block | None) -> str:
    if b is None:
        return ";"
    return stmt_key(b)


def header_key(s: n.Stmt) -> str:
    """Serialization of a compound statement with its nested blocks elided.

    Two compound statements with equal header keys are descended into by the
    differ instead of being reported as one whole-statement update.
    """
    if isinstance(s, n.If):
        return f"if ({expr_text(s.cond)}) else={s.otherwise is not None}"
    if isinstance(s, n.While):
        return f"while ({expr_text(s.cond)})"
    if isinstance(s, n.DoWhile):
        return f"do while ({expr_text(s.cond)})"
    if isinstance(s, n.For):
        init = ", ".join(_inline(i) for i in s.init)
        cond = expr_text(s.cond) if s.cond is not None else ""
        return f"for ({init}; {cond}; {', '.join(expr_text(u) for u in s.update)})"
    if isinstance(s, n.ForEach):
        return f"for ({s.var_type} {s.var_name} : {expr_text(s.iterable)})"
    if isinstance(s, n.Try):
        res = "; ".join(_inline(r) for r in s.resources)
        catches = " ".join(f"catch ({' | '.join(c.types)} {c.name})" for c in s.catches)
        return f"try ({res}) {catches} finally={s.final is not None}"
    if isinstance(s, n.Switch):
        labels = " ".join(
            ("default" if not c.labels else ",".join(expr_text(x) for x in c.labels)) + ("->" if c.arrow else ":")
            for c in s.cases
        )
        return f"switch ({expr_text(s.selector)}) {labels}"
    if isinstance(s, n.Labeled):
        return f"{s.label}:"
    if isinstance(s, n.Synchronized):
        return f"synchronized ({expr_text(s.lock)})"
    if isinstance(s, n.Block):
        return "{}"
    return stmt_key(s)


def child_lists(s: n.Stmt) -> list[tuple[n.Stmt, ...]]:
    """Nested statement lists of a compound statement, in a fixed slot order."""
    if isinstance(s, n.Block):
        return [s.stmts]
    if isinstance(s, n.If):
        return [s.then.stmts] + ([s.otherwise.stmts] if s.otherwise is not None else [])
    if isinstance(s, (n.While, n.DoWhile, n.For, n.ForEach, n.Synchronized)):
        return [s.body.stmts]
    if isinstance(s, n.Try):
        slots = [s.body.stmts] + [c.body.stmts for c in s.catches]
        if s.final is not None:
            slots.append(s.final.stmts)
        return slots
    if isinstance(s, n.Switch):
        return [c.body for c in s.cases]
    if isinstance(s, n.Labeled):
        return [(s.stmt,)]
    return []


def body_digest(body: n.Block | None) -> str:
    """SHA-256 hex digest of a normalized method body."""
    return hashlib.sha256(block_key(body).encode("utf-8")).hexdigest()


def _method_lines(m: n.MethodDecl, cname: str, depth: int) -> list[str]:
    pad = _INDENT * depth
    params = ", ".join(f"{_mods(p.modifiers)}{p.type} {p.name}" for p in m.params)
    tparams = m.type_params + " " if m.type_params else ""
    if m.name == "<init>":
        head = f"{_mods(m.modifiers)}{tparams}{cname}({params})"
    else:
        head = f"{_mods(m.modifiers)}{tparams}{m.return_type} {m.name}({params})"
    if m.throws:
        head += " throws " + ", ".join(m.throws)
    if m.body is None:
        return [pad + head + ";"]
    return [f"{pad}{head} {{", *_body_lines(m.body, depth + 1), pad + "}"]


def _class_lines(c: n.ClassDecl, depth: int) -> list[str]:
    pad = _INDENT * depth
    head = f"{_mods(c.modifiers)}{c.kind} {c.name}{c.type_params}"
    if c.super_name:
        head += f" extends {c.super_name}"
    if c.interfaces:
        kw = "extends" if c.kind == "interface" else "implements"
        head += f" {kw} " + ", ".join(c.interfaces)
    lines = [f"{pad}{head} {{"]
    inner_pad = _INDENT * (depth + 1)
    if c.kind == "enum":
        lines.append(inner_pad + ", ".join(c.enum_constants) + ";")
    for f in c.fields:
        init = f" = {expr_text(f.initializer)}" if f.initializer is not None else ""
        lines.append(f"{inner_pad}{_mods(f.modifiers)}{f.declared_type} {f.name}{init};")
    for m in c.methods:
        lines += _method_lines(m, c.name, depth + 1)
    for inner in c.inner:
        lines += _class_lines(inner, depth + 1)
    return lines + [pad + "}"]


def unparse(unit: n.CompilationUnit) -> str:
    lines = []
    if unit.package:
        lines.append(f"package {unit.package};")
    for imp in unit.imports:
        static = "static " if imp.static else ""
        star = ".*" if imp.wildcard else ""
        lines.append(f"import {static}{imp.name}{star};")
    for c in unit.classes:
        lines += _class_lines(c, 0)
    return "\n".join(lines) + "\n"
