"""Syntax tree for the supported Java subset.

Nodes are frozen dataclasses holding tuples, so trees are hashable values.
Types are kept as canonical text (``Map<String, List<T>>``, ``int[]``).
Compound statement bodies are always ``Block`` nodes; the parser wraps a
bare single statement body in a block.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, is_dataclass
from typing import Optional, Union

# --- expressions -----------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Name:
    name: str  # includes the keywords ``this`` and ``super``


@dataclass(frozen=True)
class FieldAccess:
    target: "Expr"
    name: str


@dataclass(frozen=True)
class ArrayAccess:
    target: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class Call:
    """Method invocation. ``this(...)``/``super(...)`` use those names with no receiver."""

    name: str
    receiver: Optional["Expr"]
    args: tuple["Expr", ...]
    type_args: str = ""


@dataclass(frozen=True)
class New:
    type: str
    args: tuple["Expr", ...]
    body: Optional[tuple[str, ...]] = None  # anonymous class body, opaque tokens


@dataclass(frozen=True)
class NewArray:
    type: str
    dims: tuple[Optional["Expr"], ...]
    init: Optional["ArrayInit"] = None


@dataclass(frozen=True)
class ArrayInit:
    elements: tuple["Expr", ...]


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    postfix: bool = False


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class InstanceOf:
    expr: "Expr"
    type: str
    binding: Optional[str] = None


@dataclass(frozen=True)
class Assign:
    op: str
    target: "Expr"
    value: "Expr"


@dataclass(frozen=True)
class Conditional:
    cond: "Expr"
    then: "Expr"
    otherwise: "Expr"


@dataclass(frozen=True)
class Cast:
    type: str
    expr: "Expr"


@dataclass(frozen=True)
class Paren:
    expr: "Expr"


@dataclass(frozen=True)
class Lambda:
    params: tuple[str, ...]  # rendered parameter text, e.g. ("x",) or ("String s",)
    parenthesized: bool
    body: Union["Expr", "Block"]


@dataclass(frozen=True)
class MethodRef:
    target: str  # rendered target expression or type
    name: str


@dataclass(frozen=True)
class ClassLit:
    type: str


@dataclass(frozen=True)
class Opaque:
    """Expression outside the subset (e.g. switch expressions), kept as tokens."""

    tokens: tuple[str, ...]


Expr = Union[
    Literal, Name, FieldAccess, ArrayAccess, Call, New, NewArray, ArrayInit, Unary,
    Binary, InstanceOf, Assign, Conditional, Cast, Paren, Lambda, MethodRef, ClassLit, Opaque,
]

# --- statements ------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    stmts: tuple["Stmt", ...] = ()


@dataclass(frozen=True)
class Declarator:
    name: str
    dims: int = 0
    init: Optional[Expr] = None


@dataclass(frozen=True)
class LocalVar:
    type: str
    declarators: tuple[Declarator, ...]
    modifiers: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Block
    otherwise: Optional[Block] = None


@dataclass(frozen=True)
class While:
    cond: Expr
    body: Block


@dataclass(frozen=True)
class DoWhile:
    body: Block
    cond: Expr


@dataclass(frozen=True)
class For:
    init: tuple["Stmt", ...]  # LocalVar or ExprStmt items
    cond: Optional[Expr]
    update: tuple[Expr, ...]
    body: Block


@dataclass(frozen=True)
class ForEach:
    var_type: str
    var_name: str
    iterable: Expr
    body: Block
    modifiers: tuple[str, ...] = ()


@dataclass(frozen=True)
class Return:
    expr: Optional[Expr] = None


@dataclass(frozen=True)
class Throw:
    expr: Expr


@dataclass(frozen=True)
class Catch:
    types: tuple[str, ...]
    name: str
    body: Block
    modifiers: tuple[str, ...] = ()


@dataclass(frozen=True)
class Try:
    resources: tuple["Stmt", ...]
    body: Block
    catches: tuple[Catch, ...] = ()
    final: Optional[Block] = None


@dataclass(frozen=True)
class SwitchCase:
    labels: tuple[Expr, ...]  # empty means ``default``
    arrow: bool
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class Switch:
    selector: Expr
    cases: tuple[SwitchCase, ...]


@dataclass(frozen=True)
class Break:
    label: Optional[str] = None


@dataclass(frozen=True)
class Continue:
    label: Optional[str] = None


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Assert:
    cond: Expr
    message: Optional[Expr] = None


@dataclass(frozen=True)
class Labeled:
    label: str
    stmt: "Stmt"


@dataclass(frozen=True)
class Synchronized:
    lock: Expr
    body: Block


@dataclass(frozen=True)
class UnknownStmt:
    """Statement outside the subset; diffed as one atomic unit."""

    tokens: tuple[str, ...]


Stmt = Union[
    Block, LocalVar, ExprStmt, If, While, DoWhile, For, ForEach, Return, Throw, Try,
    Switch, Break, Continue, Empty, Assert, Labeled, Synchronized, UnknownStmt,
]

COMPOUND = (Block, If, While, DoWhile, For, ForEach, Try, Switch, Labeled, Synchronized)

# --- declarations ----------------------------------------------------------


@dataclass(frozen=True)
class Param:
    type: str
    name: str
    varargs: bool = False
    modifiers: tuple[str, ...] = ()


@dataclass(frozen=True)
class FieldDecl:
    name: str
    declared_type: str
    initializer: Optional[Expr] = None
    modifiers: tuple[str, ...] = ()


@dataclass(frozen=True)
class MethodDecl:
    name: str  # ``<init>`` for constructors
    return_type: str
    params: tuple[Param, ...]
    body: Optional[Block]
    modifiers: tuple[str, ...] = ()
    type_params: str = ""
    throws: tuple[str, ...] = ()
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    kind: str = "class"  # class | interface | enum
    super_name: Optional[str] = None
    interfaces: tuple[str, ...] = ()
    fields: tuple[FieldDecl, ...] = ()
    methods: tuple[MethodDecl, ...] = ()
    inner: tuple["ClassDecl", ...] = ()
    modifiers: tuple[str, ...] = ()
    type_params: str = ""
    enum_constants: tuple[str, ...] = ()


@dataclass(frozen=True)
class Import:
    name: str
    static: bool = False
    wildcard: bool = False


@dataclass(frozen=True)
class CompilationUnit:
    package: str
    imports: tuple[Import, ...]
    classes: tuple[ClassDecl, ...]
    path: str = field(default="<string>", compare=False)


def children(node) -> list:
    """Direct child nodes (dataclass instances) of ``node``, in field order."""
    out = []
    for f in fields(node):
        value = getattr(node, f.name)
        if is_dataclass(value):
            out.append(value)
        elif isinstance(value, tuple):
            out.extend(v for v in value if is_dataclass(v))
    return out


def walk(node):
    """Pre-order traversal over a node and all nested dataclass nodes."""
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(children(cur)))


def to_json(node):
    """Plain-JSON view of a tree, with a ``kind`` tag per node."""
    if is_dataclass(node):
        out = {"kind": type(node).__name__}
        for f in fields(node):
            if f.name in ("span", "path"):
                continue
            out[f.name] = to_json(getattr(node, f.name))
        return out
    if isinstance(node, tuple):
        return [to_json(v) for v in node]
    return node


def transform(node, fn):
    """Rebuild ``node`` bottom-up, applying ``fn`` to every rebuilt dataclass node."""
    if is_dataclass(node):
        changes = {}
        for f in fields(node):
            value = getattr(node, f.name)
            new = transform(value, fn)
            if new is not value:
                changes[f.name] = new
        if changes:
            node = type(node)(**{f.name: changes.get(f.name, getattr(node, f.name)) for f in fields(node)})
        return fn(node)
    if isinstance(node, tuple):
        items = tuple(transform(v, fn) for v in node)
        return node if all(a is b for a, b in zip(items, node)) else items
    return node
