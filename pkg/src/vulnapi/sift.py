"""Renaming-set construction and sifting of patch-unrelated methods.

A Modified method is sifted out when every changed statement matches one of
the patch-unrelated patterns: debugging output, a statement that becomes
identical after applying the commit's renaming set, a pure rename of the
assigned variable, or an accessor statement inside an accessor-only method.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .java import nodes as n
from .java.render import expr_text, stmt_key
from .model import MethodChangeKind, MethodId, StatementChangeKind
from .frontend import iter_classes, method_id
from .treediff import MethodDiff, StatementChange


class Pattern(str, enum.Enum):
    DEBUGGING = "Debugging"
    RENAME_EQUIVALENT = "RenameEquivalent"
    ASSIGN_LHS_RENAME = "AssignLhsRename"
    GETTER_SETTER = "GetterSetter"


@dataclass(frozen=True)
class DebugPatterns:
    """Name lists behind the debugging-statement heuristic."""

    logger_receivers: frozenset[str] = frozenset({"log", "logger", "LOG", "LOGGER"})
    logger_callees: frozenset[str] = frozenset({"trace", "debug", "info", "warn", "error"})
    print_streams: frozenset[str] = frozenset({"out", "err"})
    print_callees: frozenset[str] = frozenset({"println", "print", "printf", "format"})


DEFAULT_DEBUG = DebugPatterns()


@dataclass(frozen=True)
class RenamingSet:
    renamed_functions: frozenset[tuple[MethodId, MethodId]] = frozenset()
    renamed_fields: frozenset[tuple[str, str, str]] = frozenset()
    renamed_params: frozenset[tuple[MethodId, str, str]] = frozenset()

    def __bool__(self):
        return bool(self.renamed_functions or self.renamed_fields or self.renamed_params)

    def to_json(self) -> dict:
        return {
            "functions": sorted([str(a), str(b)] for a, b in self.renamed_functions),
            "fields": sorted(list(t) for t in self.renamed_fields),
            "params": sorted([str(m), a, b] for m, a, b in self.renamed_params),
        }


@dataclass(frozen=True)
class StatementContext:
    """What classify_statement may know about the enclosing method."""

    method: MethodId | None = None
    fields: frozenset[str] | None = None
    accessor_method: bool | None = None


@dataclass(frozen=True)
class UnrelatedVerdict:
    path: tuple[int, ...]
    pattern: Pattern | None
    related: bool

    def __post_init__(self):
        if self.related != (self.pattern is None):
            raise ValueError("related must be False exactly when a pattern is assigned")

    def to_json(self) -> dict:
        return {"path": list(self.path), "pattern": self.pattern.value if self.pattern else None, "related": self.related}


@dataclass
class SiftResult:
    patch_methods: list[MethodDiff] = field(default_factory=list)
    sifted_methods: list[tuple[MethodDiff, list[UnrelatedVerdict]]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "patch_methods": [d.to_json() for d in self.patch_methods],
            "sifted_methods": [
                {**d.to_json(), "verdicts": [v.to_json() for v in verdicts]} for d, verdicts in self.sifted_methods
            ],
        }


# --- renaming set ------------------------------------------------------------


def _init_key(e: n.Expr | None) -> str | None:
    return None if e is None else expr_text(e)


def build_renaming_set(diffs: list[MethodDiff], before: n.CompilationUnit | None, after: n.CompilationUnit | None) -> RenamingSet:
    functions = set()
    inserted = [d for d in diffs if d.method_change is MethodChangeKind.INSERTED and d.after and d.after.body is not None]
    used = set()
    for d in diffs:
        if d.method_change is not MethodChangeKind.DELETED or d.before is None or d.before.body is None:
            continue
        for i, cand in enumerate(inserted):
            if i in used or cand.id.name == d.id.name:
                continue
            if cand.after.body_hash == d.before.body_hash:
                functions.add((d.id, cand.id))
                used.add(i)
                break

    fields_ = set()
    params = set()
    if before is not None and after is not None:
        after_classes = {fqn: c for fqn, c, _ in iter_classes(after)}
        for fqn, bcls, _ in iter_classes(before):
            acls = after_classes.get(fqn)
            if acls is None:
                continue
            bnames = {f.name for f in bcls.fields}
            anames = {f.name for f in acls.fields}
            gone = [f for f in bcls.fields if f.name not in anames]
            new = [f for f in acls.fields if f.name not in bnames]
            taken = set()
            for old in gone:
                for i, cand in enumerate(new):
                    if i in taken:
                        continue
                    if cand.declared_type == old.declared_type and _init_key(cand.initializer) == _init_key(old.initializer):
                        fields_.add((fqn, old.name, cand.name))
                        taken.add(i)
                        break
            amethods = {method_id(fqn, m): m for m in acls.methods}
            for m in bcls.methods:
                mid = method_id(fqn, m)
                am = amethods.get(mid)
                if am is None:
                    continue
                for bp, ap in zip(m.params, am.params):
                    if bp.name != ap.name and bp.type == ap.type:
                        params.add((mid, bp.name, ap.name))
    return RenamingSet(frozenset(functions), frozenset(fields_), frozenset(params))


# --- statement patterns --------------------------------------------------------


def _last_name(e: n.Expr | None) -> str | None:
    if isinstance(e, n.Name):
        return e.name
    if isinstance(e, n.FieldAccess):
        return e.name
    return None


def _is_debug_call(e: n.Expr, cfg: DebugPatterns) -> bool:
    if not isinstance(e, n.Call):
        return False
    recv = e.receiver
    if (
        isinstance(recv, n.FieldAccess)
        and isinstance(recv.target, n.Name)
        and recv.target.name == "System"
        and recv.name in cfg.print_streams
        and e.name in cfg.print_callees
    ):
        return True
    if _last_name(recv) in cfg.logger_receivers:
        return True
    return e.name in cfg.logger_callees


def is_debug_statement(s: n.Stmt, cfg: DebugPatterns = DEFAULT_DEBUG) -> bool:
    if isinstance(s, n.ExprStmt):
        return _is_debug_call(s.expr, cfg)
    if isinstance(s, n.If) and s.otherwise is None:
        # if (log.isDebugEnabled()) { log.debug(..); }
        cond = s.cond
        guard = isinstance(cond, n.Call) and _last_name(cond.receiver) in cfg.logger_receivers
        return guard and bool(s.then.stmts) and all(is_debug_statement(x, cfg) for x in s.then.stmts)
    return False


def _is_message_like(e: n.Expr) -> bool:
    return any(isinstance(x, n.Literal) and x.text.startswith('"') for x in n.walk(e))


def _message_only_throw(before: n.Stmt, after: n.Stmt) -> bool:
    if not (isinstance(before, n.Throw) and isinstance(after, n.Throw)):
        return False
    b, a = before.expr, after.expr
    if not (isinstance(b, n.New) and isinstance(a, n.New)):
        return False
    if b.type != a.type or len(b.args) != len(a.args) or b.body != a.body:
        return False
    differing = [(x, y) for x, y in zip(b.args, a.args) if expr_text(x) != expr_text(y)]
    return bool(differing) and all(_is_message_like(x) and _is_message_like(y) for x, y in differing)


def _rename_substitution(rset: RenamingSet, method: MethodId | None):
    calls = {old.name: new.name for old, new in rset.renamed_functions}
    members = {old: new for _cls, old, new in rset.renamed_fields}
    names = dict(members)
    for mid, old, new in rset.renamed_params:
        if method is None or mid == method:
            names[old] = new

    def fn(node):
        if isinstance(node, n.Call) and node.name in calls:
            return n.Call(calls[node.name], node.receiver, node.args, node.type_args)
        if isinstance(node, n.Name) and node.name in names:
            return n.Name(names[node.name])
        if isinstance(node, n.FieldAccess) and node.name in members:
            return n.FieldAccess(node.target, members[node.name])
        return node

    return fn


def _rename_equivalent(before: n.Stmt, after: n.Stmt, rset: RenamingSet, method: MethodId | None) -> bool:
    if not rset:
        return False
    renamed = n.transform(before, _rename_substitution(rset, method))
    return stmt_key(renamed) == stmt_key(after)


def _lhs_rename(before: n.Stmt, after: n.Stmt) -> bool:
    if isinstance(before, n.LocalVar) and isinstance(after, n.LocalVar):
        if before.type != after.type or before.modifiers != after.modifiers:
            return False
        if len(before.declarators) != 1 or len(after.declarators) != 1:
            return False
        bd, ad = before.declarators[0], after.declarators[0]
        return bd.name != ad.name and bd.dims == ad.dims and _init_key(bd.init) == _init_key(ad.init)
    if isinstance(before, n.ExprStmt) and isinstance(after, n.ExprStmt):
        b, a = before.expr, after.expr
        if isinstance(b, n.Assign) and isinstance(a, n.Assign) and b.op == a.op:
            return (
                isinstance(b.target, n.Name)
                and isinstance(a.target, n.Name)
                and b.target.name != a.target.name
                and expr_text(b.value) == expr_text(a.value)
            )
    return False


def _is_this_field(e: n.Expr, fields_: frozenset[str] | None) -> bool:
    return (
        isinstance(e, n.FieldAccess)
        and isinstance(e.target, n.Name)
        and e.target.name == "this"
        and (fields_ is None or e.name in fields_)
    )


def is_accessor_statement(s: n.Stmt, fields_: frozenset[str] | None = None) -> bool:
    """``this.X = x``, ``return X``, ``return this`` or ``return this.X``."""
    if isinstance(s, n.ExprStmt):
        e = s.expr
        return isinstance(e, n.Assign) and e.op == "=" and _is_this_field(e.target, fields_) and isinstance(e.value, n.Name)
    if isinstance(s, n.Return) and s.expr is not None:
        e = s.expr
        if isinstance(e, n.Name):
            return e.name == "this" or fields_ is None or e.name in fields_
        return _is_this_field(e, fields_)
    return False


def is_accessor_body(body: n.Block | None, fields_: frozenset[str] | None = None) -> bool:
    return body is not None and bool(body.stmts) and all(is_accessor_statement(s, fields_) for s in body.stmts)


def classify_statement(
    change: StatementChange,
    rset: RenamingSet,
    context: StatementContext | None = None,
    debug: DebugPatterns = DEFAULT_DEBUG,
) -> UnrelatedVerdict:
    ctx = context or StatementContext()
    sides = [s for s in (change.before, change.after) if s is not None]

    def verdict(pattern):
        return UnrelatedVerdict(change.path, pattern, pattern is None)

    if any(isinstance(x, n.UnknownStmt) for s in sides for x in n.walk(s)):
        return verdict(None)
    if all(is_debug_statement(s, debug) for s in sides):
        return verdict(Pattern.DEBUGGING)
    if change.kind is StatementChangeKind.UPDATE:
        if _message_only_throw(change.before, change.after):
            return verdict(Pattern.DEBUGGING)
        if _rename_equivalent(change.before, change.after, rset, ctx.method):
            return verdict(Pattern.RENAME_EQUIVALENT)
        if _lhs_rename(change.before, change.after):
            return verdict(Pattern.ASSIGN_LHS_RENAME)
    if ctx.accessor_method is not False and all(is_accessor_statement(s, ctx.fields) for s in sides):
        return verdict(Pattern.GETTER_SETTER)
    return verdict(None)


def sift_methods(initial: list[MethodDiff], rset: RenamingSet, debug: DebugPatterns = DEFAULT_DEBUG) -> SiftResult:
    result = SiftResult()
    renamed_away = {old for old, _new in rset.renamed_functions}
    for d in initial:
        if d.method_change is MethodChangeKind.INSERTED:
            result.patch_methods.append(d)
        elif d.method_change is MethodChangeKind.DELETED:
            if d.id in renamed_away:
                result.sifted_methods.append((d, [UnrelatedVerdict((), Pattern.RENAME_EQUIVALENT, False)]))
            else:
                result.patch_methods.append(d)
        else:
            fields_ = (d.before.owner_fields if d.before else frozenset()) | (d.after.owner_fields if d.after else frozenset())
            accessor = all(is_accessor_body(r.body, fields_) for r in (d.before, d.after) if r is not None)
            ctx = StatementContext(d.id, fields_, accessor)
            verdicts = [classify_statement(c, rset, ctx, debug) for c in d.statement_changes]
            if verdicts and all(not v.related for v in verdicts):
                result.sifted_methods.append((d, verdicts))
            else:
                result.patch_methods.append(d)
    return result
