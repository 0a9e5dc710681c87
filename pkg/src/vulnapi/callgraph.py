"""Call graphs by class-hierarchy analysis, root augmentation and backward reachability.

Resolution is name + arity based. A call through a typed receiver reaches the
method found on the declared type (or its nearest ancestor) plus every override
in a subtype present in the tree. Calls that cannot be tied to a method in the
tree are dropped and counted.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable

from .frontend import SourceTree, class_fqn, iter_classes, method_id
from .java import nodes as n
from .java.render import block_key
from .localize import LocalizationResult
from .model import CveId, MethodId

logger = logging.getLogger(__name__)

Edge = tuple[MethodId, MethodId]


class CallGraph:
    """Directed method-call graph with a reverse index; iteration is sorted."""

    def __init__(
        self,
        nodes: Iterable[MethodId],
        edges: Iterable[Edge] = (),
        site_counts: dict[Edge, int] | None = None,
        unresolved: dict[MethodId, frozenset[tuple[str, int]]] | None = None,
        unresolved_count: int = 0,
    ):
        self.nodes = frozenset(nodes)
        self.edges = frozenset(edges)
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge endpoint outside graph: {a} -> {b}")
        self.site_counts = dict(site_counts or {e: 1 for e in self.edges})
        self.unresolved = dict(unresolved or {})
        self.unresolved_count = unresolved_count
        fwd, rev = {}, {}
        for a, b in self.edges:
            fwd.setdefault(a, []).append(b)
            rev.setdefault(b, []).append(a)
        self._fwd = {k: tuple(sorted(v)) for k, v in fwd.items()}
        self._rev = {k: tuple(sorted(v)) for k, v in rev.items()}

    def callers(self, m: MethodId) -> tuple[MethodId, ...]:
        return self._rev.get(m, ())

    def callees(self, m: MethodId) -> tuple[MethodId, ...]:
        return self._fwd.get(m, ())

    def has_edge(self, a: MethodId, b: MethodId) -> bool:
        return (a, b) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_jsonl(self) -> str:
        return "".join(f'{{"caller": "{a}", "callee": "{b}"}}\n' for a, b in self.sorted_edges())


# --- class table -------------------------------------------------------------


@dataclass
class _ClassInfo:
    fqn: str
    decl: n.ClassDecl
    unit: n.CompilationUnit
    outer: str | None
    top: str
    super_fqn: str | None = None
    iface_fqns: tuple[str, ...] = ()
    field_types: dict[str, str] = field(default_factory=dict)
    methods: list[tuple[MethodId, n.MethodDecl]] = field(default_factory=list)


def _strip_generics(text: str) -> str:
    out, depth = [], 0
    for ch in text:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif depth == 0:
            out.append(ch)
    return "".join(out).strip()


def _accepts(decl: n.MethodDecl, arity: int) -> bool:
    k = len(decl.params)
    if decl.params and decl.params[-1].varargs:
        return arity >= k - 1
    return arity == k


class ClassTable:
    """Classes of one or more compilation-unit collections, with type lookup."""

    def __init__(self, units: Iterable[n.CompilationUnit]):
        self.classes: dict[str, _ClassInfo] = {}
        for unit in units:
            for fqn, cls, outer in iter_classes(unit):
                if fqn in self.classes:
                    continue
                top = class_fqn(unit.package, outer.name) if outer is not None else fqn
                info = _ClassInfo(fqn, cls, unit, top if outer is not None else None, top)
                info.field_types = {f.name: f.declared_type for f in cls.fields}
                info.methods = [(method_id(fqn, m), m) for m in cls.methods]
                self.classes[fqn] = info
        for info in self.classes.values():
            if info.decl.super_name:
                info.super_fqn = self.resolve_type(info.decl.super_name, info.fqn)
            info.iface_fqns = tuple(
                t for t in (self.resolve_type(i, info.fqn) for i in info.decl.interfaces) if t
            )
        self._subs: dict[str, set[str]] = {}
        for info in self.classes.values():
            for sup in self.direct_supertypes(info.fqn):
                self._subs.setdefault(sup, set()).add(info.fqn)

    def direct_supertypes(self, fqn: str) -> list[str]:
        info = self.classes.get(fqn)
        if info is None:
            return []
        out = [info.super_fqn] if info.super_fqn else []
        return out + list(info.iface_fqns)

    def ancestors(self, fqn: str) -> list[str]:
        """fqn first, then superclass chain, then interfaces, breadth first."""
        seen, order, queue = {fqn}, [fqn], deque([fqn])
        while queue:
            for sup in self.direct_supertypes(queue.popleft()):
                if sup not in seen:
                    seen.add(sup)
                    order.append(sup)
                    queue.append(sup)
        return order

    def subtypes(self, fqn: str) -> list[str]:
        seen, stack = set(), [fqn]
        while stack:
            for sub in self._subs.get(stack.pop(), ()):
                if sub not in seen:
                    seen.add(sub)
                    stack.append(sub)
        return sorted(seen)

    def resolve_type(self, text: str, context: str) -> str | None:
        """Fully qualified name of a type written in class ``context``, if known."""
        text = _strip_generics(text)
        if not text or text.endswith("]") or text.endswith("..."):
            return None
        info = self.classes.get(context)
        if "." in text:
            if text in self.classes:
                return text
            head, rest = text.split(".", 1)
            base = self.resolve_type(head, context)
            if base is not None:
                cand = base + "$" + rest.replace(".", "$")
                if cand in self.classes:
                    return cand
            # a.b.Outer.Inner
            parts = text.split(".")
            for i in range(len(parts) - 1, 0, -1):
                cand = ".".join(parts[:i]) + "$" + "$".join(parts[i:])
                if cand in self.classes:
                    return cand
            return None
        if info is None:
            return None
        unit = info.unit
        # inner classes of the enclosing top-level class, then its top-level siblings
        for owner in (info.fqn, info.top):
            if f"{owner}${text}" in self.classes:
                return f"{owner}${text}"
        if info.top.rsplit(".", 1)[-1] == text:
            return info.top
        local = class_fqn(unit.package, text)
        if any(c.name == text for c in unit.classes):
            return local
        for imp in unit.imports:
            if imp.static or imp.wildcard:
                continue
            if imp.name.rsplit(".", 1)[-1] == text:
                return self._import_target(imp.name)
        if local in self.classes:
            return local
        for imp in unit.imports:
            if imp.wildcard and not imp.static:
                cand = f"{imp.name}.{text}"
                if cand in self.classes:
                    return cand
                cand = f"{imp.name}${text}"
                if cand in self.classes:
                    return cand
        return None

    def _import_target(self, name: str) -> str:
        if name in self.classes:
            return name
        parts = name.split(".")
        for i in range(len(parts) - 1, 0, -1):
            cand = ".".join(parts[:i]) + "$" + "$".join(parts[i:])
            if cand in self.classes:
                return cand
        return name

    def declared(self, fqn: str, name: str, arity: int | None) -> list[MethodId]:
        info = self.classes.get(fqn)
        if info is None:
            return []
        found = [(mid, decl) for mid, decl in info.methods if decl.name == name and (arity is None or _accepts(decl, arity))]
        if arity is not None:
            # fixed-arity overloads win over varargs ones, as in Java's first resolution phase
            fixed = [mid for mid, decl in found if not (decl.params and decl.params[-1].varargs)]
            if fixed:
                return fixed
        return [mid for mid, _ in found]

    def lookup(self, fqn: str, name: str, arity: int | None) -> list[MethodId]:
        """Methods matching on the nearest type in the ancestor order that declares any."""
        for anc in self.ancestors(fqn):
            found = self.declared(anc, name, arity)
            if found:
                return found
        return []

    def virtual_targets(self, fqn: str, name: str, arity: int | None) -> list[MethodId]:
        base = self.lookup(fqn, name, arity)
        out = set(base)
        sigs = {(m.name, m.params) for m in base}
        for sub in self.subtypes(fqn):
            info = self.classes[sub]
            for mid, decl in info.methods:
                if (mid.name, mid.params) in sigs or (not sigs and decl.name == name and (arity is None or _accepts(decl, arity))):
                    out.add(mid)
        return sorted(out)

    def field_type(self, fqn: str, name: str) -> tuple[str, str] | None:
        """(declared type, declaring class) of a field visible in ``fqn``."""
        for anc in self.ancestors(fqn):
            info = self.classes.get(anc)
            if info is not None and name in info.field_types:
                return info.field_types[name], anc
        info = self.classes.get(fqn)
        if info is not None and info.outer:
            return self.field_type(info.outer, name)
        return None

    def method_decl(self, mid: MethodId) -> n.MethodDecl | None:
        info = self.classes.get(mid.class_fqn)
        if info is None:
            return None
        for cand, decl in info.methods:
            if cand == mid:
                return decl
        return None


# --- per-method resolution ---------------------------------------------------


def _local_types(decl: n.MethodDecl) -> dict[str, str]:
    env = {p.name: p.type for p in decl.params}
    if decl.body is None:
        return env
    for node in n.walk(decl.body):
        if isinstance(node, n.LocalVar):
            for d in node.declarators:
                env[d.name] = node.type + "[]" * d.dims
        elif isinstance(node, n.ForEach):
            env[node.var_name] = node.var_type
        elif isinstance(node, n.Catch) and len(node.types) == 1:
            env[node.name] = node.types[0]
        elif isinstance(node, n.InstanceOf) and node.binding:
            env[node.binding] = node.type
        elif isinstance(node, n.Lambda):
            for p in node.params:
                bits = p.split()
                if len(bits) >= 2:
                    env[bits[-1]] = bits[-2]
    return env


class _Resolver:
    def __init__(self, table: ClassTable, ctx: str, decl: n.MethodDecl):
        self.table = table
        self.ctx = ctx
        self.locals = _local_types(decl)
        self.static_imports = [
            imp for imp in table.classes[ctx].unit.imports if imp.static
        ]

    def type_in(self, text: str, where: str) -> str | None:
        return self.table.resolve_type(text, where)

    def type_of(self, e) -> str | None:
        t = self.table
        if isinstance(e, n.Paren):
            return self.type_of(e.expr)
        if isinstance(e, n.Cast):
            return self.type_in(e.type, self.ctx)
        if isinstance(e, n.New):
            return self.type_in(e.type, self.ctx)
        if isinstance(e, n.Assign):
            return self.type_of(e.target)
        if isinstance(e, n.Conditional):
            return self.type_of(e.then) or self.type_of(e.otherwise)
        if isinstance(e, n.Name):
            if e.name == "this":
                return self.ctx
            if e.name == "super":
                info = t.classes.get(self.ctx)
                return info.super_fqn if info else None
            if e.name in self.locals:
                return self.type_in(self.locals[e.name], self.ctx)
            ft = t.field_type(self.ctx, e.name)
            if ft is not None:
                return self.type_in(ft[0], ft[1])
            return self.type_in(e.name, self.ctx)
        if isinstance(e, n.FieldAccess):
            if e.name == "this":
                return self.type_of(e.target) if not isinstance(e.target, n.Name) else self.type_in(e.target.name, self.ctx)
            base = self.type_of(e.target) if not self._is_package_prefix(e.target) else None
            if base is not None:
                ft = t.field_type(base, e.name)
                if ft is not None:
                    return self.type_in(ft[0], ft[1])
                inner = f"{base}${e.name}"
                if inner in t.classes:
                    return inner
                return None
            dotted = _dotted(e)
            return self.type_in(dotted, self.ctx) if dotted else None
        if isinstance(e, n.Call):
            targets = self.targets(e)
            if targets:
                decl = t.method_decl(targets[0])
                if decl is not None:
                    return self.type_in(decl.return_type, targets[0].class_fqn)
            return None
        return None

    def _is_package_prefix(self, e) -> bool:
        # lowercase dotted names that are not variables read as package prefixes
        if isinstance(e, n.Name):
            return e.name[:1].islower() and e.name not in self.locals and self.table.field_type(self.ctx, e.name) is None and e.name not in ("this", "super")
        if isinstance(e, n.FieldAccess):
            return self._is_package_prefix(e.target) and e.name[:1].islower()
        return False

    def targets(self, call: n.Call) -> list[MethodId]:
        t = self.table
        arity = len(call.args)
        info = t.classes[self.ctx]
        if call.receiver is None:
            if call.name == "this":
                return t.declared(self.ctx, "<init>", arity)
            if call.name == "super":
                return t.declared(info.super_fqn, "<init>", arity) if info.super_fqn else []
            found = t.virtual_targets(self.ctx, call.name, arity)
            if not found and info.outer:
                found = t.virtual_targets(info.outer, call.name, arity)
            if not found:
                for imp in self.static_imports:
                    owner, _, member = imp.name.rpartition(".")
                    if imp.wildcard:
                        owner = imp.name
                    elif member != call.name:
                        continue
                    cls = t._import_target(owner)
                    found = t.lookup(cls, call.name, arity)
                    if found:
                        break
            return found
        recv = call.receiver
        if isinstance(recv, n.Name) and recv.name == "super":
            return t.lookup(info.super_fqn, call.name, arity) if info.super_fqn else []
        rtype = self.type_of(recv)
        if rtype is None:
            return []
        return t.virtual_targets(rtype, call.name, arity)

    def new_targets(self, e: n.New) -> list[MethodId]:
        fqn = self.type_in(e.type, self.ctx)
        if fqn is None:
            return []
        return self.table.declared(fqn, "<init>", len(e.args))

    def ref_targets(self, e: n.MethodRef) -> list[MethodId]:
        target = e.target
        if target in ("this", "super"):
            fqn = self.type_of(n.Name(target))
        elif target in self.locals or self.table.field_type(self.ctx, target) is not None:
            fqn = self.type_of(n.Name(target))
        else:
            fqn = self.type_in(target, self.ctx)
        if fqn is None:
            return []
        if e.name == "new":
            return self.table.declared(fqn, "<init>", None)
        return self.table.virtual_targets(fqn, e.name, None)


def _dotted(e) -> str | None:
    if isinstance(e, n.Name):
        return e.name
    if isinstance(e, n.FieldAccess):
        head = _dotted(e.target)
        return f"{head}.{e.name}" if head else None
    return None


def _call_sites(decl: n.MethodDecl):
    if decl.body is None:
        return
    for node in n.walk(decl.body):
        if isinstance(node, (n.Call, n.New, n.MethodRef)):
            yield node


def build_call_graph(tree: SourceTree | Iterable[n.CompilationUnit]) -> CallGraph:
    """One node per extracted method; edges by class-hierarchy resolution."""
    units = tree.units if isinstance(tree, SourceTree) else list(tree)
    table = ClassTable(units)
    nodes = set()
    sites: Counter = Counter()
    unresolved: dict[MethodId, set[tuple[str, int]]] = {}
    dropped = 0
    for fqn in sorted(table.classes):
        info = table.classes[fqn]
        for caller, decl in info.methods:
            nodes.add(caller)
            res = _Resolver(table, fqn, decl)
            for node in _call_sites(decl):
                if isinstance(node, n.Call):
                    found = res.targets(node)
                    key = (node.name, len(node.args))
                elif isinstance(node, n.New):
                    found = res.new_targets(node)
                    key = ("<init>", len(node.args))
                else:
                    found = res.ref_targets(node)
                    key = (node.name, -1)
                if not found:
                    dropped += 1
                    unresolved.setdefault(caller, set()).add(key)
                for callee in found:
                    sites[(caller, callee)] += 1
    if dropped:
        logger.debug("call graph: %d unresolved call sites", dropped)
    return CallGraph(
        nodes,
        sites.keys(),
        dict(sites),
        {k: frozenset(v) for k, v in unresolved.items()},
        dropped,
    )


# --- augmentation and roots --------------------------------------------------


def augment_roots(m0: MethodId, p_cg: CallGraph, v_cg: CallGraph, per_layer: bool = False) -> frozenset[MethodId]:
    """Callers of an added method (possibly through other added code) that exist in the vulnerable version.

    Breadth-first over reverse edges of ``p_cg`` in sorted order. By default the
    search stops after the first dequeued method whose caller list yields a hit;
    ``per_layer`` stops after the first productive layer instead.
    """
    if m0 not in p_cg.nodes:
        raise ValueError(f"{m0} is not in the patch-version graph")
    if m0 in v_cg.nodes:
        raise ValueError(f"{m0} already exists in the vulnerable version")
    found: set[MethodId] = set()
    visited = {m0}
    layer = [m0]
    while layer:
        nxt = []
        for m in layer:
            for c in p_cg.callers(m):
                if c in v_cg.nodes:
                    found.add(c)
                elif c not in visited:
                    visited.add(c)
                    nxt.append(c)
            if found and not per_layer:
                return frozenset(found)
        if found:
            return frozenset(found)
        layer = nxt
    return frozenset()


COMMIT = "Commit"
AUGMENTED = "Augmented"


@dataclass(frozen=True, order=True)
class RootEntry:
    method: MethodId
    origin: str
    cve: CveId


@dataclass(frozen=True)
class RootMethodSet:
    entries: frozenset[RootEntry] = frozenset()

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.origin not in (COMMIT, AUGMENTED):
                raise ValueError(f"unknown root origin {e.origin!r}")
            if (e.method, e.cve) in seen:
                raise ValueError(f"root {e.method} recorded twice for {e.cve}")
            seen.add((e.method, e.cve))

    @property
    def methods(self) -> frozenset[MethodId]:
        return frozenset(e.method for e in self.entries)

    def origin_of(self, m: MethodId, cve: CveId) -> str | None:
        for e in self.entries:
            if e.method == m and e.cve == cve:
                return e.origin
        return None

    def by_origin(self, origin: str) -> frozenset[MethodId]:
        return frozenset(e.method for e in self.entries if e.origin == origin)

    def __len__(self):
        return len(self.entries)


def calls_any(v_cg: CallGraph, c: MethodId, targets: Iterable[MethodId]) -> bool:
    """Whether ``c`` calls one of ``targets`` in ``v_cg``, by edge or by an unresolved name/arity match."""
    pending = v_cg.unresolved.get(c, frozenset())
    for a in targets:
        if v_cg.has_edge(c, a):
            return True
        if any(name == a.name and (arity == -1 or arity == len(a.params)) for name, arity in pending):
            return True
    return False


def _without_calls_to(body: n.Block | None, names: set[str]) -> str:
    """Canonical body text after deleting simple statements that call any of ``names``."""
    if body is None:
        return ";"

    def drop(x):
        if isinstance(x, n.Block):
            return n.Block(tuple(
                s for s in x.stmts
                if isinstance(s, n.COMPOUND) or not any(isinstance(c, n.Call) and c.name in names for c in n.walk(s))
            ))
        return x

    return block_key(n.transform(body, drop))


@dataclass
class AugmentationReport:
    m0: MethodId
    candidates: frozenset[MethodId]
    accepted: frozenset[MethodId]
    rejected: dict[MethodId, str]

    def to_json(self) -> dict:
        return {
            "added_method": str(self.m0),
            "candidates": sorted(map(str, self.candidates)),
            "accepted": sorted(map(str, self.accepted)),
            "rejected": {str(k): v for k, v in sorted(self.rejected.items())},
        }


def collect_roots(
    localization: LocalizationResult,
    p_cg: CallGraph,
    v_cg: CallGraph,
    cve: CveId,
    *,
    strict: bool = False,
    p_tree: SourceTree | None = None,
    v_tree: SourceTree | None = None,
    per_layer: bool = False,
    reports: list | None = None,
) -> RootMethodSet:
    entries = {m: RootEntry(m, COMMIT, cve) for m in localization.roots_commit}
    added = sorted(localization.added_patch_methods)
    if strict and (p_tree is None or v_tree is None):
        raise ValueError("strict augmentation needs both source trees")
    for m0 in added:
        if m0 not in p_cg.nodes or m0 in v_cg.nodes:
            logger.info("added patch method %s not augmentable, skipped", m0)
            continue
        cands = augment_roots(m0, p_cg, v_cg, per_layer=per_layer)
        accepted, rejected = set(), {}
        for c in sorted(cands):
            if calls_any(v_cg, c, added):
                rejected[c] = "already-calls-added-method"
                continue
            if strict:
                names = {a.name for a in added}
                pb = p_tree.methods.get(c)
                vb = v_tree.methods.get(c)
                if pb is None or vb is None or _without_calls_to(pb.body, names) != _without_calls_to(vb.body, names):
                    rejected[c] = "other-changes"
                    continue
            accepted.add(c)
            entries.setdefault(c, RootEntry(c, AUGMENTED, cve))
        if reports is not None:
            reports.append(AugmentationReport(m0, cands, frozenset(accepted), rejected))
    return RootMethodSet(frozenset(entries.values()))


# --- backward reachability ---------------------------------------------------

ROOT = "Root"
REACHABLE = "Reachable"


@dataclass(frozen=True, order=True)
class VulnApi:
    method: MethodId
    body_hash: str
    roles: frozenset[str]
    cves: frozenset[CveId]
    roots: frozenset[MethodId]


@dataclass(frozen=True)
class VulnApiSet:
    apis: tuple[VulnApi, ...] = ()

    @property
    def methods(self) -> frozenset[MethodId]:
        return frozenset(a.method for a in self.apis)

    def get(self, m: MethodId) -> VulnApi | None:
        for a in self.apis:
            if a.method == m:
                return a
        return None


def transitive_callers(cg: CallGraph, root: MethodId) -> set[MethodId]:
    """Methods with a path of length >= 1 to ``root``."""
    seen: set[MethodId] = set()
    stack = list(cg.callers(root))
    while stack:
        m = stack.pop()
        if m in seen:
            continue
        seen.add(m)
        stack.extend(cg.callers(m))
    return seen


def backward_reachable(
    roots: RootMethodSet | Iterable[MethodId],
    cg: CallGraph,
    hashes: dict[MethodId, str] | None = None,
) -> VulnApiSet:
    if isinstance(roots, RootMethodSet):
        root_cves: dict[MethodId, set[CveId]] = {}
        for e in roots.entries:
            root_cves.setdefault(e.method, set()).add(e.cve)
    else:
        root_cves = {m: set() for m in roots}
    hashes = hashes or {}
    roles: dict[MethodId, set[str]] = {}
    sources: dict[MethodId, set[MethodId]] = {}
    cves: dict[MethodId, set[CveId]] = {}
    for r in sorted(root_cves):
        if r not in cg.nodes:
            logger.info("root %s absent from call graph, skipped", r)
            continue
        roles.setdefault(r, set()).add(ROOT)
        sources.setdefault(r, set()).add(r)
        cves.setdefault(r, set()).update(root_cves[r])
        for m in transitive_callers(cg, r):
            roles.setdefault(m, set()).add(REACHABLE)
            sources.setdefault(m, set()).add(r)
            cves.setdefault(m, set()).update(root_cves[r])
    apis = tuple(
        VulnApi(m, hashes.get(m, ""), frozenset(roles[m]), frozenset(cves[m]), frozenset(sources[m]))
        for m in sorted(roles)
    )
    return VulnApiSet(apis)
