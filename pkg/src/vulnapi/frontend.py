"""Method extraction and source-tree loading on top of the Java parser."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError
from .java import nodes as n
from .java.parser import erase_type, parse_source
from .java.render import body_digest
from .model import MethodId

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MethodRecord:
    id: MethodId
    return_type: str
    params: tuple[n.Param, ...]
    body: n.Block | None
    body_hash: str
    source_span: tuple[str, int, int]  # (path, first line, last line)
    owner_fields: frozenset[str] = frozenset()
    modifiers: tuple[str, ...] = ()

    @property
    def is_abstract(self) -> bool:
        return self.body is None


def class_fqn(package: str, *names: str) -> str:
    base = "$".join(names)
    return f"{package}.{base}" if package else base


def iter_classes(unit: n.CompilationUnit):
    """Yield (fqn, ClassDecl, outer ClassDecl or None) for every class in the unit."""
    for c in unit.classes:
        yield class_fqn(unit.package, c.name), c, None
        for inner in c.inner:
            yield class_fqn(unit.package, c.name, inner.name), inner, c


def method_id(fqn: str, m: n.MethodDecl) -> MethodId:
    return MethodId(fqn, m.name, tuple(erase_type(p.type) for p in m.params))


def normalize_and_hash(m: MethodRecord) -> str:
    return body_digest(m.body)


def extract_methods(unit: n.CompilationUnit) -> list[MethodRecord]:
    records = []
    for fqn, cls, _outer in iter_classes(unit):
        fnames = frozenset(f.name for f in cls.fields)
        for m in cls.methods:
            records.append(
                MethodRecord(
                    id=method_id(fqn, m),
                    return_type=m.return_type,
                    params=m.params,
                    body=m.body,
                    body_hash=body_digest(m.body),
                    source_span=(unit.path, m.span[0], m.span[1]),
                    owner_fields=fnames,
                    modifiers=m.modifiers,
                )
            )
    return records


@dataclass
class SourceTree:
    """All parseable compilation units under one directory."""

    root: str
    units: list[n.CompilationUnit] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    methods: dict[MethodId, MethodRecord] = field(default_factory=dict)

    def __post_init__(self):
        if not self.methods:
            for unit in self.units:
                for rec in extract_methods(unit):
                    self.methods.setdefault(rec.id, rec)

    def __contains__(self, mid: MethodId) -> bool:
        return mid in self.methods

    @property
    def method_ids(self) -> frozenset[MethodId]:
        return frozenset(self.methods)

    def units_by_class(self) -> dict[str, n.CompilationUnit]:
        out = {}
        for unit in self.units:
            for fqn, _cls, _outer in iter_classes(unit):
                out[fqn] = unit
        return out

    @classmethod
    def from_sources(cls, sources: dict[str, str], root: str = "<memory>") -> "SourceTree":
        """Build a tree from {relative path: source text}; unparseable files are skipped."""
        units, skipped = [], []
        for path in sorted(sources):
            try:
                units.append(parse_source(sources[path], path))
            except ParseError as exc:
                logger.warning("skipping unparseable file: %s", exc)
                skipped.append(path)
        return cls(root, units, skipped)

    @classmethod
    def load(cls, root: str | Path) -> "SourceTree":
        root = Path(root)
        sources = {}
        for path in sorted(root.rglob("*.java")):
            sources[path.relative_to(root).as_posix()] = path.read_text(encoding="utf-8")
        return cls.from_sources(sources, str(root))
