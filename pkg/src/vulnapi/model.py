"""Domain vocabulary: versions, ranges, coordinates and method identity.

All types here are immutable values.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass, field

from .errors import DomainError

_VERSION_RE = re.compile(r"^(\d+(?:\.\d+)*)(?:[.\-]([A-Za-z0-9][A-Za-z0-9.\-_]*))?$")
_CVE_RE = re.compile(r"^CVE-\d{4}-\d{4,}$")
_IDENT_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$\-]*$")
_DOTTED_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$\-]*(\.[A-Za-z_$][A-Za-z0-9_$\-]*)*$")


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class Version:
    """A release version: numeric segments plus an optional qualifier.

    Ordering compares segments left to right with missing segments read as 0.
    On a tie, a qualified version sorts before the bare one, and qualifiers
    compare case-insensitively.
    """

    segments: tuple[int, ...]
    qualifier: str | None = None
    text: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.segments:
            raise DomainError("version needs at least one numeric segment")
        if not self.text:
            text = ".".join(map(str, self.segments))
            if self.qualifier:
                text += "." + self.qualifier
            object.__setattr__(self, "text", text)

    @classmethod
    def parse(cls, text: str) -> "Version":
        m = _VERSION_RE.match(text.strip())
        if not m:
            raise DomainError(f"not a version: {text!r}")
        segs = tuple(int(s) for s in m.group(1).split("."))
        return cls(segs, m.group(2) or None, text.strip())

    def sort_key(self) -> tuple:
        segs = list(self.segments)
        while len(segs) > 1 and segs[-1] == 0:
            segs.pop()
        if segs == [0]:
            segs = []
        if self.qualifier is None:
            return (tuple(segs), 1, "")
        return (tuple(segs), 0, self.qualifier.lower())

    def __eq__(self, other):
        if not isinstance(other, Version):
            return NotImplemented
        return self.sort_key() == other.sort_key()

    def __lt__(self, other):
        if not isinstance(other, Version):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash(self.sort_key())

    def __str__(self):
        return self.text


def compare_versions(a: Version, b: Version) -> int:
    """Return -1, 0 or 1."""
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


_COMPARATORS = {
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    "=": lambda c: c == 0,
    ">=": lambda c: c >= 0,
    ">": lambda c: c > 0,
}
_UNICODE_OPS = {"≤": "<=", "≥": ">=", "==": "="}
_PRED_RE = re.compile(r"^\s*(<=|>=|==|=|<|>|≤|≥)?\s*(\S+)\s*$")


@dataclass(frozen=True)
class VersionRange:
    """Disjunction of conjunctions of (comparator, version) predicates.

    Text form: ``>=3.0.0 && <=3.0.5 || <2.5.6.SEC03``.
    """

    disjuncts: tuple[tuple[tuple[str, Version], ...], ...]

    def __post_init__(self):
        for conj in self.disjuncts:
            if not conj:
                raise DomainError("empty conjunction in version range")
            for op, v in conj:
                if op not in _COMPARATORS or not isinstance(v, Version):
                    raise DomainError(f"bad predicate {op!r} {v!r}")

    @classmethod
    def parse(cls, text: str) -> "VersionRange":
        if not text or not text.strip():
            raise DomainError("empty version range")
        disjuncts = []
        for part in re.split(r"\|\||\bor\b", text):
            preds = []
            for atom in re.split(r"&&|\band\b", part):
                m = _PRED_RE.match(atom)
                if not m:
                    raise DomainError(f"bad range predicate {atom!r} in {text!r}")
                op = m.group(1) or "="
                op = _UNICODE_OPS.get(op, op)
                preds.append((op, Version.parse(m.group(2))))
            disjuncts.append(tuple(preds))
        return cls(tuple(disjuncts))

    def __str__(self):
        return " || ".join(
            " && ".join(f"{op}{v}" for op, v in conj) for conj in self.disjuncts
        )


def matches(rng: VersionRange, v: Version) -> bool:
    return any(
        all(_COMPARATORS[op](compare_versions(v, bound)) for op, bound in conj)
        for conj in rng.disjuncts
    )


@dataclass(frozen=True, order=True)
class CveId:
    id: str

    def __post_init__(self):
        if not _CVE_RE.match(self.id):
            raise DomainError(f"not a CVE id: {self.id!r}")

    def __str__(self):
        return self.id


@dataclass(frozen=True, order=True)
class LibraryCoordinate:
    group: str
    artifact: str
    version: Version

    def __post_init__(self):
        if not self.group or not _DOTTED_RE.match(self.group):
            raise DomainError(f"bad group id {self.group!r}")
        if not self.artifact or not _IDENT_RE.match(self.artifact):
            raise DomainError(f"bad artifact id {self.artifact!r}")

    @classmethod
    def parse(cls, gav: str) -> "LibraryCoordinate":
        parts = gav.split(":")
        if len(parts) != 3:
            raise DomainError(f"coordinate must be group:artifact:version, got {gav!r}")
        return cls(parts[0], parts[1], Version.parse(parts[2]))

    @property
    def ga(self) -> tuple[str, str]:
        return (self.group, self.artifact)

    def __str__(self):
        return f"{self.group}:{self.artifact}:{self.version}"


@dataclass(frozen=True, order=True)
class MethodId:
    """Identity of a method within one source tree.

    Constructors are named ``<init>``. ``params`` holds the erased,
    whitespace-normalized declared parameter types.
    """

    class_fqn: str
    name: str
    params: tuple[str, ...] = ()

    def __post_init__(self):
        if any(not p for p in self.params):
            raise DomainError("empty parameter type in method id")

    @property
    def simple_class(self) -> str:
        return self.class_fqn.rsplit(".", 1)[-1]

    def __str__(self):
        return f"{self.class_fqn}.{self.name}({','.join(self.params)})"

    _PARSE_RE = re.compile(r"^(?P<cls>.+)\.(?P<name><init>|[^.(]+)\((?P<params>[^)]*)\)$")

    @classmethod
    def parse(cls, text: str) -> "MethodId":
        m = cls._PARSE_RE.match(text)
        if not m:
            raise DomainError(f"not a method id: {text!r}")
        params = tuple(p for p in m.group("params").split(",") if p)
        return cls(m.group("cls"), m.group("name"), params)


class StatementChangeKind(str, enum.Enum):
    INSERT = "Insert"
    DELETE = "Delete"
    UPDATE = "Update"


class MethodChangeKind(str, enum.Enum):
    INSERTED = "Inserted"
    DELETED = "Deleted"
    MODIFIED = "Modified"
