"""The library-version -> CVE -> vulnerable-API database, counting and interval estimates."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .callgraph import AUGMENTED, ROOT, RootMethodSet, VulnApiSet
from .errors import DomainError, DuplicateEntry, IngestError, SchemaError
from .model import CveId, LibraryCoordinate, MethodId

ROOT_COMMIT = "root-commit"
ROOT_AUGMENTED = "root-augmented"
REACHABLE = "reachable"
ROLES = (ROOT_COMMIT, ROOT_AUGMENTED, REACHABLE)


@dataclass(frozen=True)
class DbEntry:
    gav: LibraryCoordinate
    cve: CveId
    method_id: MethodId
    body_hash: str
    role: str
    roots: frozenset[MethodId] = frozenset()

    def __post_init__(self):
        if self.role not in ROLES:
            raise DomainError(f"unknown role {self.role!r}")

    @property
    def key(self) -> tuple:
        return (self.gav, self.cve, self.method_id)

    def sort_key(self) -> tuple:
        m = self.method_id
        return (str(self.gav), str(self.cve), m.class_fqn, m.name, m.params)

    def to_json(self) -> dict:
        m = self.method_id
        return {
            "gav": str(self.gav),
            "cve": str(self.cve),
            "class": m.class_fqn,
            "name": m.name,
            "desc": list(m.params),
            "hash": self.body_hash,
            "role": self.role,
            "roots": sorted(str(r) for r in self.roots),
        }

    @classmethod
    def from_json(cls, obj: dict, line: int | None = None) -> "DbEntry":
        try:
            desc = obj["desc"]
            if not isinstance(desc, list):
                raise SchemaError("expected a list", field="desc", line=line)
            return cls(
                LibraryCoordinate.parse(obj["gav"]),
                CveId(obj["cve"]),
                MethodId(obj["class"], obj["name"], tuple(desc)),
                obj["hash"],
                obj["role"],
                frozenset(MethodId.parse(r) for r in obj.get("roots", [])),
            )
        except KeyError as exc:
            raise SchemaError("missing", field=exc.args[0], line=line) from None
        except DomainError as exc:
            raise SchemaError(str(exc), line=line) from None


@dataclass
class VulnDatabase:
    entries: list[DbEntry] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.key in seen:
                raise DuplicateEntry(f"{e.gav} {e.cve} {e.method_id}")
            seen.add(e.key)
        self.entries.sort(key=DbEntry.sort_key)
        self.by_gav: dict[LibraryCoordinate, list[DbEntry]] = {}
        self.by_cve: dict[CveId, list[DbEntry]] = {}
        self.by_method: dict[MethodId, list[DbEntry]] = {}
        for e in self.entries:
            self.by_gav.setdefault(e.gav, []).append(e)
            self.by_cve.setdefault(e.cve, []).append(e)
            self.by_method.setdefault(e.method_id, []).append(e)

    def __len__(self):
        return len(self.entries)

    def lookup(self, gav: LibraryCoordinate, method: MethodId) -> list[DbEntry]:
        return [e for e in self.by_gav.get(gav, []) if e.method_id == method]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_json()) + "\n" for e in self.entries)

    @classmethod
    def from_jsonl(cls, text: str) -> "VulnDatabase":
        entries = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"malformed JSON ({exc.msg})", line=lineno) from None
            entries.append(DbEntry.from_json(obj, lineno))
        return cls(entries)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "VulnDatabase":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IngestError(f"cannot read database {path}: {exc}") from exc
        return cls.from_jsonl(text)


def build_database(results: Iterable[tuple[LibraryCoordinate, CveId, RootMethodSet, VulnApiSet]]) -> VulnDatabase:
    entries = []
    seen = set()
    for gav, cve, roots, apis in results:
        origins = {e.method: e.origin for e in roots.entries if e.cve == cve}
        for api in apis.apis:
            if ROOT in api.roles and api.method in origins:
                role = ROOT_AUGMENTED if origins[api.method] == AUGMENTED else ROOT_COMMIT
            else:
                role = REACHABLE
            key = (gav, cve, api.method)
            if key in seen:
                raise DuplicateEntry(f"{gav} {cve} {api.method}")
            seen.add(key)
            entries.append(DbEntry(gav, cve, api.method, api.body_hash, role, api.roots))
    return VulnDatabase(entries)


def count_apis(db: VulnDatabase | Iterable[DbEntry], mode: str = "multi") -> int:
    entries = db.entries if isinstance(db, VulnDatabase) else list(db)
    if mode == "multi":
        return len({e.key for e in entries})
    if mode == "once":
        return len({e.body_hash for e in entries})
    raise DomainError(f"unknown counting mode {mode!r}")


SUMMARY_COLUMNS = ("library", "versions", "cves", "apis_once", "apis_multi", "excl_root_once", "excl_root_multi", "commit_roots", "augmented_roots")


def summarize(db: VulnDatabase) -> list[dict]:
    """Per-library counts plus a total row, in the column layout of the published summary table."""

    def row(label: str, entries: list[DbEntry]) -> dict:
        nonroot = [e for e in entries if e.role == REACHABLE]
        return {
            "library": label,
            "versions": len({e.gav for e in entries}),
            "cves": len({e.cve for e in entries}),
            "apis_once": count_apis(entries, "once"),
            "apis_multi": count_apis(entries, "multi"),
            "excl_root_once": count_apis(nonroot, "once"),
            "excl_root_multi": count_apis(nonroot, "multi"),
            "commit_roots": len({(e.cve, e.method_id) for e in entries if e.role == ROOT_COMMIT}),
            "augmented_roots": len({(e.cve, e.method_id) for e in entries if e.role == ROOT_AUGMENTED}),
        }

    groups: dict[str, list[DbEntry]] = {}
    for e in db.entries:
        groups.setdefault(f"{e.gav.group}:{e.gav.artifact}", []).append(e)
    rows = [row(k, groups[k]) for k in sorted(groups)]
    rows.append(row("total", db.entries))
    return rows


@dataclass(frozen=True)
class GroundTruthSample:
    sampled_apis: frozenset[MethodId]
    err_apis: frozenset[MethodId]

    def __post_init__(self):
        if not self.err_apis <= self.sampled_apis:
            raise ValueError("err_apis must be a subset of sampled_apis")


def ground_truth_sample(db: VulnDatabase, sampled_roots, err_roots) -> GroundTruthSample:
    """Sampled APIs and their false positives, judged from sampled root methods.

    An API is identified by its method id; its source roots are unioned over
    all of its database entries.
    """
    sampled_roots, err_roots = frozenset(sampled_roots), frozenset(err_roots)
    roots_of: dict[MethodId, set[MethodId]] = {}
    for e in db.entries:
        roots_of.setdefault(e.method_id, set()).update(e.roots)
    sampled, err = set(), set()
    for api in sorted(roots_of):
        src = roots_of[api]
        if not src & sampled_roots:
            continue
        sampled.add(api)
        if all(r in err_roots for r in src):
            err.add(api)
    return GroundTruthSample(frozenset(sampled), frozenset(err))


@dataclass(frozen=True)
class IntervalResult:
    x: int
    n: int
    z: float
    estimate: float
    center: float
    low: float
    high: float

    def __str__(self):
        return format_interval(self)


def wilson_interval(x: int, n: int, z: float = 1.96) -> IntervalResult:
    """Wilson score interval for a binomial proportion x/n."""
    if n < 1:
        raise DomainError("sample size must be at least 1")
    if not 0 <= x <= n:
        raise DomainError(f"positives must lie in [0, {n}], got {x}")
    if z <= 0:
        raise DomainError("z must be positive")
    p = x / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    low = 0.0 if x == 0 else max(0.0, center - half)
    high = 1.0 if x == n else min(1.0, center + half)
    return IntervalResult(x, n, z, p, center, low, high)


def format_interval(r: IntervalResult) -> str:
    return f"{r.estimate * 100:.2f}% [{r.low * 100:.2f}%, {r.high * 100:.2f}%]"
