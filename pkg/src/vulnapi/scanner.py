"""Detect vulnerable APIs that a project actually invokes."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .callgraph import build_call_graph
from .errors import DomainError, IngestError, SchemaError
from .frontend import SourceTree
from .ingest import LibraryStore
from .model import CveId, LibraryCoordinate, MethodId
from .vulndb import VulnDatabase

logger = logging.getLogger(__name__)

NO_VULNERABLE_DEPS = "NoVulnerableDeps"
DEPS_NOT_INVOKED = "VulnerableDepsNotInvoked"
APIS_INVOKED = "VulnerableApisInvoked"


@dataclass(frozen=True)
class ProjectManifest:
    name: str
    dependencies: tuple[LibraryCoordinate, ...] = ()

    @classmethod
    def from_json(cls, obj: dict) -> "ProjectManifest":
        if not isinstance(obj, dict):
            raise SchemaError("manifest is not a JSON object")
        name = obj.get("name")
        if not isinstance(name, str) or not name:
            raise SchemaError("expected a non-empty string", field="name")
        deps = obj.get("dependencies", [])
        if not isinstance(deps, list):
            raise SchemaError("expected a list", field="dependencies")
        try:
            coords = tuple(LibraryCoordinate.parse(d) for d in deps)
        except (DomainError, AttributeError) as exc:
            raise SchemaError(str(exc), field="dependencies") from None
        return cls(name, coords)

    @classmethod
    def load(cls, path: str | Path) -> "ProjectManifest":
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise IngestError(f"cannot read manifest {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed JSON ({exc.msg})") from None
        return cls.from_json(obj)


@dataclass(frozen=True)
class Finding:
    gav: LibraryCoordinate
    cve: CveId
    vulnerable_api: MethodId
    project_call_sites: tuple[tuple[MethodId, int], ...]
    via_wrappers: tuple[MethodId, ...] = ()

    def __post_init__(self):
        if self.total_frequency < 1:
            raise ValueError("a finding needs at least one call site")

    @property
    def total_frequency(self) -> int:
        return sum(c for _, c in self.project_call_sites)

    def to_json(self) -> dict:
        return {
            "gav": str(self.gav),
            "cve": str(self.cve),
            "api": str(self.vulnerable_api),
            "call_sites": [{"caller": str(m), "count": c} for m, c in self.project_call_sites],
            "total_frequency": self.total_frequency,
            "via_wrappers": [str(m) for m in self.via_wrappers],
        }


@dataclass(frozen=True)
class ScanReport:
    project: str
    findings: tuple[Finding, ...]
    verdict: str
    dependencies: tuple[LibraryCoordinate, ...] = ()
    missing: tuple[LibraryCoordinate, ...] = ()
    vulnerable_deps: tuple[LibraryCoordinate, ...] = field(default=())

    def __post_init__(self):
        if (self.verdict == APIS_INVOKED) != bool(self.findings):
            raise ValueError("verdict inconsistent with findings")
        if self.verdict == DEPS_NOT_INVOKED and not self.vulnerable_deps:
            raise ValueError("VulnerableDepsNotInvoked needs a vulnerable dependency")

    @property
    def exit_code(self) -> int:
        return 1 if self.verdict == APIS_INVOKED else 0

    def to_json(self) -> dict:
        return {
            "project": self.project,
            "verdict": self.verdict,
            "dependencies": [str(d) for d in self.dependencies],
            "missing_dependencies": [str(d) for d in self.missing],
            "vulnerable_dependencies": [str(d) for d in self.vulnerable_deps],
            "findings": [f.to_json() for f in self.findings],
            "frequency_unit": "call expression",
        }

    def to_text(self) -> str:
        lines = [f"project: {self.project}", f"verdict: {self.verdict}"]
        for d in self.missing:
            lines.append(f"missing dependency: {d}")
        if self.findings:
            rows = [("GAV", "CVE", "API", "FREQ")]
            rows += [(str(f.gav), str(f.cve), str(f.vulnerable_api), str(f.total_frequency)) for f in self.findings]
            widths = [max(len(r[i]) for r in rows) for i in range(4)]
            for r in rows:
                lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"


def resolve_dependencies(manifest: ProjectManifest, store: LibraryStore):
    """Direct dependencies found in the store, plus the coordinates that were not."""
    found, missing = [], []
    for gav in manifest.dependencies:
        if gav in store:
            found.append((gav, store.tree(gav)))
        else:
            logger.warning("dependency %s not in library store", gav)
            missing.append(gav)
    if manifest.dependencies and not found:
        logger.warning("no dependency of %s could be resolved", manifest.name)
    return found, missing


def scan_project(
    project: SourceTree,
    deps: list[tuple[LibraryCoordinate, SourceTree]],
    db: VulnDatabase,
    name: str = "project",
    missing: list[LibraryCoordinate] | None = None,
) -> ScanReport:
    units = list(project.units)
    owner: dict[MethodId, LibraryCoordinate] = {}
    for gav, tree in deps:
        units.extend(tree.units)
        for mid in tree.methods:
            owner.setdefault(mid, gav)
    own = set(project.methods)
    cg = build_call_graph(units)

    sites: dict[tuple, dict[MethodId, int]] = {}
    for caller, callee in cg.sorted_edges():
        if caller not in own or callee in own or callee not in owner:
            continue
        gav = owner[callee]
        for entry in db.lookup(gav, callee):
            per = sites.setdefault((gav, entry.cve, callee), {})
            per[caller] = per.get(caller, 0) + cg.site_counts[(caller, callee)]

    findings = []
    for key in sorted(sites, key=lambda k: (str(k[0]), str(k[1]), k[2])):
        gav, cve, api = key
        callers = sites[key]
        wrappers = set()
        stack = list(callers)
        while stack:
            for up in cg.callers(stack.pop()):
                if up in own and up not in wrappers and up not in callers:
                    wrappers.add(up)
                    stack.append(up)
        findings.append(Finding(gav, cve, api, tuple(sorted(callers.items())), tuple(sorted(wrappers))))

    dep_gavs = tuple(g for g, _ in deps)
    vulnerable = tuple(g for g in dep_gavs if g in db.by_gav)
    if findings:
        verdict = APIS_INVOKED
    elif vulnerable:
        verdict = DEPS_NOT_INVOKED
    else:
        verdict = NO_VULNERABLE_DEPS
    return ScanReport(name, tuple(findings), verdict, dep_gavs, tuple(missing or ()), vulnerable)


def scan_directory(project_dir: str | Path, store: LibraryStore, db: VulnDatabase) -> ScanReport:
    """Scan ``project_dir`` holding ``project.json`` and sources under ``src``."""
    project_dir = Path(project_dir)
    if not project_dir.is_dir():
        raise IngestError(f"project directory not found: {project_dir}")
    manifest = ProjectManifest.load(project_dir / "project.json")
    tree = SourceTree.load(project_dir / "src")
    deps, missing = resolve_dependencies(manifest, store)
    return scan_project(tree, deps, db, manifest.name, missing)
