"""Advisories, the library source store, and commit snapshots."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError, IngestError, MissingVersion, SchemaError
from .frontend import SourceTree
from .model import CveId, LibraryCoordinate, Version, VersionRange, matches

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdvisoryRecord:
    cve: CveId
    library: tuple[str, str]
    vulnerable_range: VersionRange
    patch_commits: tuple[str, ...]
    description: str = ""

    def to_json(self) -> dict:
        return {
            "cve": str(self.cve),
            "group": self.library[0],
            "artifact": self.library[1],
            "vulnerable_range": str(self.vulnerable_range),
            "patch_commits": list(self.patch_commits),
            "description": self.description,
        }


def _require(obj: dict, key: str, kind, lineno: int):
    if key not in obj:
        raise SchemaError("missing", field=key, line=lineno)
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaError(f"expected {kind.__name__}, got {type(value).__name__}", field=key, line=lineno)
    return value


def parse_advisory(obj: dict, lineno: int = 0) -> AdvisoryRecord | None:
    """Validate one decoded record; returns None when it lists no patch commits."""
    if not isinstance(obj, dict):
        raise SchemaError("record is not a JSON object", line=lineno)
    commits = obj.get("patch_commits", [])
    if commits is None:
        commits = []
    if not isinstance(commits, list) or not all(isinstance(c, str) and c for c in commits):
        raise SchemaError("expected a list of commit ids", field="patch_commits", line=lineno)
    values = {}
    for key in ("cve", "group", "artifact", "vulnerable_range"):
        values[key] = _require(obj, key, str, lineno)
    desc = obj.get("description", "")
    if not isinstance(desc, str):
        raise SchemaError("expected str", field="description", line=lineno)
    try:
        cve = CveId(values["cve"])
    except DomainError as exc:
        raise SchemaError(str(exc), field="cve", line=lineno) from None
    try:
        rng = VersionRange.parse(values["vulnerable_range"])
    except DomainError as exc:
        raise SchemaError(str(exc), field="vulnerable_range", line=lineno) from None
    if not values["group"] or not values["artifact"]:
        raise SchemaError("empty library coordinate", field="group" if not values["group"] else "artifact", line=lineno)
    if not commits:
        return None
    return AdvisoryRecord(cve, (values["group"], values["artifact"]), rng, tuple(commits), desc)


def load_advisories(path: str | Path) -> list[AdvisoryRecord]:
    """Read advisories.jsonl, dropping records without patch commits (with a notice)."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IngestError(f"cannot read advisories {path}: {exc}") from exc
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed JSON ({exc.msg})", line=lineno) from None
        rec = parse_advisory(obj, lineno)
        if rec is None:
            logger.info("line %d: %s has no patch commits, filtered", lineno, obj.get("cve"))
            continue
        out.append(rec)
    return out


def dump_advisories(records, path: str | Path) -> None:
    text = "".join(json.dumps(r.to_json(), sort_keys=False) + "\n" for r in records)
    Path(path).write_text(text, encoding="utf-8")


@dataclass(frozen=True)
class VersionPair:
    adjacent_vulnerable: Version
    patch_release: Version

    def __post_init__(self):
        if not self.adjacent_vulnerable < self.patch_release:
            raise DomainError("adjacent vulnerable version must precede the patch release")


def resolve_version_pair(advisory: AdvisoryRecord | VersionRange, available: list[Version]) -> VersionPair:
    """Greatest matching version and the least later non-matching one."""
    rng = advisory.vulnerable_range if isinstance(advisory, AdvisoryRecord) else advisory
    ordered = sorted(available)
    vul = [v for v in ordered if matches(rng, v)]
    if not vul:
        raise MissingVersion(f"no available version matches {rng}")
    v_i = vul[-1]
    later = [v for v in ordered if v > v_i and not matches(rng, v)]
    if not later:
        raise MissingVersion(f"no patch release after {v_i} for {rng}")
    return VersionPair(v_i, later[0])


class LibraryStore:
    """Source trees laid out as ``<root>/<group>/<artifact>/<version>/src``."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise IngestError(f"library store not found: {self.root}")
        self.index: dict[tuple[str, str], list[Version]] = {}
        self._dirs: dict[LibraryCoordinate, Path] = {}
        self._trees: dict[LibraryCoordinate, SourceTree] = {}
        for gdir in sorted(p for p in self.root.iterdir() if p.is_dir()):
            for adir in sorted(p for p in gdir.iterdir() if p.is_dir()):
                versions = []
                for vdir in sorted(p for p in adir.iterdir() if p.is_dir()):
                    try:
                        v = Version.parse(vdir.name)
                    except DomainError:
                        logger.warning("ignoring non-version directory %s", vdir)
                        continue
                    if not (vdir / "src").is_dir():
                        logger.warning("version %s has no src directory, ignored", vdir)
                        continue
                    versions.append(v)
                    self._dirs[LibraryCoordinate(gdir.name, adir.name, v)] = vdir / "src"
                if versions:
                    self.index[(gdir.name, adir.name)] = sorted(versions)

    def versions(self, group: str, artifact: str) -> list[Version]:
        return list(self.index.get((group, artifact), []))

    def __contains__(self, gav: LibraryCoordinate) -> bool:
        return gav in self._dirs

    def coordinate(self, group: str, artifact: str, version: Version) -> LibraryCoordinate:
        """The stored coordinate (keeps the directory's version spelling)."""
        for v in self.index.get((group, artifact), []):
            if v == version:
                return LibraryCoordinate(group, artifact, v)
        raise MissingVersion(f"{group}:{artifact}:{version} not in store")

    def tree(self, gav: LibraryCoordinate) -> SourceTree:
        if gav not in self._trees:
            if gav not in self._dirs:
                raise MissingVersion(f"{gav} not in store")
            self._trees[gav] = SourceTree.load(self._dirs[gav])
        return self._trees[gav]


@dataclass(frozen=True)
class FilePair:
    path: str
    before: str | None
    after: str | None

    def __post_init__(self):
        if self.before is None and self.after is None:
            raise DomainError("file pair needs at least one side")


@dataclass(frozen=True)
class CommitSnapshot:
    commit_id: str
    file_pairs: tuple[FilePair, ...] = field(default_factory=tuple)


def _read_side(root: Path) -> dict[str, str]:
    if not root.is_dir():
        return {}
    out = {}
    for p in sorted(root.rglob("*")):
        if p.is_file():
            out[p.relative_to(root).as_posix()] = p
    return out


def load_snapshot(commits_dir: str | Path, commit_id: str) -> CommitSnapshot:
    base = Path(commits_dir) / commit_id
    if not base.is_dir():
        raise IngestError(f"commit snapshot not found: {base}")
    before, after = _read_side(base / "before"), _read_side(base / "after")
    pairs = []
    for rel in sorted(set(before) | set(after)):
        if not rel.endswith(".java"):
            logger.info("commit %s: skipping non-Java file %s", commit_id, rel)
            continue
        b = before[rel].read_text(encoding="utf-8") if rel in before else None
        a = after[rel].read_text(encoding="utf-8") if rel in after else None
        pairs.append(FilePair(rel, b, a))
    if not pairs:
        logger.warning("commit %s: no Java file pairs", commit_id)
    return CommitSnapshot(commit_id, tuple(pairs))
