"""End-to-end database construction: advisories -> roots -> vulnerable APIs -> db.jsonl."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .callgraph import (
    AUGMENTED,
    COMMIT,
    CallGraph,
    RootMethodSet,
    backward_reachable,
    build_call_graph,
    collect_roots,
)
from .errors import AllDiscarded, IngestError, MissingVersion, ParseError, StageError, VapiError
from .ingest import AdvisoryRecord, LibraryStore, load_advisories, load_snapshot, resolve_version_pair
from .java import parse_source
from .localize import localize, version_diff_methods
from .model import LibraryCoordinate, matches
from .sift import DEFAULT_DEBUG, DebugPatterns, build_renaming_set, sift_methods
from .treediff import diff_units
from .vulndb import VulnDatabase, build_database, summarize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    advisories: Path
    libs: Path
    commits: Path
    output: Path | None = None
    workers: int = 1
    strict_augment: bool = False
    per_layer: bool = False
    debug_patterns: DebugPatterns = DEFAULT_DEBUG
    sift_report: Path | None = None
    report: Path | None = None
    dump_cg: Path | None = None

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("worker count must be at least 1")


@dataclass
class CveOutcome:
    cve: str
    library: str
    status: str  # included | missing-version | all-discarded
    detail: dict = field(default_factory=dict)
    sift: list = field(default_factory=list)
    results: list = field(default_factory=list)  # (gav, cve, RootMethodSet, VulnApiSet)


@dataclass
class BuildResult:
    database: VulnDatabase
    outcomes: list[CveOutcome]

    def stage_counts(self) -> dict:
        inc = [o for o in self.outcomes if o.status == "included"]
        return {
            "advisories": len(self.outcomes),
            "excluded_missing_version": sum(o.status == "missing-version" for o in self.outcomes),
            "excluded_all_discarded": sum(o.status == "all-discarded" for o in self.outcomes),
            "included": len(inc),
            "initial_patch_methods": sum(o.detail.get("initial_patch_methods", 0) for o in self.outcomes),
            "sifted_methods": sum(o.detail.get("sifted_methods", 0) for o in self.outcomes),
            "commit_roots": sum(len(o.detail.get("roots", {}).get(COMMIT, [])) for o in inc),
            "augmented_roots": sum(len(o.detail.get("roots", {}).get(AUGMENTED, [])) for o in inc),
            "db_entries": len(self.database),
        }


def _commit_patch_methods(commits_dir: Path, commit_id: str, debug: DebugPatterns):
    """Patch methods of one commit and the per-method sift record."""
    snap = load_snapshot(commits_dir, commit_id)
    initial, patch, sifted = 0, set(), []
    for pair in snap.file_pairs:
        try:
            before = parse_source(pair.before, pair.path) if pair.before is not None else None
            after = parse_source(pair.after, pair.path) if pair.after is not None else None
        except ParseError as exc:
            logger.warning("commit %s: skipping unparseable file: %s", commit_id, exc)
            continue
        diffs = diff_units(before, after)
        initial += len(diffs)
        rset = build_renaming_set(diffs, before, after)
        result = sift_methods(diffs, rset, debug)
        patch.update(d.id for d in result.patch_methods)
        report = result.to_json()
        report["commit"] = commit_id
        report["file"] = pair.path
        report["renaming_set"] = rset.to_json()
        sifted.append(report)
        logger.debug("%s %s: %d initial, %d sifted", commit_id, pair.path, len(diffs), len(result.sifted_methods))
    return initial, patch, sifted


class _Analyzer:
    """Per-process state: the library store and cached call graphs."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.store = LibraryStore(config.libs)
        self._cgs: dict[LibraryCoordinate, CallGraph] = {}

    def call_graph(self, gav: LibraryCoordinate) -> CallGraph:
        if gav not in self._cgs:
            self._cgs[gav] = build_call_graph(self.store.tree(gav))
        return self._cgs[gav]

    def analyze(self, adv: AdvisoryRecord) -> CveOutcome:
        cfg = self.config
        group, artifact = adv.library
        out = CveOutcome(str(adv.cve), f"{group}:{artifact}", "included")
        available = self.store.versions(group, artifact)
        try:
            pair = resolve_version_pair(adv, available)
        except MissingVersion as exc:
            logger.info("%s excluded: %s", adv.cve, exc)
            out.status = "missing-version"
            out.detail["reason"] = str(exc)
            return out
        v_gav = LibraryCoordinate(group, artifact, pair.adjacent_vulnerable)
        p_gav = LibraryCoordinate(group, artifact, pair.patch_release)
        out.detail["version_pair"] = [str(pair.adjacent_vulnerable), str(pair.patch_release)]

        patch_methods = set()
        initial = sifted = 0
        for commit in adv.patch_commits:
            n_init, methods, reports = _commit_patch_methods(cfg.commits, commit, cfg.debug_patterns)
            initial += n_init
            patch_methods |= methods
            sifted += sum(len(r["sifted_methods"]) for r in reports)
            out.sift.extend(reports)
        out.detail["initial_patch_methods"] = initial
        out.detail["sifted_methods"] = sifted
        out.detail["patch_methods"] = sorted(map(str, patch_methods))

        v_tree, p_tree = self.store.tree(v_gav), self.store.tree(p_gav)
        vdiff = version_diff_methods(v_tree, p_tree)
        try:
            loc = localize(patch_methods, v_tree, p_tree, vdiff)
        except AllDiscarded as exc:
            logger.info("%s excluded: %s", adv.cve, exc)
            out.status = "all-discarded"
            out.detail["reason"] = str(exc)
            out.detail["discarded"] = sorted(map(str, patch_methods))
            return out
        out.detail["localization"] = loc.to_json()

        augment_reports = []
        roots = collect_roots(
            loc,
            self.call_graph(p_gav),
            self.call_graph(v_gav),
            adv.cve,
            strict=cfg.strict_augment,
            p_tree=p_tree,
            v_tree=v_tree,
            per_layer=cfg.per_layer,
            reports=augment_reports,
        )
        out.detail["augmentation"] = [r.to_json() for r in augment_reports]
        out.detail["roots"] = {
            COMMIT: sorted(map(str, roots.by_origin(COMMIT))),
            AUGMENTED: sorted(map(str, roots.by_origin(AUGMENTED))),
        }

        for version in available:
            if not matches(adv.vulnerable_range, version):
                continue
            gav = LibraryCoordinate(group, artifact, version)
            tree = self.store.tree(gav)
            present = RootMethodSet(frozenset(e for e in roots.entries if e.method in tree))
            if not present.entries:
                continue
            apis = backward_reachable(present, self.call_graph(gav), {m: r.body_hash for m, r in tree.methods.items()})
            out.results.append((gav, adv.cve, present, apis))
        return out


_WORKER: _Analyzer | None = None


def _init_worker(config: PipelineConfig):
    global _WORKER
    _WORKER = _Analyzer(config)


def _run_one(adv: AdvisoryRecord) -> CveOutcome:
    try:
        return _WORKER.analyze(adv)
    except VapiError as exc:
        raise StageError(f"analyze {adv.cve}", exc) from exc


def build(config: PipelineConfig) -> BuildResult:
    try:
        advisories = load_advisories(config.advisories)
    except VapiError as exc:
        raise StageError("ingest", exc) from exc
    if not Path(config.libs).is_dir():
        raise StageError("ingest", IngestError(f"library store not found: {config.libs}"))
    if config.workers > 1 and len(advisories) > 1:
        with ProcessPoolExecutor(config.workers, initializer=_init_worker, initargs=(config,)) as pool:
            outcomes = list(pool.map(_run_one, advisories))
    else:
        _init_worker(config)
        outcomes = [_run_one(a) for a in advisories]
    results = [r for o in outcomes for r in o.results]
    try:
        db = build_database(results)
    except VapiError as exc:
        raise StageError("database", exc) from exc
    result = BuildResult(db, outcomes)
    _write_outputs(config, result)
    return result


def _write_outputs(config: PipelineConfig, result: BuildResult) -> None:
    if config.output is not None:
        result.database.write(config.output)
    if config.sift_report is not None:
        data = [{"cve": o.cve, "files": o.sift} for o in result.outcomes]
        Path(config.sift_report).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    if config.report is not None:
        data = [{"cve": o.cve, "library": o.library, "status": o.status, **o.detail} for o in result.outcomes]
        Path(config.report).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    if config.dump_cg is not None:
        store = LibraryStore(config.libs)
        target = Path(config.dump_cg)
        target.mkdir(parents=True, exist_ok=True)
        gavs = sorted({r[0] for o in result.outcomes for r in o.results}, key=str)
        for gav in gavs:
            cg = build_call_graph(store.tree(gav))
            (target / f"{gav}.cg.jsonl".replace(":", "_")).write_text(cg.to_jsonl(), encoding="utf-8")


def summary_rows(result: BuildResult) -> list[dict]:
    return summarize(result.database)

