"""Command-line entry point.

Exit codes: 0 success (or no vulnerable usage), 1 vulnerable APIs invoked, 2 error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import DomainError, VapiError
from .ingest import LibraryStore
from .java import parse_source
from .java import nodes as n
from .pipeline import PipelineConfig, build
from .scanner import scan_directory
from .sift import build_renaming_set, sift_methods
from .treediff import diff_units
from .vulndb import SUMMARY_COLUMNS, VulnDatabase, count_apis, format_interval, summarize, wilson_interval

logger = logging.getLogger("vulnapi")


def _table(rows: list[dict], columns) -> str:
    cells = [list(columns)] + [[str(r[c]) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "\n".join("  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))) for row in cells) + "\n"


def _emit(args, data, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def cmd_build_db(args) -> int:
    cfg = PipelineConfig(
        advisories=Path(args.advisories),
        libs=Path(args.libs),
        commits=Path(args.commits),
        output=Path(args.out),
        workers=args.workers,
        strict_augment=args.strict_augment,
        per_layer=args.per_layer_exit,
        sift_report=Path(args.sift_report) if args.sift_report else None,
        report=Path(args.report) if args.report else None,
        dump_cg=Path(args.dump_cg) if args.dump_cg else None,
    )
    result = build(cfg)
    stages = result.stage_counts()
    rows = summarize(result.database)
    text = "".join(f"{k}: {v}\n" for k, v in stages.items()) + "\n" + _table(rows, SUMMARY_COLUMNS)
    _emit(args, {"stages": stages, "summary": rows}, text)
    return 0


def cmd_scan(args) -> int:
    db = VulnDatabase.load(args.db)
    store = LibraryStore(args.libs)
    report = scan_directory(args.project, store, db)
    _emit(args, report.to_json(), report.to_text())
    return report.exit_code


def cmd_stats(args) -> int:
    db = VulnDatabase.load(args.db)
    if args.mode == "table":
        rows = summarize(db)
        _emit(args, rows, _table(rows, SUMMARY_COLUMNS))
    else:
        count = count_apis(db, args.mode)
        _emit(args, {"mode": args.mode, "count": count}, f"{count}\n")
    return 0


def cmd_wilson(args) -> int:
    r = wilson_interval(args.x, args.n, args.z)
    data = {"x": r.x, "n": r.n, "z": r.z, "estimate": r.estimate, "low": r.low, "high": r.high}
    _emit(args, data, format_interval(r) + "\n")
    return 0


def _parse_pair(args):
    def load(path):
        if path is None or path == "-":
            return None
        return parse_source(Path(path).read_text(encoding="utf-8"), path)

    before, after = load(args.before), load(args.after)
    if before is None and after is None:
        raise DomainError("need at least one of BEFORE/AFTER")
    return before, after


def cmd_diff(args) -> int:
    before, after = _parse_pair(args)
    diffs = diff_units(before, after)
    data = {"methods": [d.to_json() for d in diffs]}
    if args.dump_ast:
        data["ast"] = {"before": n.to_json(before) if before else None, "after": n.to_json(after) if after else None}
    lines = []
    for d in diffs:
        lines.append(f"{d.method_change.value} {d.id}")
        for c in d.statement_changes:
            path = ".".join(map(str, c.path))
            lines.append(f"  {c.kind.value} @{path}: {c.to_json()['before']} => {c.to_json()['after']}")
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.dump_ast:
        text += json.dumps(data["ast"], indent=2) + "\n"
    _emit(args, data, text)
    return 0


def cmd_sift(args) -> int:
    before, after = _parse_pair(args)
    diffs = diff_units(before, after)
    rset = build_renaming_set(diffs, before, after)
    result = sift_methods(diffs, rset)
    data = result.to_json()
    data["renaming_set"] = rset.to_json()
    lines = [f"retained {d.id}" for d in result.patch_methods]
    for d, verdicts in result.sifted_methods:
        pats = ",".join(sorted({v.pattern.value for v in verdicts if v.pattern}))
        lines.append(f"sifted   {d.id} [{pats}]")
    _emit(args, data, "\n".join(lines) + ("\n" if lines else ""))
    return 0


# Global flags may appear before or after the subcommand. Their defaults are
# filled in after parsing: parents share action objects, so set_defaults on
# the top-level parser would leak into every subparser and mask earlier values.
GLOBAL_DEFAULTS = {"workers": 1, "seed": 0, "format": "text"}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker processes (default 1)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized steps (default 0)")
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS, help="output format (default text)")
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="vulnapi", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-db", parents=[common], help="build the vulnerable-API database")
    p.add_argument("--advisories", required=True)
    p.add_argument("--libs", required=True, help="library store root")
    p.add_argument("--commits", required=True, help="commit snapshot root")
    p.add_argument("--out", required=True, help="db.jsonl output path")
    p.add_argument("--strict-augment", action="store_true")
    p.add_argument("--per-layer-exit", action="store_true", help="stop augmentation after the first productive layer")
    p.add_argument("--sift-report", help="write sifting decisions as JSON")
    p.add_argument("--report", help="write per-CVE localization and augmentation details as JSON")
    p.add_argument("--dump-cg", help="directory for per-version call-graph edge dumps")
    p.set_defaults(func=cmd_build_db)

    p = sub.add_parser("scan", parents=[common], help="scan a project for invoked vulnerable APIs")
    p.add_argument("project", help="directory with project.json and src/")
    p.add_argument("--db", required=True)
    p.add_argument("--libs", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("stats", parents=[common], help="count database APIs")
    p.add_argument("--db", required=True)
    p.add_argument("--mode", choices=("once", "multi", "table"), default="table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("wilson", parents=[common], help="Wilson score interval")
    p.add_argument("x", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--z", type=float, default=1.96)
    p.set_defaults(func=cmd_wilson)

    for name, func, text in (("diff", cmd_diff, "statement diff of two Java files"), ("sift", cmd_sift, "sift a file pair")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("before", help="file before the change, or - if added")
        p.add_argument("after", help="file after the change, or - if deleted")
        if name == "diff":
            p.add_argument("--dump-ast", action="store_true")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("VAPI_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (VapiError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
