"""Build the database over the fixture corpus and compare it with the golden file.

--update rewrites the golden file (only after inspecting the per-CVE report).
"""

import argparse
import json
import sys
from pathlib import Path

from vulnapi.pipeline import PipelineConfig, build

CORPUS = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "corpus"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--update", action="store_true")
    ap.add_argument("--report", action="store_true", help="print per-CVE localization and augmentation")
    args = ap.parse_args()
    cfg = PipelineConfig(CORPUS / "advisories.jsonl", CORPUS / "libs", CORPUS / "commits", workers=args.workers)
    result = build(cfg)
    text = result.database.to_jsonl()
    golden = CORPUS / "golden_db.jsonl"
    print(json.dumps(result.stage_counts()))
    if args.report:
        for o in result.outcomes:
            print(json.dumps({"cve": o.cve, "status": o.status, **o.detail}, indent=1))
    if args.update:
        golden.write_text(text, encoding="utf-8")
        print(f"wrote {golden}")
        return 0
    same = golden.exists() and golden.read_text(encoding="utf-8") == text
    print("golden: match" if same else "golden: DIFFERS")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
