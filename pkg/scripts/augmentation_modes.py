"""Compare augmentation variants on the fixture corpus.

Per-method early exit (default), per-layer exit, and the strict mode that
also requires the candidate body to be unchanged apart from the new calls.
"""

import json
from pathlib import Path

from vulnapi.callgraph import AUGMENTED
from vulnapi.pipeline import PipelineConfig, build

CORPUS = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "corpus"


def main():
    variants = {
        "per-method": {},
        "per-layer": {"per_layer": True},
        "strict": {"strict_augment": True},
    }
    for label, extra in variants.items():
        cfg = PipelineConfig(CORPUS / "advisories.jsonl", CORPUS / "libs", CORPUS / "commits", **extra)
        result = build(cfg)
        roots = {o.cve: o.detail.get("roots", {}).get(AUGMENTED, []) for o in result.outcomes if o.status == "included"}
        print(label, json.dumps(roots, indent=1))


if __name__ == "__main__":
    main()
