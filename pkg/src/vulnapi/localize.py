"""Lift commit-level patch methods to the release-version level."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AllDiscarded
from .frontend import SourceTree
from .model import MethodId
from .treediff import diff_method_maps

NEITHER = "absent-from-both-versions"
UNCHANGED = "not-in-version-diff"
DELETED = "only-in-vulnerable-version"


@dataclass(frozen=True)
class LocalizationResult:
    roots_commit: frozenset[MethodId] = frozenset()
    added_patch_methods: frozenset[MethodId] = frozenset()
    discarded: frozenset[MethodId] = frozenset()
    reasons: dict[MethodId, str] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        a, b, c = self.roots_commit, self.added_patch_methods, self.discarded
        if a & b or a & c or b & c:
            raise ValueError("localization sets must be disjoint")

    def to_json(self) -> dict:
        return {
            "roots_commit": sorted(map(str, self.roots_commit)),
            "added_patch_methods": sorted(map(str, self.added_patch_methods)),
            "discarded": {str(m): self.reasons.get(m, "") for m in sorted(self.discarded)},
        }


def version_diff_methods(v_vul: SourceTree, v_patch: SourceTree) -> frozenset[MethodId]:
    """Methods inserted, deleted or modified between two release trees."""
    return frozenset(d.id for d in diff_method_maps(v_vul.methods, v_patch.methods))


def localize(
    patch_methods: set[MethodId] | frozenset[MethodId],
    v_vul: SourceTree,
    v_patch: SourceTree,
    vdiff: frozenset[MethodId],
) -> LocalizationResult:
    roots, added, discarded = set(), set(), set()
    reasons = {}
    for m in sorted(patch_methods):
        in_vul, in_patch = m in v_vul, m in v_patch
        if in_vul and in_patch:
            if m in vdiff:
                roots.add(m)
            else:
                discarded.add(m)
                reasons[m] = UNCHANGED
        elif in_patch:
            added.add(m)
        else:
            discarded.add(m)
            reasons[m] = DELETED if in_vul else NEITHER
    if not roots and not added:
        raise AllDiscarded(f"all {len(patch_methods)} patch methods discarded")
    return LocalizationResult(frozenset(roots), frozenset(added), frozenset(discarded), reasons)
