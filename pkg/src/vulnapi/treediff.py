"""Statement-level differencing of methods.

Sibling statement lists are aligned by longest common subsequence over their
normalized serializations. Unmatched statements that reappear verbatim
elsewhere in the same list cancel out; the rest are paired by statement kind
in order. A pair of compound statements with the same header is descended
into, any other pair becomes a whole-statement ``Update``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .frontend import MethodRecord, extract_methods
from .java import nodes as n
from .java.render import child_lists, header_key, stmt_key
from .model import MethodChangeKind, MethodId, StatementChangeKind

Path = tuple[int, ...]


@dataclass(frozen=True)
class StatementChange:
    kind: StatementChangeKind
    before: n.Stmt | None
    after: n.Stmt | None
    path: Path

    def __post_init__(self):
        if self.kind is StatementChangeKind.INSERT and (self.before is not None or self.after is None):
            raise ValueError("Insert needs exactly an after side")
        if self.kind is StatementChangeKind.DELETE and (self.after is not None or self.before is None):
            raise ValueError("Delete needs exactly a before side")
        if self.kind is StatementChangeKind.UPDATE:
            if self.before is None or self.after is None or stmt_key(self.before) == stmt_key(self.after):
                raise ValueError("Update needs two differing sides")

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "path": list(self.path),
            "before": stmt_key(self.before) if self.before is not None else None,
            "after": stmt_key(self.after) if self.after is not None else None,
        }


@dataclass(frozen=True)
class MethodDiff:
    id: MethodId
    method_change: MethodChangeKind
    statement_changes: tuple[StatementChange, ...] = ()
    before: MethodRecord | None = None
    after: MethodRecord | None = None

    def __post_init__(self):
        if self.method_change is MethodChangeKind.MODIFIED and not self.statement_changes:
            raise ValueError("Modified method without statement changes")

    def to_json(self) -> dict:
        return {
            "method": str(self.id),
            "change": self.method_change.value,
            "statements": [c.to_json() for c in self.statement_changes],
        }


def _lcs_pairs(a: list[str], b: list[str]) -> list[tuple[int, int]]:
    m, k = len(a), len(b)
    table = [[0] * (k + 1) for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        row, nxt = table[i], table[i + 1]
        for j in range(k - 1, -1, -1):
            row[j] = nxt[j + 1] + 1 if a[i] == b[j] else max(nxt[j], row[j + 1])
    pairs = []
    i = j = 0
    while i < m and j < k:
        if a[i] == b[j]:
            pairs.append((i, j))
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1
    return pairs


def _diff_lists(before: tuple[n.Stmt, ...], after: tuple[n.Stmt, ...], path: Path) -> list[StatementChange]:
    keys_a = [stmt_key(s) for s in before]
    keys_b = [stmt_key(s) for s in after]
    matched = _lcs_pairs(keys_a, keys_b)
    rest_a = sorted(set(range(len(before))) - {i for i, _ in matched})
    rest_b = sorted(set(range(len(after))) - {j for _, j in matched})

    # identical statements deleted in one place and inserted in another cancel out
    pending = defaultdict(list)
    for j in rest_b:
        pending[keys_b[j]].append(j)
    cancelled_b = set()
    left_a = []
    for i in rest_a:
        bucket = pending.get(keys_a[i])
        if bucket:
            cancelled_b.add(bucket.pop(0))
        else:
            left_a.append(i)
    left_b = [j for j in rest_b if j not in cancelled_b]

    by_kind_b = defaultdict(list)
    for j in left_b:
        by_kind_b[type(after[j])].append(j)
    changes: list[StatementChange] = []
    paired_b = set()
    for i in left_a:
        x = before[i]
        bucket = by_kind_b.get(type(x))
        if not bucket:
            changes.append(StatementChange(StatementChangeKind.DELETE, x, None, path + (i,)))
            continue
        j = bucket.pop(0)
        paired_b.add(j)
        y = after[j]
        slots_x, slots_y = child_lists(x), child_lists(y)
        if slots_x and header_key(x) == header_key(y) and len(slots_x) == len(slots_y):
            for slot, (cx, cy) in enumerate(zip(slots_x, slots_y)):
                changes.extend(_diff_lists(cx, cy, path + (i, slot)))
        else:
            changes.append(StatementChange(StatementChangeKind.UPDATE, x, y, path + (i,)))
    for j in left_b:
        if j not in paired_b:
            changes.append(StatementChange(StatementChangeKind.INSERT, None, after[j], path + (j,)))
    return changes


def _stmts(rec: MethodRecord) -> tuple[n.Stmt, ...]:
    return rec.body.stmts if rec.body is not None else ()


def diff_method_pair(before: MethodRecord, after: MethodRecord) -> list[StatementChange]:
    if before.id != after.id:
        raise ValueError(f"method ids differ: {before.id} vs {after.id}")
    if (before.body is None) != (after.body is None):
        # abstract <-> concrete: the whole body is the change
        if before.body is None:
            return [StatementChange(StatementChangeKind.INSERT, None, s, (j,)) for j, s in enumerate(_stmts(after))]
        return [StatementChange(StatementChangeKind.DELETE, s, None, (i,)) for i, s in enumerate(_stmts(before))]
    changes = _diff_lists(_stmts(before), _stmts(after), ())
    return sorted(changes, key=lambda c: (c.path, c.kind.value))


def diff_method_maps(before: dict[MethodId, MethodRecord], after: dict[MethodId, MethodRecord]) -> list[MethodDiff]:
    diffs = []
    for mid in sorted(set(before) | set(after)):
        b, a = before.get(mid), after.get(mid)
        if b is None:
            diffs.append(MethodDiff(mid, MethodChangeKind.INSERTED, (), None, a))
        elif a is None:
            diffs.append(MethodDiff(mid, MethodChangeKind.DELETED, (), b, None))
        elif b.body_hash != a.body_hash or (b.body is None) != (a.body is None):
            changes = diff_method_pair(b, a)
            if changes:
                diffs.append(MethodDiff(mid, MethodChangeKind.MODIFIED, tuple(changes), b, a))
    return diffs


def diff_units(before: n.CompilationUnit | None, after: n.CompilationUnit | None) -> list[MethodDiff]:
    if before is None and after is None:
        raise ValueError("diff_units needs at least one side")
    bmap = {r.id: r for r in extract_methods(before)} if before is not None else {}
    amap = {r.id: r for r in extract_methods(after)} if after is not None else {}
    return diff_method_maps(bmap, amap)
