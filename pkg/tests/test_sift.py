import random

import pytest
from hypothesis import given, settings, strategies as st

from vulnapi.java import parse_source, parse_statements
from vulnapi.model import MethodChangeKind as MC
from vulnapi.model import MethodId
from vulnapi.model import StatementChangeKind as SC
from vulnapi.sift import (
    DebugPatterns,
    Pattern,
    RenamingSet,
    build_renaming_set,
    classify_statement,
    sift_methods,
)
from vulnapi.treediff import MethodDiff, StatementChange, diff_units

import javagen
from sift_table import CASES, run_case, wrap


@pytest.mark.parametrize("c", CASES, ids=[c.id for c in CASES])
def test_pattern_table(c):
    fate, patterns = run_case(c)
    assert fate == c.expected
    if c.expected == "sifted":
        assert patterns == c.patterns


def _units(before, after):
    b, a = parse_source(before), parse_source(after)
    return diff_units(b, a), b, a


def test_function_rename_entry():
    diffs, b, a = _units("class C { int f() { return 1; } }", "class C { int g() { return 1; } }")
    rset = build_renaming_set(diffs, b, a)
    assert rset.renamed_functions == {(MethodId("C", "f", ()), MethodId("C", "g", ()))}


def test_field_rename_entry():
    diffs, b, a = _units("class C { int count = 0; }", "class C { int total = 0; }")
    assert build_renaming_set(diffs, b, a).renamed_fields == {("C", "count", "total")}


def test_field_with_other_initializer_is_not_a_rename():
    diffs, b, a = _units("class C { int count = 0; }", "class C { int total = 1; }")
    assert not build_renaming_set(diffs, b, a)


def test_param_rename_entry_and_substitution_oracle():
    before = "class C { void foo(File src) { read(src); } }"
    after = "class C { void foo(File source) { read(source); } }"
    diffs, b, a = _units(before, after)
    rset = build_renaming_set(diffs, b, a)
    assert rset.renamed_params == {(MethodId("C", "foo", ("File",)), "src", "source")}
    # textual substitution source -> src makes the sides identical
    assert after.replace("source", "src") == before


def test_unrelated_examples():
    (s,) = parse_statements('log.warn("retrying");')
    v = classify_statement(StatementChange(SC.INSERT, None, s, (0,)), RenamingSet())
    assert (v.pattern, v.related) == (Pattern.DEBUGGING, False)
    b, a = parse_statements("A a = foo(); A b = foo();")
    v = classify_statement(StatementChange(SC.UPDATE, b, a, (0,)), RenamingSet())
    assert v.pattern is Pattern.ASSIGN_LHS_RENAME


def test_unknown_statement_always_related():
    (s,) = parse_statements("class Local { }")
    v = classify_statement(StatementChange(SC.INSERT, None, s, (0,)), RenamingSet())
    assert v.related and v.pattern is None


def test_debug_lists_are_configurable():
    (s,) = parse_statements('tracer.emit("x");')
    change = StatementChange(SC.INSERT, None, s, (0,))
    assert classify_statement(change, RenamingSet()).related
    cfg = DebugPatterns(logger_receivers=frozenset({"tracer"}))
    assert classify_statement(change, RenamingSet(), debug=cfg).pattern is Pattern.DEBUGGING


def test_inserted_methods_pass_through():
    diffs, b, a = _units("class C { }", 'class C { void f() { log.debug("only logging"); } }')
    result = sift_methods(diffs, build_renaming_set(diffs, b, a))
    assert [d.method_change for d in result.patch_methods] == [MC.INSERTED]


def _random_commit(seed: int):
    """A random file pair: bodies mutated with a mix of debug and real edits."""
    r = random.Random(seed)
    methods_b, methods_a = [], []
    for i in range(r.randint(1, 5)):
        stmts = [javagen.stmt(r) for _ in range(r.randint(0, 4))]
        after = list(stmts)
        for _ in range(r.randint(0, 2)):
            pos = r.randint(0, len(after))
            if r.random() < 0.6:
                after.insert(pos, f'log.debug("m{i} {r.randint(0, 9)}");')
            else:
                after.insert(pos, javagen.stmt(r))
        methods_b.append(f"void m{i}(int x) {{ {' '.join(stmts)} }}")
        methods_a.append(f"void m{i}(int x) {{ {' '.join(after)} }}")
    b, a = parse_source(wrap(*methods_b)), parse_source(wrap(*methods_a))
    diffs = diff_units(b, a)
    return diffs, build_renaming_set(diffs, b, a)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_sift_partitions_and_is_idempotent(seed):
    diffs, rset = _random_commit(seed)
    first = sift_methods(diffs, rset)
    ids = [d.id for d in first.patch_methods] + [d.id for d, _ in first.sifted_methods]
    assert sorted(ids) == sorted(d.id for d in diffs)
    again = sift_methods(first.patch_methods, rset)
    assert [d.id for d in again.patch_methods] == [d.id for d in first.patch_methods]
    assert again.sifted_methods == []


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_adding_a_related_change_retains(seed):
    diffs, rset = _random_commit(seed)
    related = StatementChange(SC.INSERT, None, parse_statements("checkPathSecurity(x);")[0], (99,))
    for d, _ in sift_methods(diffs, rset).sifted_methods:
        if d.method_change is not MC.MODIFIED:
            continue
        grown = MethodDiff(d.id, d.method_change, d.statement_changes + (related,), d.before, d.after)
        result = sift_methods([grown], rset)
        assert [x.id for x in result.patch_methods] == [d.id]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_empty_renaming_set_never_reports_rename(seed):
    diffs, _ = _random_commit(seed)
    for d in diffs:
        for c in d.statement_changes:
            assert classify_statement(c, RenamingSet()).pattern is not Pattern.RENAME_EQUIVALENT

