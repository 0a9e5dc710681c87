import pytest
from hypothesis import given, strategies as st

from vulnapi.errors import DomainError
from vulnapi.model import (
    CveId,
    LibraryCoordinate,
    MethodId,
    Version,
    VersionRange,
    compare_versions,
    matches,
)

V = Version.parse


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ("3.0.5", "3.0.6", -1),
        ("1.2", "1.2.0", 0),
        ("2.5.6.SEC03", "2.5.6", -1),
        ("2.5.6.SEC02", "2.5.6.SEC03", -1),
        ("2.5.6.sec03", "2.5.6.SEC03", 0),
        ("1.10", "1.9", 1),
        ("1.0-RC1", "1.0", -1),
    ],
)
def test_compare_versions_examples(a, b, expected):
    assert compare_versions(V(a), V(b)) == expected
    assert compare_versions(V(b), V(a)) == -expected


def test_version_keeps_its_spelling():
    assert str(V("1.2.0")) == "1.2.0"
    assert V("1.2.0") == V("1.2")


@pytest.mark.parametrize("bad", ["", "x", ".1", "1..2", "v1.0"])
def test_version_rejects_garbage(bad):
    with pytest.raises(DomainError):
        V(bad)


versions = st.builds(
    lambda segs, q: Version(tuple(segs), q),
    st.lists(st.integers(0, 4), min_size=1, max_size=4),
    st.one_of(st.none(), st.sampled_from(["RC1", "rc1", "SEC02", "SEC03", "beta", "Final"])),
)


@given(versions, versions, versions)
def test_version_order_is_total(a, b, c):
    ab, ba = compare_versions(a, b), compare_versions(b, a)
    assert ab == -ba
    if ab == 0:
        assert a == b and hash(a) == hash(b)
    if ab <= 0 and compare_versions(b, c) <= 0:
        assert compare_versions(a, c) <= 0


@given(st.lists(versions, min_size=1, max_size=8))
def test_sorting_agrees_with_compare(vs):
    out = sorted(vs)
    assert all(compare_versions(x, y) <= 0 for x, y in zip(out, out[1:]))


@pytest.mark.parametrize(
    "rng, v, expected",
    [
        ("≤3.0.5 or <2.5.6.SEC03", "3.0.5", True),
        ("<=3.0.5 || <2.5.6.SEC03", "3.0.6", False),
        ("=1.0", "1.0", True),
        ("≥2.0 and <3.0", "1.9", False),
        (">=2.0 && <3.0", "2.9.9", True),
        (">=3.0.0 && <=3.0.5", "3.0.5", True),
        (">=3.0.0 && <=3.0.5", "3.0.6", False),
        ("1.0", "1.0.0", True),
        (">1.0", "1.0", False),
    ],
)
def test_range_matches(rng, v, expected):
    assert matches(VersionRange.parse(rng), V(v)) is expected


def test_range_text_round_trip():
    r = VersionRange.parse(">=3.0.0 && <=3.0.5 || <2.5.6.SEC03")
    assert VersionRange.parse(str(r)) == r
    assert len(r.disjuncts) == 2


@pytest.mark.parametrize("bad", ["", "  ", ">=", "<= && <2", "~1.0"])
def test_range_rejects_malformed(bad):
    with pytest.raises(DomainError):
        VersionRange.parse(bad)


def test_cve_id_validation():
    assert str(CveId("CVE-2011-2730")) == "CVE-2011-2730"
    for bad in ("CVE-11-2730", "cve-2011-2730", "CVE-2011-27", "GHSA-xxxx"):
        with pytest.raises(DomainError):
            CveId(bad)


def test_coordinate_parse():
    c = LibraryCoordinate.parse("org.springframework:spring-web:3.0.5")
    assert c.ga == ("org.springframework", "spring-web")
    assert str(c) == "org.springframework:spring-web:3.0.5"
    for bad in ("a:b", ":b:1.0", "a::1.0", "a:b:x"):
        with pytest.raises(DomainError):
            LibraryCoordinate.parse(bad)


def test_method_id_text_round_trip():
    for m in (
        MethodId("a.B", "<init>", ()),
        MethodId("a.B$C", "f", ("int", "String[]")),
        MethodId("B", "g", ("Map",)),
    ):
        assert MethodId.parse(str(m)) == m
    with pytest.raises(DomainError):
        MethodId("a.B", "f", ("",))
