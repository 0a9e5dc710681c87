"""Vulnerable-API extraction from patch commits and usage scanning for Java libraries."""

from .callgraph import CallGraph, RootMethodSet, VulnApiSet, augment_roots, backward_reachable, build_call_graph, collect_roots
from .errors import AllDiscarded, DomainError, DuplicateEntry, IngestError, MissingVersion, ParseError, SchemaError, VapiError
from .frontend import MethodRecord, SourceTree, extract_methods, normalize_and_hash
from .localize import LocalizationResult, localize, version_diff_methods
from .model import CveId, LibraryCoordinate, MethodId, Version, VersionRange, compare_versions, matches
from .sift import RenamingSet, build_renaming_set, classify_statement, sift_methods
from .treediff import MethodDiff, StatementChange, diff_units
from .vulndb import DbEntry, VulnDatabase, build_database, count_apis, ground_truth_sample, wilson_interval

__all__ = [
    "AllDiscarded", "CallGraph", "CveId", "DbEntry", "DomainError", "DuplicateEntry", "IngestError",
    "LibraryCoordinate", "LocalizationResult", "MethodDiff", "MethodId", "MethodRecord", "MissingVersion",
    "ParseError", "RenamingSet", "RootMethodSet", "SchemaError", "SourceTree", "StatementChange", "VapiError",
    "Version", "VersionRange", "VulnApiSet", "VulnDatabase", "augment_roots", "backward_reachable",
    "build_call_graph", "build_database", "build_renaming_set", "classify_statement", "collect_roots",
    "compare_versions", "count_apis", "diff_units", "extract_methods", "ground_truth_sample", "localize",
    "matches", "normalize_and_hash", "sift_methods", "version_diff_methods", "wilson_interval",
]
