import json
import shutil
import subprocess
import sys

import pytest

from vulnapi.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _build(corpus, out, *extra):
    return main([
        "build-db", "--advisories", str(corpus / "advisories.jsonl"), "--libs", str(corpus / "libs"),
        "--commits", str(corpus / "commits"), "--out", str(out), *extra,
    ])


def test_wilson_text(capsys):
    assert run(capsys, "wilson", "45", "298") == (0, "15.10% [11.48%, 19.61%]\n", "")
    assert run(capsys, "wilson", "0", "10")[1] == "0.00% [0.00%, 27.75%]\n"


def test_wilson_json(capsys):
    code, out, _ = run(capsys, "wilson", "5", "509", "--format", "json")
    data = json.loads(out)
    assert code == 0 and round(data["low"] * 100, 2) == 0.42 and round(data["high"] * 100, 2) == 2.28


def test_wilson_domain_error_exit_2(capsys):
    code, _, err = run(capsys, "wilson", "1", "0")
    assert code == 2 and "sample size" in err


def test_usage_error_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "wilson", "x", "3")[0] == 2


def test_build_db_matches_golden(corpus, tmp_path, capsys):
    out = tmp_path / "db.jsonl"
    assert _build(corpus, out) == 0
    assert out.read_bytes() == (corpus / "golden_db.jsonl").read_bytes()
    text = capsys.readouterr().out
    assert "excluded_all_discarded: 1" in text and "db_entries: 30" in text


def test_build_db_parallel_is_identical(corpus, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert _build(corpus, a, "--workers", "1") == 0
    assert _build(corpus, b, "--workers", "3") == 0
    assert a.read_bytes() == b.read_bytes()


def test_build_db_reports(corpus, tmp_path):
    report, sift = tmp_path / "report.json", tmp_path / "sift.json"
    cg = tmp_path / "cg"
    assert _build(corpus, tmp_path / "db.jsonl", "--report", str(report), "--sift-report", str(sift), "--dump-cg", str(cg)) == 0
    by_cve = {r["cve"]: r for r in json.loads(report.read_text())}
    assert by_cve["CVE-2021-10003"]["status"] == "all-discarded"
    spring = by_cve["CVE-2011-2730"]["roots"]
    assert any("evaluate(" in m for m in spring["Augmented"])
    reasons = by_cve["CVE-2020-10002"]["localization"]["discarded"]
    assert sorted(reasons.values()) == ["absent-from-both-versions", "not-in-version-diff", "only-in-vulnerable-version"]
    assert json.loads(sift.read_text())
    assert sorted(p.name for p in cg.iterdir())


def test_build_db_empty_advisories(corpus, tmp_path, capsys):
    adv = tmp_path / "adv.jsonl"
    adv.write_text("")
    out = tmp_path / "db.jsonl"
    code = main(["build-db", "--advisories", str(adv), "--libs", str(corpus / "libs"), "--commits", str(corpus / "commits"), "--out", str(out)])
    assert code == 0 and out.read_text() == ""


def test_build_db_missing_store_exit_2(corpus, tmp_path, capsys):
    code = main(["build-db", "--advisories", str(corpus / "advisories.jsonl"), "--libs", str(tmp_path / "none"),
                 "--commits", str(corpus / "commits"), "--out", str(tmp_path / "db.jsonl")])
    assert code == 2 and "library store" in capsys.readouterr().err


def test_build_db_missing_commit_exit_2(corpus, tmp_path, capsys):
    commits = tmp_path / "commits"
    shutil.copytree(corpus / "commits", commits)
    shutil.rmtree(commits / "fastjson-autotype")
    code = main(["build-db", "--advisories", str(corpus / "advisories.jsonl"), "--libs", str(corpus / "libs"),
                 "--commits", str(commits), "--out", str(tmp_path / "db.jsonl")])
    assert code == 2


def test_stats(corpus, capsys):
    db = str(corpus / "golden_db.jsonl")
    assert run(capsys, "stats", "--db", db, "--mode", "once") == (0, "20\n", "")
    assert run(capsys, "stats", "--db", db, "--mode", "multi")[1] == "30\n"
    code, out, _ = run(capsys, "stats", "--db", db)
    assert code == 0 and out.splitlines()[-1].split()[:5] == ["total", "5", "3", "20", "30"]


def test_scan_exit_codes(corpus, capsys):
    db, libs = str(corpus / "golden_db.jsonl"), str(corpus / "libs")
    code, out, _ = run(capsys, "scan", str(corpus / "projects/app-a"), "--db", db, "--libs", libs)
    assert code == 1 and "VulnerableApisInvoked" in out
    code, out, _ = run(capsys, "scan", str(corpus / "projects/app-b"), "--db", db, "--libs", libs, "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "VulnerableDepsNotInvoked"
    assert run(capsys, "scan", str(corpus / "projects/none"), "--db", db, "--libs", libs)[0] == 2


def test_diff_and_sift(corpus, capsys):
    pair = corpus / "commits/fileutil-traversal"
    before = str(pair / "before/org/example/fileutil/FileUtils.java")
    after = str(pair / "after/org/example/fileutil/FileUtils.java")
    code, out, _ = run(capsys, "diff", before, after)
    assert code == 0 and out.startswith(("Modified", "Inserted", "Deleted"))
    code, out, _ = run(capsys, "sift", before, after, "--format", "json")
    data = json.loads(out)
    assert code == 0 and {"patch_methods", "sifted_methods", "renaming_set"} <= set(data)
    code, out, _ = run(capsys, "diff", "-", after, "--dump-ast", "--format", "json")
    assert code == 0 and json.loads(out)["ast"]["before"] is None
    assert run(capsys, "diff", "-", "-")[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "vulnapi.cli", "wilson", "386", "26720"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1.44% [1.31%, 1.59%]\n"


@pytest.mark.parametrize("argv", [["--workers", "0", "wilson", "1", "2"], ["wilson", "1", "2", "--workers", "0"]])
def test_bad_worker_count(capsys, argv):
    assert run(capsys, *argv)[0] == 2
