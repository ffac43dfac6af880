from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ctrf.cli import main
from ctrf.spaces import get_space, space_names


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    return code, json.loads(out) if out.strip() else None


def test_period(capsys):
    code, doc = run_json(capsys, "period", "ab")
    assert code == 0 and doc["p0"] == 2 and doc["blocks"] == ["ab", "ba"]
    assert doc["oracle_agrees"]
    code, doc = run_json(capsys, "period", "0")
    assert code == 0 and doc["p0"] == 0 and doc["blocks"] == []
    code, out, err = run(capsys, "period", "abx")
    assert code == 2 and out == "" and "abx" in err


def test_dist(capsys):
    assert run_json(capsys, "dist", "a", "b")[1]["rho"] == "1/2^0"
    code, doc = run_json(capsys, "dist", "aa", "ab")
    assert code == 0 and doc["rho"] == "3/2^2" and doc["meet"] == "a"
    assert [e["weight"] for e in doc["edges"]] == ["1/2^1", "1/2^2"]
    assert run_json(capsys, "dist", "abab", "abab")[1]["rho"] == "0"
    code, out, _ = run(capsys, "dist", "aa", "ab")
    assert "3/2^2" in out and "0.75" in out
    assert run(capsys, "dist", "a", "c")[0] == 2


def test_verify_contraction_passes(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, doc = run_json(capsys, "verify", "contraction", "--max-len", "4", "--report", str(report))
    assert code == 0 and doc["passed"] and doc["max_ratio"] == {"num": 3, "den": 4}
    saved = json.loads(report.read_text())
    assert saved["factor"] == "3/4" and saved["pairs_checked"] == 31 * 30 // 2
    assert doc["spot_check"]["failures"] == []


def test_verify_contraction_failure_writes_report(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "contraction", "--max-len", "1", "--factor", "1/2",
                       "--report", str(report))
    assert code == 1 and "FAIL" in out
    saved = json.loads(report.read_text())
    assert not saved["passed"] and saved["witnesses"] == [["a", "b"]]


def test_verify_lipschitz_and_no_fixed_point(capsys):
    code, doc = run_json(capsys, "verify", "lipschitz", "--max-len", "5")
    assert code == 0 and doc["max_ratio"] == {"num": 1, "den": 1}
    code, doc = run_json(capsys, "verify", "no-fixed-point", "--max-len", "4", "--max-comp", "3")
    assert code == 0 and doc["passed"]
    assert len(doc["certificates"]) == 14 and all(c["verified"] for c in doc["certificates"])


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "contraction", "--max-len", "0"],
        ["verify", "contraction", "--factor", "3"],
        ["verify", "contraction", "--factor", "0/4"],
        ["verify", "contraction", "--jobs", "0"],
        ["verify", "lipschitz", "--max-len", "2", "--factor", "1/2"],
        ["verify", "bogus"],
        ["export-tree", "--depth", "0"],
        ["export-tree", "--depth", "13"],
        ["export-tree", "--format", "svg"],
        ["solve", "--space", "nowhere"],
        ["solve", "--space", "unit-interval-reflection-pair", "--gamma", "1.5"],
        ["solve", "--space", "unit-interval-reflection-pair", "--eps", "0"],
        ["solve", "--space", "unit-interval-reflection-pair", "--x0", "abc"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_workers_from_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("CTRF_WORKERS", "4")
    assert run(capsys, "verify", "contraction", "--max-len", "6", "--report", str(tmp_path / "a"))[0] == 0
    monkeypatch.setenv("CTRF_WORKERS", "1")
    assert run(capsys, "verify", "contraction", "--max-len", "6", "--report", str(tmp_path / "b"))[0] == 0
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
    monkeypatch.setenv("CTRF_WORKERS", "lots")
    assert run(capsys, "verify", "contraction", "--max-len", "2")[0] == 2
    # an explicit --jobs wins over a bad environment value
    assert run(capsys, "verify", "contraction", "--max-len", "2", "--jobs", "2")[0] == 0


def test_solve_reflection_pair(capsys, tmp_path):
    trace = tmp_path / "t.json"
    code, doc = run_json(capsys, "solve", "--space", "unit-interval-reflection-pair", "--gamma", "0.5",
                         "--eps", "1e-9", "--x0", "0", "--trace", str(trace))
    assert code == 0 and abs(doc["point"] - 0.5) <= 1e-9
    saved = json.loads(trace.read_text())
    assert saved["outcome"]["status"] == "converged"
    assert {it["action"] for it in saved["iterates"]} <= {"T-step", "S-step", "restart", "banach-step"}


def test_solve_affine_and_three_maps(capsys):
    code, doc = run_json(capsys, "solve", "--space", "real-line-affine", "--x0", "0")
    assert code == 0 and abs(doc["point"] - 2) <= 2e-9
    code, doc = run_json(capsys, "solve", "--space", "unit-interval-three-contractions", "--eps", "1e-4")
    assert code == 0 and doc["recheck"] and abs(doc["point"] - 0.5) < 1e-3
    assert all(dv <= 1e-4 for dv in doc["displacements"])


def _table(tmp_path, maps, gamma=0.5):
    path = tmp_path / "space.json"
    path.write_text(json.dumps({"points": [0, 1, 2], "gamma": gamma, "maps": maps}))
    return f"finite-table:{path}"


def test_solve_finite_table(capsys, tmp_path):
    name = _table(tmp_path, {"S": [0, 0, 0], "T": [0, 0, 1]})
    code, doc = run_json(capsys, "solve", "--space", name)
    assert code == 0 and doc["point"] == 0


def test_solve_failure_exit_one(capsys, tmp_path):
    name = _table(tmp_path, {"S": [0, 0, 0], "T": [2, 2, 2]})
    trace = tmp_path / "t.json"
    code, doc = run_json(capsys, "solve", "--space", name, "--trace", str(trace))
    assert code == 1 and doc["error"] == "NoCommonFixedPoint"
    assert json.loads(trace.read_text())["outcome"]["status"] == "failed"
    bad = _table(tmp_path, {"S": [0, 0, 3]})
    assert run(capsys, "solve", "--space", bad)[0] == 2


def test_export_tree(capsys, tmp_path):
    code, out, _ = run(capsys, "export-tree", "--depth", "2")
    assert code == 0 and out.startswith("digraph")
    assert '"a" -> "ab" [label="1/2^2"];' in out
    code, doc = run_json(capsys, "export-tree", "--depth", "1")
    assert doc["document"].count("->") == 2
    dest = tmp_path / "tree.dot"
    assert run(capsys, "export-tree", "--depth", "3", "--output", str(dest))[1] == ""
    assert dest.read_text().count("->") == 14


def test_json_output_is_byte_identical(capsys):
    first = run(capsys, "--json", "--seed", "7", "verify", "contraction", "--max-len", "5")[1]
    second = run(capsys, "--json", "--seed", "7", "verify", "contraction", "--max-len", "5")[1]
    assert first == second
    a = run(capsys, "--json", "solve", "--space", "unit-interval-reflection-pair", "--x0", "0.1")[1]
    b = run(capsys, "--json", "solve", "--space", "unit-interval-reflection-pair", "--x0", "0.1")[1]
    assert a == b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ctrf", "--json", "dist", "aa", "ab"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["rho"] == "3/2^2"


def test_space_registry():
    assert "finite-table:<file>" in space_names()
    ex = get_space("unit-interval-reflection-pair")
    assert ex.kind == "pair" and ex.answer == 0.5
    with pytest.raises(KeyError):
        get_space("nope")
