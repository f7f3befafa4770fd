import json
import subprocess
import sys

import pytest

from hyperconv.cli import run


def test_regions_example(capsys):
    assert run(["regions", "--vandermonde", "1,2,3,4", "--k", "1", "--polarize", "left:0"]) == 0
    out = capsys.readouterr().out
    assert "|P|=4" in out and "dots {0}" in out


def test_regions_json_is_deterministic(capsys):
    argv = ["regions", "--n", "4", "--k", "2", "--side", "right", "--json"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first
    data = json.loads(first)
    assert data["counts"]["P"] == 6 and data["side"] == "right"
    assert [r["alpha"] for r in data["regions"]] == sorted(r["alpha"] for r in data["regions"])


def test_verify_iso_example(capsys):
    assert run(["verify-iso", "--n", "4", "--k", "2", "--side", "left", "--window", "4"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_export_quiver_example(tmp_path):
    out = tmp_path / "q.dot"
    assert run(["export-quiver", "--n", "2", "--k", "1", "--variant", "left", "--out", str(out)]) == 0
    text = out.read_text()
    edges = [line for line in text.splitlines() if "->" in line]
    assert text.count("[label=\"{") == 2 and len(edges) == 6
    assert sum(1 for e in edges if "U" in e) == 4
    run(["export-quiver", "--n", "2", "--k", "1", "--variant", "left", "--out", str(tmp_path / "r.dot")])
    assert (tmp_path / "r.dot").read_bytes() == out.read_bytes()


def test_malformed_json_gives_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"A": [[1], [1]],\n "w": [1, 2')
    assert run(["regions", "--input", str(bad)]) == 2
    assert "line 2 column" in capsys.readouterr().err


def test_bad_entry_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"A": [[1], [True]], "w": [1, 2]}))
    assert run(["regions", "--input", str(bad)]) == 2
    assert "A[1][0]" in capsys.readouterr().err


def test_failed_check_gives_exit_one(monkeypatch, capsys):
    from hyperconv import osz

    def broken(spec, window):
        return osz.IsoReport(spec, window, {"graded ranks agree without torsion": [("x", "y", (0,))]})

    monkeypatch.setattr(osz, "verify_isomorphism", broken)
    assert run(["verify-iso", "--n", "3", "--k", "1", "--json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["pass"] is False
    assert data["results"]["graded ranks agree without torsion"]["witness"]


def test_non_cyclic_input_is_accepted(tmp_path):
    src = tmp_path / "v.json"
    run(["dualize", "--n", "3", "--k", "1", "--side", "left", "--out", str(src)])
    assert run(["verify-altgale", "--input", str(src)]) == 0


def test_cap_on_n(monkeypatch, capsys):
    monkeypatch.setenv("HYPERCONV_MAX_N", "3")
    assert run(["regions", "--n", "4", "--k", "1"]) == 2
    assert "HYPERCONV_MAX_N" in capsys.readouterr().err


def test_unknown_verb_is_input_error():
    assert run(["frobnicate"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["center", "--n", "2", "--k", "1", "--bound", "4"],
        ["verify-fk", "--n", "3", "--k", "0"],
        ["verify-delrest", "--n", "3", "--k", "1", "--i", "2"],
        ["verify-altgale", "--n", "4", "--k", "2", "--side", "right"],
        ["algebra-ranks", "--n", "3", "--k", "1", "--algebra", "atilde", "--window", "2"],
    ],
)
def test_verbs_pass(argv, capsys):
    assert run(argv + ["--json"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True


def test_arrangement_transformers(tmp_path, capsys):
    for verb in ("delete", "restrict", "signed-restrict"):
        out = tmp_path / f"{verb}.json"
        assert run([verb, "--n", "4", "--k", "2", "--side", "left", "--i", "1", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["n"] == 3
    assert run(["delete", "--n", "4", "--k", "2", "--i", "9"]) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hyperconv", "regions", "--n", "2", "--k", "1"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "|P|=2" in proc.stdout
