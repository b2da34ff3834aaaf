import json
from pathlib import Path

import pytest

from cli import run


def _json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == 0 else out)


def test_filling(capsys):
    code, payload = _json(capsys, ["filling", "--n", "3", "--lambda", "2,1,-1"])
    assert code == 0
    assert payload["ell"] == "2/3"
    assert {(e["i"], e["j"]): e["value"] for e in payload["entries"]} == {
        (1, 2): "1/2", (1, 3): "5/6", (2, 3): "5/6"}


@pytest.mark.parametrize("argv", [
    ["filling", "--n", "3"],
    ["filling", "--lambda", "2,1,-1"],
    ["filling", "--n", "3", "--lambda", "1,2,0"],
    ["filling", "--n", "3", "--P", "1", "--lambda", "1,0,-1"],
    ["polytope", "--n", "3", "--vertices"],
    ["polytope", "--n", "3", "--P", "1", "--chart", "string"],
    ["conjecture", "--n", "3"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == 2


def test_polytope_vertices(capsys):
    code, payload = _json(capsys, ["polytope", "--n", "3", "--chart", "string", "--lambda", "2,1,-1", "--vertices"])
    assert code == 0
    assert len(payload["inequalities"]) == 6
    assert len(payload["vertices"]) == 7
    assert {"point": ["0", "0", "0"], "weight": ["-1", "1", "2"]} in payload["vertices"]
    assert {"point": ["1", "2", "0"], "weight": ["1", "0", "1"]} in payload["distinguished"]
    assert len(payload["distinguished"]) == 2


def test_coordchange(capsys):
    code, payload = _json(capsys, ["coordchange", "--n", "3"])
    assert code == 0
    assert payload["word"] == [1, 2, 1]
    assert payload["m"] == ["z3", "z1", "z2/z1"]


def test_quiver_dot(capsys):
    assert run(["quiver", "--n", "2", "--m", "2", "--d", "4,1", "--dot"]) == 0
    assert capsys.readouterr().out.startswith("digraph quiver {")


def test_quiver_json_reports_critical_point(capsys):
    code, payload = _json(capsys, ["quiver", "--n", "2", "--m", "2", "--d", "4,1"])
    assert code == 0
    assert payload["critical"]["satisfied"] is True
    assert payload["superpotential"] == "4"


def test_conjecture(capsys):
    code, payload = _json(capsys, ["conjecture", "--n", "3", "--trials", "3", "--seed", "1"])
    assert code == 0
    assert payload["holds"] == 3
    assert payload["failures"] == []


def test_toeplitz(capsys):
    code, payload = _json(capsys, ["toeplitz", "--n", "2", "--lambda", "3,1"])
    assert code == 0
    assert payload["matches_filling"] is True
    assert payload["witness"]["report"]["is_toeplitz"] is True


def test_toeplitz_help_names_the_witness_limit(capsys):
    assert run(["toeplitz", "--help"]) == 0
    assert "n<=3" in capsys.readouterr().out


@pytest.mark.parametrize("name", ["intro", "dim3", "tables"])
def test_reproduce(capsys, name):
    code = run(["reproduce", name])
    out = capsys.readouterr().out
    assert "[FAIL]" not in out
    assert f"[RESULT] {name}:" in out
    assert code == 0


@pytest.mark.slow
@pytest.mark.parametrize("name", ["dim4", "f256"])
def test_reproduce_large(capsys, name):
    assert run(["reproduce", name]) == 0
    assert "[FAIL]" not in capsys.readouterr().out


def test_reproduce_unknown_set(capsys):
    assert run(["reproduce", "nothing"]) == 2


def test_reproduce_reports_failures(tmp_path, capsys):
    (tmp_path / "mine.txt").write_text("CASE: kind=filling n=3 lambda=2,1,-1\nEXPECT ell: 1\nEXPECT n[1,2]: 1/2\n")
    assert run(["reproduce", "mine", "--cases", str(tmp_path)]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] filling n=3 lambda=2,1,-1: ell" in out
    assert "[PASS] filling n=3 lambda=2,1,-1: n[1,2]" in out
    assert "[RESULT] mine: 1/2 passed" in out


def test_reproduce_unknown_kind(tmp_path, capsys):
    (tmp_path / "odd.txt").write_text("CASE: kind=mystery n=3\nEXPECT x: 1\n")
    assert run(["reproduce", "odd", "--cases", str(tmp_path)]) == 2


def test_requirements_pin_only_the_toolkit_stack():
    lines = (Path(__file__).resolve().parent.parent / "requirements.txt").read_text().split()
    assert sorted(line.split("==")[0] for line in lines) == ["networkx", "numpy", "pytest", "scipy", "sympy"]
