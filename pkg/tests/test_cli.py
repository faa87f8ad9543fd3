import json
import re
import subprocess
import sys

import pytest

from torik.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert not re.search(r"\d\.\d", out), "decimal float in JSON output"
    return code, json.loads(out)


@pytest.fixture
def stretched(tmp_path):
    path = tmp_path / "stretched.json"
    path.write_text(json.dumps({"dim": 2, "vertices": [[2, 0], [-2, 0], [0, 1], [0, -1]]}))
    return str(path)


@pytest.fixture
def cross(tmp_path):
    path = tmp_path / "cross.json"
    path.write_text(json.dumps({"dim": 2, "vertices": [[1, 0], [-1, 0], [0, 1], [0, -1]]}))
    return str(path)


def test_check(capsys, stretched, tmp_path):
    code, out, _ = run(capsys, "check", "paper:fig2")
    assert code == 0 and "reflexive" in out
    code, data = run_json(capsys, "check", stretched)
    assert code == 1 and not data["reflexive"]
    assert {"normal": [1, 2], "rhs": "-2"} in data["offending_facets"]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "invalid JSON" in err
    code, _, _ = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = run(capsys, "check", "paper:nonsense")
    assert code == 2


def test_check_svg(capsys, tmp_path):
    svg = tmp_path / "fig2.svg"
    code, _, _ = run(capsys, "check", "paper:fig2", "--svg", str(svg))
    text = svg.read_text()
    assert code == 0 and text.startswith("<svg") and text.count("<circle") == 7
    assert not re.search(r"\d\.\d", text)
    code, _, _ = run(capsys, "check", "paper:smooth3fold", "--svg", str(svg))
    assert code == 1


def test_roots(capsys, cross):
    code, out, _ = run(capsys, "roots", "paper:smooth3fold")
    assert code == 0 and out.splitlines()[0] == "2 semisimple, 1 unipotent (0,0,-1)"
    code, out, _ = run(capsys, "roots", cross)
    assert code == 0 and out.strip() == "no roots (Aut reductive torus)"
    code, data = run_json(capsys, "roots", "paper:fig2")
    assert data["roots"] == [{"point": [0, -1], "kind": "unipotent", "facet": data["roots"][0]["facet"]}]


def test_invariants(capsys, tmp_path, stretched):
    code, data = run_json(capsys, "invariants", "paper:fig2")
    assert code == 0 and data["df"] == "2/9" and data["ding"] == "2/9"
    code, data = run_json(capsys, "invariants", "paper:smooth3fold", "--pl", "loewy")
    assert data["df"] == "21/160"
    code, data = run_json(capsys, "invariants", "paper:fig2", "--pl", "socle")
    assert data["df"] == "-2/9" and data["direction"] == "increasing"
    const = tmp_path / "const.json"
    const.write_text(json.dumps({"mode": "min", "pieces": [{"gradient": [0, 0], "offset": "5/2"}]}))
    code, data = run_json(capsys, "invariants", "paper:fig2", "--pl", str(const))
    assert code == 0 and data["df"] == "0" and data["ding"] == "0"
    concave = tmp_path / "concave.json"
    concave.write_text(
        json.dumps({"mode": "min", "pieces": [{"gradient": [0, 0], "offset": 1}, {"gradient": [-2, 0], "offset": 2}]})
    )
    code, _, err = run(capsys, "invariants", "paper:fig2", "--pl", str(concave), "--direction", "inc")
    assert code == 1 and "convex" in err
    code, _, _ = run(capsys, "invariants", stretched, "--pl", str(const))
    assert code == 1
    floaty = tmp_path / "floaty.json"
    floaty.write_text(json.dumps({"mode": "min", "pieces": [{"gradient": [0.5, 0], "offset": 0}]}))
    code, _, _ = run(capsys, "invariants", "paper:fig2", "--pl", str(floaty))
    assert code == 2


def test_loewy_socle(capsys, cross):
    code, out, _ = run(capsys, "loewy-socle", "paper:smooth3fold")
    assert code == 0
    assert "Loewy DF 21/160 > 0: does not destabilize" in out
    assert "Socle DF -21/160: destabilizes" in out
    code, data = run_json(capsys, "loewy-socle", "paper:sing3fold")
    assert data["loewy"]["df"] == "-9/128" and data["socle"]["df"] == "9/128"
    assert data["loewy_df_positive"] is False
    code, out, _ = run(capsys, "loewy-socle", cross)
    assert code == 0 and "filtrations trivial" in out
    code, _, err = run(capsys, "loewy-socle", "paper:degree7-blowup")
    assert code == 1 and "unipotent roots" in err


def test_filtration(capsys, monkeypatch):
    code, data = run_json(capsys, "filtration", "paper:fig2", "--degree", "2", "--engine", "both")
    assert code == 0
    for entry in data["filtrations"].values():
        assert entry["engines_agree"] and entry["derivation"] == entry["closed-form"]
    code, data = run_json(capsys, "filtration", "paper:degree7-blowup", "--degree", "1", "--kind", "loewy")
    assert data["filtrations"]["loewy"]["derivation"] == [8, 6, 3, 1, 0]
    code, data = run_json(capsys, "filtration", "paper:fig2", "--degree", "0")
    assert data["filtrations"] == {"loewy": {"derivation": [1, 0]}, "socle": {"derivation": [1]}}
    code, data = run_json(capsys, "filtration", "paper:vn-example", "--degree", "5", "--kind", "socle")
    assert data["filtrations"]["socle"]["derivation"] == [1, 2, 3, 4, 5, 6]
    monkeypatch.setenv("TORIK_MAX_DEGREE", "2")
    code, _, err = run(capsys, "filtration", "paper:fig2", "--degree", "3")
    assert code == 2 and "TORIK_MAX_DEGREE" in err


def test_fixtures_command(capsys):
    code, out, _ = run(capsys, "fixtures", "list")
    assert code == 0 and len(out.strip().splitlines()) >= 5
    code, out, _ = run(capsys, "fixtures", "run", "paper:fig2")
    assert code == 0 and out.startswith("PASS paper:fig2")
    code, data = run_json(capsys, "fixtures", "run")
    assert code == 0 and all(v["passed"] for v in data.values())


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["filtration", "paper:fig2"])
    assert exc.value.code == 2


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "torik.cli", "roots", "paper:fig2"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and "1 unipotent (0,-1)" in res.stdout
