import json

import pytest

from conftest import FIXTURES
from wgraph_algebra.cli import main


def test_build_omega_i2(capsys):
    assert main(["build-omega", "--type", "I2", "--m", "3", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["dim_semisimple"] == 6 and out["schema"] == 1


def test_build_omega_a3_bundle(tmp_path, capsys):
    assert main(["build-omega", "--type", "A3", "--out-dir", str(tmp_path)]) == 0
    assert "dim_semisimple: 24" in capsys.readouterr().out
    bundle = json.loads((tmp_path / "omega_A3.json").read_text(encoding="utf-8"))
    assert bundle["dim"] == 204


@pytest.mark.parametrize("t", ["F4", "H3", "B4", "D4"])
def test_out_of_scope_types_export_graphs(t, tmp_path):
    assert main(["build-omega", "--type", t, "--out-dir", str(tmp_path)]) == 3
    assert (tmp_path / f"compat_{t}.dot").exists()


def test_usage_errors(capsys):
    assert main(["build-omega", "--type", "E9"]) == 2
    assert main(["build-omega", "--type", "I2"]) == 2  # missing --m
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_verify_wgraph(capsys):
    assert main(["verify-wgraph", str(FIXTURES / "trivial_A3.json")]) == 0
    assert main(["verify-wgraph", str(FIXTURES / "i2_5_lambda1.json")]) == 0
    assert main(["verify-wgraph", str(FIXTURES / "i2_5_condition1_violation.json"), "--format", "json"]) == 1
    out = capsys.readouterr().out
    report = json.loads(out[out.index("{"):])
    assert report["checks"][0]["detail"]["offending"] == [["x", "y", "2"]]


def test_verify_conjecture_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify-conjecture", "--type", "I2(7)", "--report", str(a)]) == 0
    assert main(["verify-conjecture", "--type", "I2(7)", "--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text(encoding="utf-8"))
    assert rep["ok"] and rep["data"]["field"] == {"name": "Q(2cos(pi/7))", "degree": 3}


def test_verify_conjecture_b3(tmp_path):
    path = tmp_path / "b3.json"
    assert main(["verify-conjecture", "--type", "B3", "--report", str(path)]) == 0
    rep = json.loads(path.read_text(encoding="utf-8"))
    names = {c["name"]: c["pass"] for c in rep["checks"]}
    assert names["denominators: only powers of 2"]


def test_verify_conjecture_unsupported():
    assert main(["verify-conjecture", "--type", "H3"]) == 3


def test_export_graph(tmp_path, capsys):
    assert main(["export-graph", "--type", "A4", "--out-dir", str(tmp_path)]) == 0
    refined = json.loads((tmp_path / "refined_A4.json").read_text(encoding="utf-8"))
    comp = [v[1] for v in refined["vertices"] if v[0] == "(3,1^2)"]
    assert sorted(comp) == ["12", "13", "14", "23", "24", "34"]
    assert main(["export-graph", "--type", "I2(6)", "--out-dir", str(tmp_path)]) == 0
    dot = (tmp_path / "refined_I26.dot").read_text(encoding="utf-8")
    assert 'label="eps1"' in dot and 'label="eps2"' in dot
