import json

import pytest

from nestfan.cli import main


@pytest.fixture
def files(tmp_path):
    out = {}
    out["bs"] = tmp_path / "b.txt"
    out["bs"].write_text("# blow-up of P2 at a point\n1\n2\n3\n2 3\n1 2 3\n")
    out["p3"] = tmp_path / "p3.json"
    out["p3"].write_text(json.dumps({"ground_set": 4, "sets": [[1], [2], [3], [4], [1, 2, 3, 4]]}))
    out["path"] = tmp_path / "path.txt"
    out["path"].write_text("1 2\n2 3\n3 4\n")
    out["cycle"] = tmp_path / "cycle.json"
    out["cycle"].write_text(json.dumps({"nodes": 4, "edges": [[1, 2], [2, 3], [3, 4], [1, 4]]}))
    out["square"] = tmp_path / "square.txt"
    out["square"].write_text("1 0\n0 1\n-1 0\n0 -1\n")
    out["arrows"] = tmp_path / "arrows.txt"
    out["arrows"].write_text("1 2\n2 3\n3 1\n")
    out["bad"] = tmp_path / "bad.json"
    out["bad"].write_text("{not json")
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def js(capsys, *argv):
    code, cap = run(capsys, *argv)
    assert code == 0, cap.err
    return json.loads(cap.out)


def test_fan_build_and_check(files, capsys, tmp_path):
    fan = js(capsys, "fan", "build", "--building-set", files["bs"])
    assert len(fan["rays"]) == 4
    fan_path = tmp_path / "fan.json"
    fan_path.write_text(json.dumps(fan))
    report = js(capsys, "fan", "check", fan_path)
    assert report["fano"] is True
    png = tmp_path / "fan.png"
    js(capsys, "fan", "build", "--building-set", files["bs"], "--plot", png)
    assert png.read_bytes()[:4] == b"\x89PNG"


def test_fan_build_sources(files, capsys):
    assert js(capsys, "fan", "build", "--graph", files["path"])["dim"] == 3
    assert js(capsys, "fan", "build", "--cubeahedron", files["path"])["dim"] == 4
    assert len(js(capsys, "fan", "build", "--root-system", "B2")["max_cones"]) == 8


def test_classify(files, capsys):
    assert js(capsys, "classify", "graph", files["path"])["weak_fano"] is True
    c = js(capsys, "classify", "graph", files["cycle"])
    assert c["fano"] is False and c["weak_fano"] is True
    assert js(capsys, "classify", "graph", files["cycle"], "--cubeahedron")["weak_fano"] is False
    assert js(capsys, "classify", "building-set", files["bs"])["fano"] is True
    assert js(capsys, "classify", "root-system", "A2")["fano"] is True
    assert js(capsys, "classify", "root-system", "G2")["weak_fano"] is False


def test_polytope_commands(files, capsys, tmp_path):
    chk = js(capsys, "polytope", "check", files["square"])
    assert chk["reflexive"] and chk["smooth_fano"] and chk["pseudo_symmetric"]
    nf = js(capsys, "polytope", "normal-form", files["square"])["normal_form"]
    assert nf.startswith("2:")
    fan = js(capsys, "fan", "build", "--building-set", files["bs"])
    fan_path = tmp_path / "fan.json"
    fan_path.write_text(json.dumps(fan))
    p = js(capsys, "polytope", "from-fan", fan_path)
    assert len(p["vertices"]) == 4


def test_digraph_commands(files, capsys):
    out = js(capsys, "digraph", "polytope", files["arrows"])
    assert out["reflexive"] is True
    r = js(capsys, "digraph", "realize", "--building-set", files["bs"])
    assert r["found"] is True


def test_two_fano(files, capsys):
    assert js(capsys, "check", "two-fano", "--building-set", files["p3"])["two_fano"] is True
    rep = js(capsys, "check", "two-fano", "--building-set", files["bs"])
    assert rep["two_fano"] is False and rep["reason"] == "surface"


def test_enumerate_outputs(capsys, tmp_path):
    out = js(capsys, "enumerate", "table3", "--output-dir", tmp_path)
    assert [r["positive"] for r in out["rows"]] == [1, 1, 2, 3, 6, 11]
    assert (tmp_path / "table3.tsv").read_text().startswith("nodes\t")
    assert (tmp_path / "table3.png").exists()
    code, cap = run(capsys, "enumerate", "table2", "--max-dim", "2", "--format", "text")
    assert code == 0 and cap.out.splitlines()[-1] == "2\t5\t5"


def test_enumerate_budget_exit(capsys):
    code, cap = run(capsys, "enumerate", "table2", "--max-dim", "5")
    assert code == 3 and "extended" in cap.err


def test_cross_validate_cli(capsys, tmp_path):
    res = js(capsys, "cross-validate", "roots≤3", "--output-dir", tmp_path, "--jobs", "1")
    assert res["disagreements"] == []
    assert (tmp_path / "cross_validate_roots_le3.json").exists()


def test_invalid_input_exit(files, capsys):
    code, cap = run(capsys, "classify", "building-set", files["bad"])
    assert code == 2 and "invalid JSON" in cap.err
    code, _ = run(capsys, "classify", "building-set", "/nonexistent")
    assert code == 2
    code, _ = run(capsys, "classify", "root-system", "Q7")
    assert code == 2


def test_text_format(files, capsys):
    code, cap = run(capsys, "--format", "text", "classify", "building-set", files["bs"])
    assert code == 0 and "fano\tTrue" in cap.out
