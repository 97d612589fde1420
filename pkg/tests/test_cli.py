import csv
import io
import json
import os
import subprocess
import sys

import pytest

from gcsets.cli import main
from gcsets.serialize import dumps

CONIC = {"degree": 2, "nodes": [["1", "1"], ["2", "1/2"], ["4", "1/4"], ["-1", "-1"], ["-2", "-1/2"], ["1/2", "2"]]}


@pytest.fixture
def files(tmp_path):
    def gen(family, degree, seed=0, *extra):
        path = tmp_path / f"{family}-{degree}-{seed}.json"
        assert main(["generate", "--family", family, "--degree", str(degree), "--seed", str(seed),
                     "--out", str(path), *extra]) == 0
        return path
    return gen


def test_generate_analyze_verify_round_trip(files, tmp_path, capsys):
    for family, degree in [("chung-yao", 3), ("carnicer-gasca", 4), ("defect-2", 4), ("defect-3", 5), ("principal", 4)]:
        path = files(family, degree, 1)
        out = tmp_path / "a.json"
        assert main(["analyze", str(path), "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["census"]["total"] > 0 and doc["catalog"]["classes_disjoint"]
        assert main(["verify", str(path), "--out", str(tmp_path / "v.json")]) == 0


def test_spec_examples(files, tmp_path):
    cg4 = files("carnicer-gasca", 4, 0)
    assert main(["verify", str(cg4), "--theorems", "all", "--out", str(tmp_path / "v.json")]) == 0
    pl5 = files("principal", 5)
    assert main(["verify", str(pl5), "--theorems", "thm-7.3", "--out", str(tmp_path / "v.json")]) == 0
    doc = json.loads((tmp_path / "v.json").read_text())
    assert [r["theorem_id"] for r in doc["reports"]] == ["gc", "thm-7.3"]


def test_corrupted_input(tmp_path):
    path = tmp_path / "corrupted.json"
    path.write_text(dumps(CONIC))
    assert main(["analyze", str(path)]) == 4
    out = tmp_path / "v.json"
    assert main(["verify", str(path), "--out", str(out)]) == 1
    gate = json.loads(out.read_text())["reports"][0]
    assert gate["status"] == "fail" and gate["witnesses"]
    assert main(["usage", str(path)]) == 4
    assert main(["export", str(path), "--svg", str(tmp_path / "x.svg")]) == 4


def test_malformed_and_missing_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2


def test_invalid_arguments(files):
    assert main(["generate", "--family", "nope", "--degree", "3"]) == 3
    assert main(["generate", "--family", "defect-3", "--degree", "3"]) == 3
    assert main(["generate", "--family", "principal", "--degree", "3", "--bound", "4"]) == 3
    assert main(["generate", "--family", "principal", "--degree", "3", "--transform", "1,2"]) == 3
    path = files("chung-yao", 3)
    assert main(["verify", str(path), "--theorems", "thm-0.0"]) == 3
    assert main(["usage", str(path), "--line", "0,0,1"]) == 3
    assert main(["export", str(path)]) == 3
    assert main([]) == 3


def test_generation_failed(tmp_path):
    assert main(["generate", "--family", "chung-yao", "--degree", "5", "--bound", "1", "--retries", "1",
                 "--out", str(tmp_path / "x.json")]) == 2


def test_write_failure(files, tmp_path):
    path = files("chung-yao", 3)
    assert main(["export", str(path), "--svg", str(tmp_path / "no" / "such" / "dir.svg")]) == 2


def test_usage_line_and_csv(files, tmp_path, capsys):
    pl5 = files("principal", 5)
    capsys.readouterr()
    assert main(["usage", str(pl5), "--line", "1,0,-1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["users"]) == 10 and rep["class"] == "proper"
    assert main(["usage", str(pl5), "--through", "0,0,1,0"]) == 0
    assert len(json.loads(capsys.readouterr().out)["users"]) == 15
    assert main(["usage", str(pl5), "--through", "0,0,1/3,1/7"]) == 5
    capsys.readouterr()
    assert main(["usage", str(pl5), "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert list(rows[0]) == ["line", "class", "k", "r", "r_hat", "s", "users_count"]
    assert sum(int(r["users_count"]) for r in rows) == 5 * 21


def test_gcn_seed_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("GCN_SEED", "7")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["generate", "--family", "defect-2", "--degree", "4", "--out", str(a)]) == 0
    assert main(["generate", "--family", "defect-2", "--degree", "4", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("GCN_SEED", "x")
    assert main(["generate", "--family", "defect-2", "--degree", "4"]) == 3


def _run(*args, cwd):
    return subprocess.run([sys.executable, "-m", "gcsets.cli", *args], cwd=cwd, capture_output=True,
                          env={**os.environ, "PYTHONHASHSEED": "random"})


def test_byte_identical_across_processes(tmp_path):
    outs = []
    for run in range(2):
        d = tmp_path / str(run)
        d.mkdir()
        assert _run("generate", "--family", "defect-3", "--degree", "5", "--seed", "4", "--out", "x.json",
                    cwd=d).returncode == 0
        assert _run("export", "x.json", "--svg", "x.svg", "--json", "u.json", "--csv", "u.csv",
                    cwd=d).returncode == 0
        assert _run("verify", "x.json", "--out", "v.json", cwd=d).returncode == 0
        outs.append({name: (d / name).read_bytes() for name in ("x.json", "x.svg", "u.json", "u.csv", "v.json")})
    assert outs[0] == outs[1]
