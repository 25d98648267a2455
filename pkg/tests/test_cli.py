import csv
import subprocess
import sys
import io
import json

import pytest

from conftest import e2
from stepdet import generate, save_instance
from stepdet.cli import main
from stepdet.generator import GeneratorConfig


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def e2_file(tmp_path):
    path = tmp_path / "e2.json"
    save_instance(e2(), path)
    return path


def test_solve_alg(capsys, e2_file):
    code, out, _ = call(capsys, "solve", "--alg", "CA_PS", e2_file)
    assert code == 0
    assert json.loads(out) == {"algorithm": "CA_PS", "sequence": [1, 2], "Z": 0}


def test_solve_wspt(capsys, e2_file):
    code, out, _ = call(capsys, "solve", "--alg", "WSPT", e2_file)
    assert json.loads(out)["Z"] == 5


def test_solve_exact(capsys, e2_file):
    for method in ("bnb", "brute-force"):
        code, out, _ = call(capsys, "solve", "--exact", "--method", method, "--check-model", e2_file)
        data = json.loads(out)
        assert code == 0 and data["Z*"] == 0 and data["sequence"] == [1, 2]
        assert data["model_check"]["ok"]


def test_solve_exact_too_large(capsys, tmp_path):
    path = tmp_path / "big.json"
    save_instance(generate(GeneratorConfig(1000, seed=1)), path)
    code, out, err = call(capsys, "solve", "--exact", path)
    assert code == 2 and out == ""
    assert "TooLarge" in err


def test_usage_errors(capsys, e2_file):
    assert call(capsys, "solve", "--bogus", e2_file)[0] == 1
    assert call(capsys, "solve", "--alg", "NOPE", e2_file)[0] == 1
    assert call(capsys)[0] == 1
    assert call(capsys, "gen")[0] == 1


def test_missing_file(capsys, tmp_path):
    code, out, err = call(capsys, "solve", tmp_path / "absent.json")
    assert code == 2 and out == "" and err


def test_gen_then_solve_deterministic(capsys, tmp_path):
    path = tmp_path / "i.json"
    args = ["gen", "--n", 8, "--h-class", "H2", "--t-factor", 0.6, "--r", 0.4, "--seed", 7, "--out", path]
    assert call(capsys, *args)[0] == 0
    first = path.read_bytes()
    z1 = json.loads(call(capsys, "solve", "--alg", "EDD", path)[1])["Z"]
    assert call(capsys, *args)[0] == 0
    assert path.read_bytes() == first
    z2 = json.loads(call(capsys, "solve", "--alg", "EDD", path)[1])["Z"]
    assert z1 == z2


def test_gen_stdout(capsys):
    code, out, _ = call(capsys, "gen", "--n", 5, "--seed", 3)
    assert code == 0 and json.loads(out)["n"] == 5


def test_gen_suite(capsys, tmp_path):
    code, out, _ = call(capsys, "gen", "suite", "--sizes", 8, "--replicates", 1, "--out-dir", tmp_path / "s")
    assert code == 0 and json.loads(out)["instances"] == 75
    assert len(list((tmp_path / "s").glob("*.json"))) == 75


def test_export_lp(capsys, e2_file, tmp_path):
    code, out, _ = call(capsys, "export-lp", e2_file)
    assert code == 0 and out.startswith("\\") and "13 y_1_2" in out
    assert call(capsys, "export-lp", e2_file, "--out", tmp_path / "m.lp")[0] == 0
    assert (tmp_path / "m.lp").read_text() == out


def test_bench_and_report(capsys, tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"algorithms": ["EDD", "CA", "CA_PS"], "suite": {"sizes": [8], "replicates": 1},
                                "timings": False}))
    code, out, _ = call(capsys, "bench", "--plan", plan, "--out-dir", tmp_path / "o")
    assert code == 0
    table = list(csv.DictReader(io.StringIO(out)))
    assert {r["algorithm"] for r in table} == {"EDD", "CA", "CA_PS"}
    code, out2, _ = call(capsys, "report", tmp_path / "o" / "raw.csv", "--out-dir", tmp_path / "r")
    assert code == 0 and out2 == out
    assert (tmp_path / "r" / "table.csv").exists()


def test_bench_kappa_sweep(capsys, tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"algorithms": ["CA"], "suite": {"sizes": [8], "replicates": 1},
                                "kappas": [0.5, 1.0]}))
    code, out, _ = call(capsys, "bench", "--plan", plan, "--kappa-sweep")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert sum(r["is_argmin"] == "True" for r in rows) == 1


def test_bench_bad_plan(capsys, tmp_path):
    plan = tmp_path / "plan.json"
    plan.write_text(json.dumps({"nonsense": 1}))
    assert call(capsys, "bench", "--plan", plan)[0] == 2


def test_module_entry_streams(e2_file):
    proc = subprocess.run([sys.executable, "-m", "stepdet", "-v", "solve", "--alg", "EDD", str(e2_file)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"algorithm": "EDD", "sequence": [1, 2], "Z": 0}
