import io
import json
import subprocess
import sys

import pytest

from qcdense.cli import run
from qcdense.finite import format_element_set, parse_element_set, parse_group


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text.strip() else None)


def test_hull():
    code, rep = call("hull", "--group", "Z4", "--set", "(1)")
    assert code == 0
    assert rep["result"]["hull"] == "(0),(1),(3)"
    assert rep["conventions"]["T_plus"].startswith("closed")


def test_dense_violated_has_counterexample():
    code, rep = call("dense", "--group", "Z8", "--set", "(0),(1),(2)")
    assert code == 1
    assert rep["result"]["counterexample"] is not None


def test_dense_exact_has_certificates():
    code, rep = call("dense", "--group", "Z8", "--set", "(0),(1),(2),(3)")
    assert code == 0 and len(rep["certificates"]) == 7


def test_dense_model_reports_bound():
    code, rep = call("dense", "--model", "T", "--set", "1/2,1/4,1/6", "--char-bound", "3")
    assert code == 0 and rep["bound"]
    code, rep = call("dense", "--model", "T", "--set", "1/3", "--char-bound", "3")
    assert code == 1


def test_witness_torus():
    code, rep = call("witness", "torus", "--seq-len", "1000", "--char-bound", "1000")
    assert code == 0 and len(rep["certificates"]) == 2000
    assert "up to character bound 1000" in rep["result"]["label"]


def test_witness_other_kinds():
    assert call("witness", "zp", "--prime", "3", "--levels", "3")[0] == 0
    assert call("witness", "qhat", "--height", "8", "--seq-len", "8", "--prime-max", "7", "--levels", "3")[0] == 0
    assert call("witness", "qhat", "--height", "8", "--seq-len", "3", "--prime-max", "7", "--levels", "3")[0] == 2
    assert call("witness", "fan", "--model", "prod(T,Zp(2))", "--seq-len", "6", "--char-bound", "6", "--levels", "2")[0] == 0


def test_group_commands():
    assert call("polar", "--group", "Z4", "--set", "(1)")[1]["result"]["polar_right"] == "(0),(1),(3)"
    assert call("wset", "--group", "Z8", "--set", "(1)", "--arc", "1/8")[1]["result"]["w_set"] == "(0)"
    assert call("sumset", "--group", "Z8", "--set", "(1)", "--n", "3")[1]["result"]["sumset"] == "(0),(1),(2),(3)"
    code, rep = call("min-sumset", "--group", "Z8", "--set", "(1)", "--arc", "1/8")
    assert code == 0 and rep["result"]["n"] == 3
    code, rep = call("fan", "--factor", "Z4", "--set", "(1),(2)", "--factor", "Z3", "--set", "(1)")
    assert code == 0
    code, rep = call("three-space", "--hom", '{"source":"Z4","target":"Z2","matrix":[[1]]}', "--set", "(1),(2)")
    assert code == 0
    assert call("near-char", "--group", "Z4", "--set", "(2)")[0] == 0
    assert call("determine", "--group", "Z12", "--set", "(6)")[0] == 1
    assert call("determine", "--group", "Z12", "--set", "(1)")[0] == 0
    assert call("build-seq", "--group", "Z8xZ9")[0] == 0
    code, rep = call("search", "min-dense", "--group", "Z4")
    assert code == 0 and rep["result"]["size"] == 2


def test_usage_errors():
    assert call("hull", "--group", "Q4", "--set", "(1)")[0] == 2
    assert call("hull", "--group", "Z4", "--set", "(1,2)")[0] == 2
    assert call("wset", "--group", "Z4", "--set", "(1)")[0] == 2
    assert call("search", "min-dense", "--group", "Z5xZ5")[0] == 2
    assert call("hull", "--group", "Z2x" * 29 + "Z2", "--set", "(" + ",".join("0" * 30) + ")")[0] == 2
    assert run(["nosuch"], io.StringIO()) == 2


def test_experiment_csv(tmp_path):
    path = tmp_path / "out.csv"
    code, rep = call("experiment", "theorem1", "--dim", "2", "--set", "(1/6,0),(0,1/10)", "--arc", "1/4",
                     "--schedule", "10,100", "--csv", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "M,count,fraction" and len(lines) == 3
    assert rep["result"]["rows"][0]["count"] == int(lines[1].split(",")[1])


@pytest.mark.parametrize(
    "argv",
    [
        ["hull", "--group", "Z2xZ4", "--set", "(1,3),(0,1)"],
        ["near-char", "--group", "Z6", "--set", "(4),(2)"],
        ["dense", "--group", "Z9", "--set", "(2),(1)"],
    ],
)
def test_round_trip_and_determinism(argv):
    code1, a = call(*argv)
    code2, b = call(*argv)
    a.pop("timing_ms"), b.pop("timing_ms")
    assert code1 == code2 and a == b
    G = parse_group(a["inputs"]["group"])
    X = parse_element_set(G, a["inputs"]["set"])
    assert X == parse_element_set(G, argv[argv.index("--set") + 1])
    assert format_element_set(X) == a["inputs"]["set"]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qcdense", "hull", "--group", "Z4", "--set", "(1)"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "hull"
