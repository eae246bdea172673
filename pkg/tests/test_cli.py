import json
import math

import pytest

from paleylab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rip_json(capsys):
    code, out, _ = run_cli(capsys, "rip", "--p", "13", "--K", "3", "--budget", "1e6")
    assert code == 0
    doc = json.loads(out)
    assert doc["p"] == 13 and doc["K"] == 3 and doc["mode"] == "exact"
    assert abs(doc["delta_lower"] - 2 / math.sqrt(13)) < 1e-9
    assert doc["provenance"].startswith("paleylab ")
    assert "workers=" not in doc["provenance"]


def test_rip_csv(capsys):
    code, out, _ = run_cli(capsys, "rip", "--p", "13", "--K", "2", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("# paleylab ")
    assert lines[1] == "p,K,mode,delta_lower,delta_upper"
    assert lines[2].startswith("13,2,exact,")


def test_usage_error_is_exit_2(capsys):
    code, _, err = run_cli(capsys, "etf", "--p", "15")
    assert code == 2
    assert "prime" in err


def test_budget_error_is_exit_3(capsys):
    code, _, err = run_cli(capsys, "rip", "--p", "53", "--K", "4", "--budget", "100")
    assert code == 3
    assert "budget" in err.lower()


def test_field_json(capsys):
    code, out, _ = run_cli(capsys, "field", "--p", "13")
    assert code == 0
    doc = json.loads(out)
    assert doc["qr"] == [1, 3, 4, 9, 10, 12]
    assert doc["n"] == 4


def test_etf_verify_and_dumps(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "etf", "--p", "13")
    assert code == 0 and json.loads(out)["passed"]
    target = tmp_path / "seidel.csv"
    code, _, _ = run_cli(capsys, "etf", "--p", "13", "--dump", "seidel", "--out", str(target))
    assert code == 0
    lines = target.read_text().strip().split("\n")
    assert len(lines) == 15  # provenance + 14 rows
    assert lines[1].split(",")[1] == "1"  # chi(0-1) = chi(12) = +1


def test_charsum_ops(capsys):
    code, out, _ = run_cli(capsys, "charsum", "--p", "13", "--op", "sum",
                           "--S", "0", "--T", "1")
    assert code == 0 and json.loads(out)["sum"] == 1
    code, out, _ = run_cli(capsys, "charsum", "--p", "13", "--op", "decomp",
                           "--S", "0,1,3", "--T", "1,2")
    doc = json.loads(out)
    assert code == 0 and doc["corrected_residual"] == 0
    code, out, _ = run_cli(capsys, "charsum", "--p", "13", "--op", "property",
                           "--alpha", "0.5")
    assert code == 0 and abs(json.loads(out)["worst_ratio"] - 9 / 16) < 1e-12


def test_clique_cmd(capsys):
    code, out, _ = run_cli(capsys, "clique", "--p", "13")
    doc = json.loads(out)
    assert code == 0 and doc["omega"] == 3 and doc["witness"] == [0, 1, 4]


def test_extractor_ops(capsys):
    code, out, _ = run_cli(capsys, "extractor", "--p", "13", "--op", "bias",
                           "--S", "0,1,3,4", "--T", "0,1,3,4")
    doc = json.loads(out)
    assert code == 0 and doc["bias_num"] == 12 and doc["bias_den"] == 32
    code, out, _ = run_cli(capsys, "extractor", "--p", "13", "--op", "worst", "--k", "2")
    assert code == 0 and json.loads(out)["bias"] == 0.375


def test_extractor_sweep_csv(capsys, tmp_path):
    target = tmp_path / "bias.csv"
    code, _, _ = run_cli(capsys, "extractor", "--p", "13", "--op", "sweep",
                         "--kmin", "0", "--kmax", "2", "--kstep", "1",
                         "--out", str(target))
    assert code == 0
    lines = target.read_text().strip().split("\n")
    assert lines[1] == "p,k,size,bias"
    assert len(lines) == 5
    assert lines[2].startswith("13,0,1,0.5")


def test_scaling_deterministic_across_workers(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(capsys, "scaling", "--primes", "13,17,29", "--Kmax", "4",
                   "--out", str(a))[0] == 0
    assert run_cli(capsys, "scaling", "--primes", "13,17,29", "--Kmax", "4",
                   "--workers", "4", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().split("\n")
    assert lines[1] == "p,K,mode,delta_lower,delta_upper,conjecture_bound,ratio"
    assert len([ln for ln in lines if ln and not ln.startswith("#")]) == 13  # header + 12 rows


def test_implication_cmd(capsys, tmp_path):
    eps = str(math.log(4) / math.log(13) - 0.5)
    target = tmp_path / "implication.json"
    code, _, _ = run_cli(capsys, "implication", "--p", "13", "--epsilon", eps,
                         "--out", str(target))
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["pass"] is True
    assert doc["charsum_sweep"]["violations"] == 0
    assert doc["K"] == 4
