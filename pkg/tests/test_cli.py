import csv
import json

import pytest

from schemmel.cache import CACHE_ENV, load_table
from schemmel.cli import main, replay_manifest


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval(capsys):
    assert run(capsys, "eval", "--r", "2", "--n", "105") == (0, "15\n", "")
    assert run(capsys, "eval", "--r", "2", "--n", "105", "--by-count")[1] == "15\n"


def test_jacobsthal(capsys):
    code, out, _ = run(capsys, "jacobsthal", "--r", "5")
    assert code == 0
    assert json.loads(out) == {"r": 5, "modulus": 30, "J_r": 6, "witness_start": 1}


def test_enumerate_json_lines(capsys):
    code, out, _ = run(capsys, "enumerate", "--r", "1", "--upto", "30")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [r["n"] for r in rows] == [2, 6, 12, 18, 30]
    assert rows[3] == {"n": 18, "s_r": 6, "factors": [[2, 1], [3, 2]], "horizon": 210}


def test_enumerate_degenerate_flag(capsys):
    _, out, _ = run(capsys, "enumerate", "--r", "3", "--upto", "10")
    first = json.loads(out.splitlines()[0])
    assert first["n"] == 1 and first["degenerate"] is True


def test_enumerate_csv(capsys):
    _, out, _ = run(capsys, "enumerate", "--r", "2", "--upto", "105", "--format", "csv")
    rows = list(csv.DictReader(out.splitlines()))
    assert [int(r["n"]) for r in rows] == [3, 15, 21, 45, 105]


def test_enumerate_inconclusive_exit(capsys):
    code, _, err = run(capsys, "enumerate", "--r", "1", "--upto", "5000",
                       "--horizon-cap", "5000")
    assert code == 2
    assert json.loads(err)["error"] == "inconclusive"


def test_is_member(capsys):
    _, out, _ = run(capsys, "is-member", "--r", "2", "--n", "9")
    v = json.loads(out)
    assert v["member"] is False and v["refuter"] == 15 and v["refuter_s_r"] == 3
    _, out, _ = run(capsys, "is-member", "--r", "1", "--n", "2")
    assert json.loads(out)["member"] is True


def test_construct(capsys):
    _, out, _ = run(capsys, "construct", "--r", "2", "--k", "4")
    assert json.loads(out)["n"] == 105
    code, _, err = run(capsys, "construct", "--r", "1", "--k", "2", "--ell", "5")
    assert code == 64 and "fails" in err


def test_construct_family(tmp_path, capsys):
    out = tmp_path / "fam.csv"
    assert run(capsys, "construct-family", "--r", "1", "--k-max", "4", "--out", str(out))[0] == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert [(r["k"], r["ell"], r["n"]) for r in rows] == [("2", "0", "6"), ("3", "1", "42"),
                                                         ("4", "1", "330")]
    assert (tmp_path / "fam.csv.manifest.json").exists()


def test_lambda(capsys):
    _, out, _ = run(capsys, "lambda", "--r", "1", "--k", "2")
    assert abs(json.loads(out)["value"] - 0.41421356237309503) < 1e-12


def test_verify_passes(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--r", "2", "--upto", "20000", "--out", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["passed"]
    assert rep["conjectures"]["notes"]["counterexample_found"] is False


def test_report_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = run(capsys, "report", "--r", "1", "--upto", "1000", "--K", "2", "--L", "1",
                     "--out", str(out))
    header = out.read_text().splitlines()[0]
    assert code == 0
    assert header == ("n,log_n,omega,P1,Q1,ratio_p1_logn,ratio_qL_logn,ratio_pK_logn,"
                      "ratio_p1_log2n")


def test_report_needs_source(capsys):
    assert run(capsys, "report", "--r", "1")[0] == 64


@pytest.mark.parametrize("argv", [["bogus"], ["eval", "--r", "1"], ["eval", "--r", "x", "--n", "3"],
                                  ["enumerate", "--r", "1", "--upto", "5", "--nope"],
                                  ["sieve", "--r", "1", "--lo", "5", "--hi", "2"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 64


def test_sieve_formats(tmp_path, capsys):
    _, out, _ = run(capsys, "sieve", "--r", "2", "--lo", "1", "--hi", "10")
    assert json.loads(out)["values"] == [1, 0, 1, 0, 3, 0, 5, 0, 3, 0]
    path = tmp_path / "s.bin"
    assert run(capsys, "sieve", "--r", "2", "--lo", "1", "--hi", "10", "--format", "bin",
               "--out", str(path))[0] == 0
    assert load_table(path, 2, 1, 10).values.tolist() == [1, 0, 1, 0, 3, 0, 5, 0, 3, 0]


def test_sieve_cache_dir(tmp_path, monkeypatch, capsys, caplog):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    _, first, _ = run(capsys, "sieve", "--r", "3", "--lo", "1", "--hi", "50")
    cached = tmp_path / "sr_r3_1_50.bin"
    assert cached.exists()
    raw = bytearray(cached.read_bytes())
    raw[-1] ^= 1
    cached.write_bytes(bytes(raw))
    _, second, _ = run(capsys, "sieve", "--r", "3", "--lo", "1", "--hi", "50")
    assert second == first and "checksum" in caplog.text
    assert load_table(cached, 3, 1, 50)  # rewritten after recompute


def test_deterministic_bytes_and_threads(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run(capsys, "enumerate", "--r", "2", "--upto", "50000", "--out", str(a))
    run(capsys, "enumerate", "--r", "2", "--upto", "50000", "--out", str(b),
        "--threads", "4", "--segment-size", "4096")
    assert a.read_bytes() == b.read_bytes()


def test_manifest_replay(tmp_path, capsys):
    out = tmp_path / "e.jsonl"
    run(capsys, "enumerate", "--r", "3", "--upto", "2000", "--out", str(out))
    manifest = json.loads((tmp_path / "e.jsonl.manifest.json").read_text())
    assert manifest["command"] == "enumerate"
    assert manifest["parameters"]["upto"] == 2000
    assert manifest["artifact_version"] == "0.1.0"
    out.write_text("tampered")
    assert replay_manifest(tmp_path / "e.jsonl.manifest.json")
