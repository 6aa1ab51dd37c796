import io
import json
import subprocess
import sys

import pytest

from hasseforge import serialize as ser
from hasseforge.cli import main
from hasseforge.generate import named_instance


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_console_script_help():
    proc = subprocess.run(["hasse-forge", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "generate" in proc.stdout and "verify" in proc.stdout


def test_generate_instance_and_validate(capsys, tmp_path):
    path = tmp_path / "d.json"
    code, out, _ = run_cli(capsys, "generate", "--instance", "ram-ss",
                           "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text() == ser.dumps(named_instance("ram-ss")) + "\n"
    code, out, _ = run_cli(capsys, "validate", "--in", str(path))
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_generate_is_deterministic(capsys):
    args = ("generate", "--params", "3,1,2,2,1", "--count", "3", "--seed", "7")
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0 and len(out1.splitlines()) == 3
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    _, out3, _ = run_cli(capsys, "generate", "--params", "3,1,2,2,1",
                         "--count", "3", "--seed", "8")
    assert out3 != out1


def test_generate_charp_kind(capsys):
    code, out, _ = run_cli(capsys, "generate", "--params", "2,2,1,2,1",
                           "--kind", "charp", "--seed", "1")
    assert code == 0
    assert json.loads(out)["lifted"] is False


def test_verify_batch(capsys, tmp_path):
    path = tmp_path / "batch.json"
    code, out, _ = run_cli(capsys, "generate", "--params", "3,1,2,2,1",
                           "--count", "3", "--seed", "2", "--out", str(path))
    assert code == 0
    code, out, _ = run_cli(capsys, "verify", "--in", str(path))
    assert code == 0
    reports = [json.loads(ln) for ln in out.splitlines()]
    assert len(reports) == 3
    for r in reports:
        assert r["ok"] and r["product_identity"] and r["factorization"]
        assert r["pi_divisibility"] is True  # lifted input
        names = [v["name"] for v in r["verdicts"]]
        assert names == ["ha", "ha_i", "m", "hasse", "ha_pr", "ha_pr"]


def test_verify_strict_flags_gate_failures(capsys, tmp_path):
    # seed chosen so this charp batch contains data whose flags are not
    # divisible, hence some not_applicable comparisons
    path = tmp_path / "charp.json"
    run_cli(capsys, "generate", "--params", "3,1,2,2,1", "--kind", "charp",
            "--count", "4", "--seed", "9", "--out", str(path))
    code, out, _ = run_cli(capsys, "verify", "--in", str(path))
    assert code == 0
    reports = [json.loads(ln) for ln in out.splitlines()]
    assert all(r["ok"] for r in reports)
    assert any(r["not_applicable"] > 0 for r in reports)
    assert all(r["pi_divisibility"] is None for r in reports)
    code, _, _ = run_cli(capsys, "verify", "--in", str(path), "--strict")
    assert code == 1


def test_invariants_json_and_csv(capsys, tmp_path):
    path = tmp_path / "d.json"
    run_cli(capsys, "generate", "--instance", "ram-ss", "--out", str(path))
    code, out, _ = run_cli(capsys, "invariants", "--in", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["doc"] == 0
    got = {(s["name"], s["i"], s["j"]): s["scalar"] for s in doc["sections"]}
    assert got[("ha", None, None)] == 0
    assert got[("m", 0, 2)] == 1
    assert got[("hasse", 0, None)] == 0
    assert doc["pattern"]["ha"] is True
    code, out, _ = run_cli(capsys, "invariants", "--in", str(path),
                           "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "doc,name,i,j,scalar,vanished"
    assert "0,m,0,2,1,0" in lines


def test_dualize_round_trip(capsys, tmp_path):
    src = tmp_path / "d.json"
    dual = tmp_path / "dual.json"
    run_cli(capsys, "generate", "--instance", "unram-f2", "--out", str(src))
    code, _, _ = run_cli(capsys, "dualize", "--in", str(src),
                         "--out", str(dual))
    assert code == 0
    code, _, _ = run_cli(capsys, "validate", "--in", str(dual))
    assert code == 0
    back = tmp_path / "back.json"
    run_cli(capsys, "dualize", "--in", str(dual), "--out", str(back))
    assert back.read_text() == src.read_text()


def test_survey_deterministic(capsys):
    args = ("survey", "--params", "2,1,2,2,1", "--count", "10", "--seed", "3")
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0
    doc = json.loads(out1)
    assert sum(e["count"] for e in doc["patterns"]) == 10
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    code, out, _ = run_cli(capsys, *args, "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "pattern,count"


def test_validate_reports_bad_datum(capsys, tmp_path):
    doc = ser.datum_to_dict(named_instance("ram-ss"))
    doc["V"][0][0][0] = doc["V"][0][0][1]  # unit upper-left breaks F.V = p
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc) + "\n")
    code, out, _ = run_cli(capsys, "validate", "--in", str(path))
    assert code == 1
    rep = json.loads(out)
    assert rep["ok"] is False and rep["error"]


def test_usage_errors_exit_2(capsys, tmp_path):
    code, _, err = run_cli(capsys, "generate", "--params", "3,1,2")
    assert code == 2 and "five integers" in err
    bad = tmp_path / "bad.json"
    bad.write_text("not json\n")
    code, _, err = run_cli(capsys, "validate", "--in", str(bad))
    assert code == 2 and "malformed" in err
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"format":"other/9"}\n')
    code, _, _ = run_cli(capsys, "verify", "--in", str(wrong))
    assert code == 2
    empty = tmp_path / "empty.json"
    empty.write_text("\n")
    code, _, _ = run_cli(capsys, "invariants", "--in", str(empty))
    assert code == 2


def test_size_cap(capsys, monkeypatch):
    monkeypatch.setenv("HASSE_FORGE_LIMIT", "3")
    code, _, err = run_cli(capsys, "generate", "--params", "3,1,2,2,1")
    assert code == 2 and "work cap" in err
    monkeypatch.setenv("HASSE_FORGE_LIMIT", "4")
    code, _, _ = run_cli(capsys, "generate", "--params", "3,1,2,2,1")
    assert code == 0
    monkeypatch.setenv("HASSE_FORGE_LIMIT", "three")
    code, _, err = run_cli(capsys, "generate", "--params", "3,1,2,2,1")
    assert code == 2 and "integer" in err


def test_stdin_stdout_pipe(capsys, monkeypatch):
    doc = ser.dumps(named_instance("ss"))
    monkeypatch.setattr(sys, "stdin", io.StringIO(doc + "\n"))
    code, out, _ = run_cli(capsys, "verify")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_oracle_subcommand(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--quick")
    assert code == 0
    counts = json.loads(out)
    assert counts["prop_dual_pairs"] == 1677
