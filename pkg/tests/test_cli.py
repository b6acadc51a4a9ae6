"""CLI behaviour: flags, exit codes, file outputs, determinism."""

import json
import os

import pytest

from harmzeros.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_z2_minus_conj_z(capsys):
    code, out, _ = run(["solve", "--p", "0,0;0,0;1,0", "--q", "0,0;-1,0"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["real_count"] == 4
    assert rep["certified_total"] == 4
    assert rep["bezout"] == 4


def test_solve_linear(capsys):
    code, out, _ = run(["solve", "--p", "0,0;1,0", "--q", "0,0"], capsys)
    assert code == 0
    assert json.loads(out)["real_count"] == 1


def test_solve_malformed_is_usage_error(capsys):
    code, _, err = run(["solve", "--p", "nonsense", "--q", "0,0"], capsys)
    assert code == 2
    assert "error" in err


def test_solve_rational_literals(capsys):
    code, out, _ = run(["solve", "--p", "0,0;0,0;1/2,0", "--q", "1/4,-0.5"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["n"] == 2 and rep["m"] == 0


def test_extremal_10_4(capsys):
    code, out, _ = run(["extremal", "--n", "10", "--ell", "4"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["real_count"] == 64
    assert rep["excess"] == 6
    assert rep["wilmshurst_bound"] == 58
    assert rep["a_used"]


def test_extremal_m_flag_equivalent(capsys):
    code1, out1, _ = run(["extremal", "--n", "8", "--ell", "2"], capsys)
    code2, out2, _ = run(["extremal", "--n", "8", "--m", "6"], capsys)
    rep1, rep2 = json.loads(out1), json.loads(out2)
    del rep1["wall_time_ms"], rep2["wall_time_ms"]
    assert code1 == code2 == 0
    assert rep1 == rep2


def test_extremal_rejects_bad_ell(capsys):
    assert run(["extremal", "--n", "8", "--ell", "0"], capsys)[0] == 2
    assert run(["extremal", "--n", "8", "--ell", "8"], capsys)[0] == 2


def test_extremal_explicit_parameter(capsys):
    code, out, _ = run(["extremal", "--n", "7", "--ell", "1",
                        "--a-real", "1/10", "--a-imag", "0.0001"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["real_count"] == 49
    assert rep["a_used"].startswith("0.1,")


def test_random_trials_zero_is_usage_error(capsys):
    code, _, err = run(["random", "--model", "kostlan", "--n", "4", "--m", "2",
                        "--trials", "0"], capsys)
    assert code == 2


def test_random_kostlan_equals_truncated_at_m_eq_n(tmp_path, capsys):
    base = ["--n", "5", "--m", "5", "--trials", "8", "--seed", "9"]
    f1 = str(tmp_path / "k.csv")
    f2 = str(tmp_path / "t.csv")
    assert run(["random", "--model", "kostlan", *base, "--out", f1], capsys)[0] == 0
    assert run(["random", "--model", "truncated", *base, "--out", f2], capsys)[0] == 0
    s1 = open(f1).read().replace("kostlan", "MODEL")
    s2 = open(f2).read().replace("truncated", "MODEL")
    assert s1 == s2
    assert open(f1 + ".hist.csv").read() == open(f2 + ".hist.csv").read()


def test_outputs_byte_identical_on_rerun(tmp_path, capsys):
    args = ["random", "--model", "kostlan", "--n", "4", "--m", "2",
            "--trials", "6", "--seed", "3"]
    f1, f2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert run(args + ["--out", f1], capsys)[0] == 0
    assert run(args + ["--out", f2], capsys)[0] == 0
    assert open(f1, "rb").read() == open(f2, "rb").read()


def test_report_file_omits_wall_time(tmp_path, capsys):
    out = str(tmp_path / "rep.json")
    code, _, _ = run(["extremal", "--n", "7", "--ell", "1", "--out", out], capsys)
    assert code == 0
    rep = json.load(open(out))
    assert "wall_time_ms" not in rep
    assert rep["excess"] == rep["real_count"] - rep["wilmshurst_bound"]


def test_hz_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("HZ_SEED", "77")
    code, out, _ = run(["extremal", "--n", "7", "--ell", "1"], capsys)
    assert code == 0
    assert json.loads(out)["seed"] == 77


def test_certificate_dump(tmp_path, capsys):
    certs = str(tmp_path / "c.json")
    code, _, _ = run(["solve", "--p", "0,0;0,0;1,0", "--q", "0,0;-1,0",
                      "--certs", certs], capsys)
    assert code == 0
    data = json.load(open(certs))
    assert len(data) == 4
    assert all(entry["real"] for entry in data)


def test_table_figure1_and_2(tmp_path, capsys):
    code, _, _ = run(["table", "--which", "figure1", "--nmax", "9",
                      "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    lines = open(tmp_path / "figure1.csv").read().splitlines()
    assert lines[0] == "m\\n,7,8,9"
    assert lines[1] == "6,49,52,57"
    assert lines[2] == "7,,64,67"
    assert lines[3] == "8,,,81"
    code, _, _ = run(["table", "--which", "figure2", "--nmax", "9",
                      "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    lines = open(tmp_path / "figure2.csv").read().splitlines()
    assert lines[1] == "6,0,0,2"
    assert lines[2] == "7,,0,0"
    assert lines[3] == "8,,,0"
