import json
import subprocess
import sys

import pytest

from surfbundle.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rank_table_word(capsys):
    code, out, _ = run(capsys, "rank", "D1 D2 D3", "--fiber", "closed")
    assert code == EXIT_OK
    assert "lower 2, upper 2 (exact)" in out


def test_rank_trivial(capsys):
    code, out, _ = run(capsys, "rank", "")
    assert code == EXIT_OK
    assert "lower 5" in out and "Z + Z + Z + Z + Z" in out


def test_rank_parse_error_quotes_token(capsys):
    code, _, err = run(capsys, "rank", "D9")
    assert code == EXIT_USAGE
    assert "D9" in err


def test_rank_emit_json(capsys):
    code, out, _ = run(capsys, "rank", "D1 D2 D3 D4", "--emit-presentation", "--emit-trace", "--json")
    assert code == EXIT_OK
    lines = [json.loads(line) for line in out.splitlines()]
    pres = lines[0]["presentation"]
    assert pres["generators"] == ["a1", "a2", "a3", "a4", "t"]
    assert len(pres["relators"]) == 5
    trace = lines[1]["trace"]
    assert trace["final"]["generators"] == ["a1", "t"]
    assert [s["eliminated"] for s in trace["steps"]] == ["a4", "a3", "a2"]
    cert = lines[2]
    assert (cert["upper"], cert["lower"], cert["status"]) == (2, 2, "exact")


def test_rank_budget_exhaustion_is_not_an_error(capsys):
    code, out, _ = run(capsys, "rank", "D1 D2 D3", "--max-steps", "0", "--conjugate-attempts", "0")
    assert code == EXIT_OK
    assert "unknown" in out


def test_bad_max_degree(capsys):
    code, _, _ = run(capsys, "rank", "D1", "--max-degree", "7")
    assert code == EXIT_USAGE


def test_family_rows(capsys):
    code, out, err = run(capsys, "family", "--eps", "1,1,1,1", "--n-range", "-5..5")
    assert code == EXIT_OK
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 11
    assert all(r.split("\t")[5] == "exact" and r.split("\t")[4] == "2" for r in rows)
    assert "11/11" in err


def test_family_negative_eps(capsys):
    code, out, _ = run(capsys, "family", "--eps", "-1,1,-1,-1", "--n-range", "0..0")
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 2


@pytest.mark.parametrize("eps", ["2,0,1,1", "1,1,1", "a,b,c,d"])
def test_family_bad_eps(capsys, eps):
    code, _, _ = run(capsys, "family", "--eps", eps, "--n-range", "0..1")
    assert code == EXIT_USAGE


def test_family_bad_range(capsys):
    code, _, _ = run(capsys, "family", "--eps", "1,1,1,1", "--n-range", "3..1")
    assert code == EXIT_USAGE


def test_table1_io_error(capsys):
    code, _, err = run(capsys, "table1", "--out", "/nonexistent/x.csv")
    assert code == EXIT_IO
    assert "nonexistent" in err


def test_table1_run(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, _, err = run(capsys, "table1", "--out", str(out))
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 61
    assert "0 beta1 mismatches" in err
    assert "D1 D2^-1 D3 D4 D5^-1 (punctured)" in err


def test_census_length_one(capsys):
    code, out, _ = run(capsys, "census", "--max-len", "1")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "word,fiber,beta1,torsion,rank_lower,rank_upper,rank_status"
    assert [line.split(",")[0] for line in lines[1:]] == ["D1", "D2", "D3"]


def test_census_cap(capsys):
    code, _, _ = run(capsys, "census", "--max-len", "9")
    assert code == EXIT_USAGE


def test_census_random_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "census", "--random", "100", "--seed", "7", "--out", str(a))[0] == EXIT_OK
    assert run(capsys, "census", "--random", "100", "--seed", "7", "--out", str(b))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 101


def test_census_jsonl(capsys):
    code, out, _ = run(capsys, "census", "--max-len", "1", "--format", "jsonl", "--fiber", "punctured")
    assert code == EXIT_OK
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["fiber"] for r in rows] == ["punctured"] * 3


def test_unknown_flag(capsys):
    code, _, _ = run(capsys, "rank", "D1", "--frobnicate")
    assert code == EXIT_USAGE


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "surfbundle", "rank", "D1 D2 D3 D4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "exact" in proc.stdout
