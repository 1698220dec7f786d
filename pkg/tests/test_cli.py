import shutil
import subprocess
import sys

import pytest

from discforge import exprdb, invariants, roots
from discforge.cli import EXIT_DATA, EXIT_MATH, EXIT_OK, EXIT_USAGE, main
from discforge.exactnum import parse_rational, reduce_mod
from discforge.exterior import load_tensor


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_monomials(capsys):
    assert run(capsys, "enumerate-monomials", "12,18,24,30", 120) == (EXIT_OK, "28\n", "")
    code, out, _ = run(capsys, "enumerate-monomials", "2 6 8 12", 24, "--list")
    lines = out.split("\n")
    assert lines[0] == "12 0 0 0" and lines[-2] == "16"


def test_semisimple_then_invariants(capsys, tmp_path):
    path = tmp_path / "t.txt"
    assert run(capsys, "semisimple", "gr39", "1", "2", "-1/2", "3", "--out", path)[0] == EXIT_OK
    code, out, _ = run(capsys, "invariants", "gr39", path)
    assert code == EXIT_OK
    got = {int(k.strip()[2:]): parse_rational(v) for k, v in (line.split("=") for line in out.splitlines())}
    assert got == invariants.trace_invariants("gr39", load_tensor(path)).values


def test_discriminant_commands(capsys, tmp_path):
    t = tmp_path / "t.txt"
    run(capsys, "semisimple", "gr39", "1", "2", "0", "3", "--out", t)
    assert run(capsys, "discriminant", "gr39", t) == (EXIT_OK, "0\n", "")
    run(capsys, "semisimple", "cube2222", "1", "2", "3", "4", "--out", t)
    code, out, _ = run(capsys, "discriminant", "hd2222", t)
    assert (code, parse_rational(out)) == (EXIT_OK, roots.vandermonde_2222([1, 2, 3, 4]))
    expr = exprdb.save(exprdb.builtin("hd2222"), tmp_path / "hd.txt")
    assert run(capsys, "discriminant", "hd2222", t, "--expr", expr)[1] == out
    cube = tmp_path / "c.txt"
    cube.write_text("cube 2 2 2\n0 0 0 1\n1 1 1 1\n")
    assert run(capsys, "discriminant", "delta222", cube)[1] == "1\n"


def test_gr48_needs_an_expression(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("DISCFORGE_DATA", raising=False)
    t = tmp_path / "t.txt"
    run(capsys, "semisimple", "gr48", *"1 2 3 4 5 6 7".split(), "--out", t)
    code, _, err = run(capsys, "discriminant", "gr48", t)
    assert code == EXIT_DATA and "--expr" in err


def test_project(capsys, tmp_path):
    t = tmp_path / "w.txt"
    t.write_text("wedge 6 3\n1 2 3 1\n4 5 6 -2\n1 2 6 3\n1 4 5 7\n")
    code, out, _ = run(capsys, "project", t, "--grouping", "1,4 2,5 3,6")
    assert code == EXIT_OK
    assert out == "cube 2 2 2\n0 0 0 1\n0 0 1 3\n1 1 1 -2\n"
    assert run(capsys, "project", t, "--grouping", "1,4 2,x")[0] == EXIT_USAGE


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == EXIT_OK
    assert out.count("PASS") == 5 and "FAIL" not in out


def test_exit_codes(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == EXIT_USAGE
    assert run(capsys, "invariants", "gr39", tmp_path / "missing.txt")[0] == EXIT_DATA
    bad = tmp_path / "bad.txt"
    bad.write_text("wedge 9 3\n1 2 three 4\n")
    code, _, err = run(capsys, "invariants", "gr39", bad)
    assert code == EXIT_DATA and ":2" in err
    bad.write_text("wedge 6 3\n1 2 3 1\n")
    assert run(capsys, "invariants", "gr39", bad)[0] == EXIT_USAGE
    assert run(capsys, "interpolate", "e6")[0] == EXIT_USAGE


def test_calibrate_writes_where_asked(capsys, tmp_path):
    code, out, err = run(capsys, "calibrate", "gr36", "--out", tmp_path)
    assert code == EXIT_OK and str(tmp_path) in err
    assert invariants.parse_calibration(out) == invariants.load_calibration("gr36")
    assert run(capsys, "calibrate", "gr48", "--mode", "scalar", "--out", tmp_path)[0] == EXIT_MATH


def test_interpolate_and_lift(capsys, tmp_path):
    shards = tmp_path / "shards"
    code, out, _ = run(capsys, "interpolate", "hd2222", "--primes", 4, "--shards", shards)
    assert code == EXIT_OK and out.startswith("4 shard(s)")
    code, _, err = run(capsys, "lift", "cube2222", shards)
    assert code == EXIT_MATH and "need more primes" in err
    run(capsys, "interpolate", "hd2222", "--primes", 10, "--shards", shards)
    target = tmp_path / "hd.txt"
    code, _, err = run(capsys, "lift", "cube2222", shards, "--out", target)
    assert code == EXIT_OK and err.startswith("certified")
    assert exprdb.load(target) == exprdb.builtin("hd2222")
    assert run(capsys, "certify", "cube2222", "--expr", target)[0] == EXIT_OK


def test_interpolate_single_prime_to_stdout(capsys, monkeypatch):
    monkeypatch.delenv("DISCFORGE_DATA", raising=False)
    code, out, _ = run(capsys, "interpolate", "cube2222", "--prime", 1009)
    lines = out.split()
    hd = exprdb.builtin("hd2222")
    assert code == EXIT_OK and lines[0] == "1009" and len(lines) == 17
    assert int(lines[16]) == reduce_mod(hd.terms[(0, 0, 0, 2)], 1009)


def test_rational_interpolation_output(capsys, tmp_path):
    target = tmp_path / "gr39.txt"
    assert run(capsys, "interpolate", "gr39", "--out", target)[0] == EXIT_OK
    assert exprdb.load(target) == exprdb.builtin("gr39_discriminant")
    code, out, _ = run(capsys, "certify", "gr39", "--points", 5)
    assert code == EXIT_OK and out.startswith("ok")


def test_certify_detects_a_wrong_expression(capsys, tmp_path):
    hd = exprdb.builtin("hd2222")
    terms = dict(hd.terms)
    terms[(12, 0, 0, 0)] += 1
    wrong = exprdb.save(exprdb.InvariantExpression(hd.names, hd.degrees, terms), tmp_path / "w.txt")
    code, out, _ = run(capsys, "certify", "cube2222", "--expr", wrong)
    assert code == EXIT_MATH and out.startswith("FAILED")


@pytest.mark.skipif(shutil.which("discforge") is None, reason="console script not installed")
def test_console_script():
    done = subprocess.run(["discforge", "enumerate-monomials", "12,18,24,30", "120"],
                          capture_output=True, text=True)
    assert (done.returncode, done.stdout) == (0, "28\n")
    done = subprocess.run([sys.executable, "-m", "discforge.cli", "selftest"], capture_output=True, text=True)
    assert done.returncode == 0
