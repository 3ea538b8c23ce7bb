import json
import subprocess
import sys

import pytest

from ttw import catalog
from ttw.cli import main
from ttw.expr import parse_operator, print_operator
from ttw.genpoly import GenPolynomial
from ttw.weyl import DiffOp


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _save(tmp_path, name, op):
    path = tmp_path / name
    path.write_text(op.dumps(), encoding="utf-8")
    return str(path)


def test_catalog_text(capsys):
    code, out, _ = _run(capsys, "catalog", "--k", "1", "--which", "I12", "--format", "text")
    assert code == 0
    assert parse_operator(out) == catalog.build_I12(1)
    assert out.strip() == print_operator(catalog.build_I12(1))


def test_catalog_json_round_trips(capsys):
    code, out, _ = _run(capsys, "catalog", "--k", "2", "--which", "H", "--format", "json")
    assert code == 0
    assert DiffOp.loads(out) == catalog.build_hamiltonian(2)


def test_catalog_unknown_k(capsys):
    code, _, err = _run(capsys, "catalog", "--k", "5", "--which", "I2")
    assert code == 2
    assert "no catalog integral for k=5" in err


def test_commute(capsys, tmp_path):
    H = _save(tmp_path, "H.json", catalog.build_hamiltonian(3))
    I1 = _save(tmp_path, "I1.json", catalog.build_I1(3))
    code, out, _ = _run(capsys, "commute", H, I1)
    assert code == 0 and DiffOp.loads(out).is_zero()
    code, out, _ = _run(capsys, "commute", H, H)
    assert DiffOp.loads(out).is_zero()


def test_commute_reproduces_I12(capsys, tmp_path):
    a = _save(tmp_path, "I1.json", catalog.build_I1(2))
    b = _save(tmp_path, "I2.json", catalog.build_I2(2))
    out = tmp_path / "I12.json"
    assert _run(capsys, "commute", a, b, "--out", str(out))[0] == 0
    assert DiffOp.loads(out.read_text()) == catalog.fixture_operator(2, "I12")


def test_commute_accepts_text(capsys, tmp_path):
    a = tmp_path / "a.txt"
    a.write_text("Dt")
    b = tmp_path / "b.txt"
    b.write_text("t^2")
    code, out, _ = _run(capsys, "commute", str(a), str(b), "--format", "text")
    assert out.strip() == "2*t"


def test_commute_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "diffop-v1", "terms": [{"dt": 0}]}))
    assert _run(capsys, "commute", str(bad), str(bad))[0] == 2
    junk = tmp_path / "junk.txt"
    junk.write_text("t + + q")
    code, _, err = _run(capsys, "commute", str(junk), str(junk))
    assert code == 2 and "column" in err
    assert _run(capsys, "commute", str(tmp_path / "missing"), str(junk))[0] == 2


def test_verify_k1(capsys):
    code, out, _ = _run(capsys, "verify", "--k", "1", "--no-timing")
    assert code == 0, out
    assert out.splitlines()[-1] == "overall PASS"
    assert "FAIL" not in out


def test_verify_is_deterministic(capsys):
    first = _run(capsys, "verify", "--k", "2", "--suite", "spectrum", "--no-timing", "--format", "json")[1]
    second = _run(capsys, "verify", "--k", "2", "--suite", "spectrum", "--no-timing", "--format", "json")[1]
    assert first == second


def test_verify_k4_closures_skip_without_heavy(capsys):
    code, out, _ = _run(capsys, "verify", "--k", "4", "--suite", "closures", "--no-timing")
    assert code == 0
    assert "SKIPPED" in out


def test_verify_conjecture_k2(capsys):
    code, out, _ = _run(capsys, "verify", "--k", "2", "--suite", "conjecture")
    assert code == 0, out


def test_reduce_commutator(capsys):
    code, out, _ = _run(capsys, "reduce", "--k", "1", "--commutator", "I1", "I12")
    assert code == 0
    assert GenPolynomial.loads(out) == catalog.expected_closure(1, "doubleI1").rhs


def test_reduce_zero_target(capsys, tmp_path):
    zero = _save(tmp_path, "zero.json", DiffOp.zero())
    code, out, _ = _run(capsys, "reduce", "--k", "1", "--target", zero)
    assert code == 0
    assert GenPolynomial.loads(out).is_zero()


def test_reduce_with_generator_files(capsys, tmp_path):
    names = ("H", "I1", "I2", "I12")
    files = [_save(tmp_path, f"{n}.json", op) for n, op in zip(names, catalog.generators(1))]
    target = _save(tmp_path, "t.json", catalog.build_hamiltonian(1) * catalog.build_I1(1))
    code, out, _ = _run(capsys, "reduce", "--gens", *files, "--target", target, "--format", "text")
    assert code == 0 and out.strip() == "H*I1"


def test_reduce_no_solution(capsys):
    code, _, err = _run(capsys, "reduce", "--k", "1", "--commutator", "I2", "I12", "--degree", "1")
    assert code == 3
    assert "total_degree" in err


def test_reduce_k3_minimal_degree(capsys):
    assert _run(capsys, "reduce", "--k", "3", "--commutator", "I1", "I12", "--degree", "3")[0] == 3
    assert _run(capsys, "reduce", "--k", "3", "--commutator", "I1", "I12", "--degree", "4")[0] == 0


def test_reduce_bad_caps(capsys):
    assert _run(capsys, "reduce", "--k", "1", "--product", "H", "H", "--caps", "X=1")[0] == 2


def test_spectrum(capsys):
    code, out, _ = _run(capsys, "spectrum", "--k", "2", "--N", "2", "--s", "2")
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert code == 0
    assert sorted(r[2] for r in rows) == ["0", "4*w", "8*w", "8*w"]


def test_spectrum_bound_and_trivial(capsys):
    out = _run(capsys, "spectrum", "--k", "1", "--N", "0", "--s", "1")[1]
    assert out.splitlines()[1:] == ["0\t0\t0"]
    out = _run(capsys, "spectrum", "--k", "2", "--N", "2", "--s", "2", "--w", "1/2")[1]
    assert sorted(line.split("\t")[2] for line in out.splitlines()[1:]) == ["0", "2", "4", "4"]


def test_spectrum_not_invariant(capsys):
    code, _, err = _run(capsys, "spectrum", "--k", "3", "--N", "4", "--s", "1")
    assert code == 1
    assert "NotInvariant" in err


def test_spectrum_usage(capsys):
    assert _run(capsys, "spectrum", "--k", "2", "--N", "-1", "--s", "2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--k", "2", "--N", "1", "--s", "1", "--w", "x"])
    assert exc.value.code == 2


def test_console_module_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ttw.cli", "catalog", "--k", "1", "--which", "H", "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert parse_operator(proc.stdout) == catalog.build_hamiltonian(1)
