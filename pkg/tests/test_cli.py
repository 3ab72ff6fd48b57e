import json

import pytest

from modlie.cartan import build_witt
from modlie.cli import main
from modlie.liealg import from_json


def run(capsys, *args):
    rc = main(list(map(str, args)))
    out = capsys.readouterr()
    return rc, out.out, out.err


@pytest.fixture
def witt_file(tmp_path, capsys):
    path = tmp_path / "w.json"
    rc, _, _ = run(capsys, "construct", "witt", "--m", 1, "--n", 1, "--p", 5, "-o", path)
    assert rc == 0
    return path


def test_construct_witt_writes_a_five_dimensional_algebra(witt_file):
    L = from_json(witt_file.read_text())
    assert L.dim == 5 and L.p == 5


def test_round_trip_preserves_structure_constants(witt_file):
    L = from_json(witt_file.read_text())
    again = from_json(L.to_json())
    assert again.structure_constants() == L.structure_constants()
    assert L.structure_constants() == build_witt(1, 1, 5).structure_constants()


def test_construct_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "--seed", 3, "construct", "family", "--family", "H", "--m", 2, "--n", "1,1",
                   "-o", path)[0] == 0
    assert a.read_text() == b.read_text()


def test_construct_melikian(tmp_path, capsys):
    path = tmp_path / "m.json"
    assert run(capsys, "construct", "melikian", "--m", 1, "--n", 1, "-o", path)[0] == 0
    assert json.loads(path.read_text())["dim"] == 125


def test_construct_hamiltonian_form_with_zero_b(tmp_path, capsys):
    path = tmp_path / "h.json"
    rc, _, _ = run(capsys, "construct", "form", "--family", "hamiltonian_AB", "--A", "std", "--B", "zero",
                   "--m", 2, "--n", "1,1", "--p", 5, "-o", path)
    assert rc == 0
    H = from_json(path.read_text())
    assert H.dim == 26  # H(2;1) before passing to derived algebras


def test_analyze_witt_flags(witt_file, capsys):
    rc, out, _ = run(capsys, "analyze", witt_file, "--simple", "--restrictable")
    rep = json.loads(out)
    assert rc == 0
    assert rep["flags"] == {"simple": True, "restrictable": True}


def test_analyze_witt_roots(witt_file, capsys):
    rc, out, _ = run(capsys, "analyze", witt_file, "--roots", "--torus", "auto")
    rep = json.loads(out)
    assert rc == 0
    assert sorted(r["dim"] for r in rep["roots"]) == [1] * 5
    assert rep["numbers"]["TR"] == {"value": 1, "exact": True, "kind": "exact"}


def test_analyze_melikian_sandwich(tmp_path, capsys):
    path = tmp_path / "m.json"
    run(capsys, "construct", "melikian", "--m", 1, "--n", 1, "-o", path)
    rc, out, _ = run(capsys, "analyze", path, "--sandwich", "--verify")
    rep = json.loads(out)
    assert rc == 0 and rep["flags"]["strongly_degenerate"] is True


def test_analyze_table_output(witt_file, capsys):
    rc, out, _ = run(capsys, "analyze", witt_file, "--simple", "--table")
    assert rc == 0 and "simple" in out and "dim 5" in out


def test_expect_mismatch_exits_with_2(witt_file, capsys):
    assert run(capsys, "analyze", witt_file, "--simple", "--expect", "simple=true")[0] == 0
    assert run(capsys, "analyze", witt_file, "--simple", "--expect", "simple=false")[0] == 2


def test_derivation_dimension_and_limit(witt_file, capsys, monkeypatch):
    rc, out, _ = run(capsys, "analyze", witt_file, "--derivations")
    assert rc == 0 and json.loads(out)["numbers"]["der_dim"] == 5
    monkeypatch.setenv("MODLIE_DIM_LIMIT", "3")
    assert run(capsys, "analyze", witt_file, "--derivations")[0] == 3


def test_usage_errors_exit_with_1(tmp_path, capsys):
    assert run(capsys, "verify", "nosuch")[0] == 1
    assert run(capsys, "construct", "chevalley", "--kind", "A", "--rank", 1, "--p", 3, "-o", tmp_path / "x")[0] == 1
    assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 1


def test_malformed_input_is_a_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 5, "dim": 2, "brackets": [[0, 7, [[0, "1"]]]]}')
    rc, _, err = run(capsys, "analyze", bad, "--simple")
    assert rc == 1 and err


def test_verify_suite_json(capsys):
    rc, out, _ = run(capsys, "verify", "witt", "--json")
    res = json.loads(out)
    assert rc == 0
    assert res[0]["suite"] == "witt" and res[0]["passed"]
    assert all(c["passed"] for c in res[0]["checks"])


def test_verify_dimensions(capsys):
    rc, out, _ = run(capsys, "verify", "dimensions")
    assert rc == 0 and out.startswith("[PASS] dimensions")
