import json

import pytest

from frobcat import catalog
from frobcat.cli import run


def _report(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def test_validate_ising(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert run(["validate", "--category", "builtin:ising", "--json", str(out)]) == 0
    assert "pentagon" in capsys.readouterr().out
    rep = _report(out)
    assert rep["schema"] == 1 and rep["command"] == "validate"
    for c in rep["checks"]:
        assert set(c) == {"name", "passed", "residual", "witness"}
        assert c["residual"] < 1e-9


def test_report_keys_sorted(tmp_path):
    out = tmp_path / "r.json"
    run(["smatrix", "--category", "builtin:fibonacci", "--json", str(out)])
    text = out.read_text()
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) == text


def test_local_modules_toric(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = run(["local-modules", "--category", "builtin:toric_code",
                "--algebra", "builtin:simple_current:{0,e}", "--json", str(out)])
    assert code == 0
    data = _report(out)["data"]
    assert data["simple_modules"] == 2
    assert data["local_modules"] == 1
    assert data["quotient"]["rank"] == 1


def test_coset_ising(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = run(["coset", "--Q", "builtin:ising_dual", "--H", "builtin:ising", "--L", "builtin:T",
                "--json", str(out)])
    assert code == 0
    assert _report(out)["data"]["dim_relation_residual"] < 1e-9


@pytest.mark.parametrize("argv", [
    ["centers", "--category", "builtin:ising", "--algebra", "builtin:dual_object:sigma"],
    ["alpha-z", "--category", "builtin:toric_code", "--algebra", "builtin:simple_current:e"],
    ["algebra-check", "--category", "builtin:fibonacci", "--algebra", "builtin:trivial"],
    ["trivialize", "--category", "builtin:fibonacci"],
])
def test_other_verbs_pass(argv):
    assert run(argv) == 0


def test_algebra_check_failure_exit_1():
    # 1 + f is not commutative; requiring it must fail the run
    code = run(["algebra-check", "--category", "builtin:toric_code",
                "--algebra", "builtin:simple_current:f", "--require", "commutative"])
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["validate", "--category", "builtin:nope"],
    ["validate"],
    ["validate", "--category", "file:/does/not/exist.json"],
    ["centers", "--category", "builtin:ising", "--algebra", "builtin:frobnicate"],
    ["no-such-verb"],
])
def test_usage_errors_exit_2(argv):
    assert run(argv) == 2


def test_trivialize_non_modular_fails():
    assert run(["trivialize", "--category", "builtin:pointed_z4_1"]) != 0


@pytest.fixture
def tampered_fibonacci(monkeypatch):
    real = catalog._read_data

    def fake(name, tol):
        cat = real(name, tol)
        if name == "fibonacci":
            key = next(k for k in sorted(cat.F) if abs(cat.F[k]) > 0.1 and k[3] == 1)
            cat.F[key] = cat.F[key] + 1e-3
        return cat

    monkeypatch.setattr(catalog, "_read_data", fake)
    catalog._load_cached.cache_clear()
    yield
    monkeypatch.undo()
    catalog._load_cached.cache_clear()


def test_selftest_detects_tampered_catalog(tampered_fibonacci, capsys):
    assert run(["validate", "--category", "builtin:fibonacci"]) == 1
    assert "pentagon" in capsys.readouterr().err


@pytest.mark.slow
def test_selftest_tampered_exit_1(tampered_fibonacci, capsys):
    assert run(["selftest"]) == 1
    captured = capsys.readouterr()
    assert "[FAIL]" in captured.out
    assert "pentagon" in captured.err


@pytest.mark.slow
@pytest.mark.parametrize("tol", [None, "1e-2"])
def test_selftest_passes(tol, capsys):
    argv = ["selftest"] + ([] if tol is None else ["--tol", tol])
    assert run(argv) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 13
