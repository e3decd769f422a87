import json

import pytest

from hdrelay.cli import SweepConfig, main, random_network, run_conjecture_sweep, run_gap_curves


@pytest.fixture
def files(tmp_path):
    sym = tmp_path / "sym.json"
    sym.write_text(json.dumps({"n_relays": 2, "beta": [[0, 0, 2], [0, 0, "3/2"], ["3/2", 2, 1]]}))
    one = tmp_path / "one.json"
    one.write_text(json.dumps({"n_relays": 1, "beta": [[0, 3], [2, 1]]}))
    direct = tmp_path / "direct.csv"
    direct.write_text("0,0\n0,2\n")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    return sym, one, direct, bad


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gdof_command(capsys, files):
    sym, one, direct, _ = files
    code, out, _ = run(capsys, "gdof", sym)
    data = json.loads(out)
    assert code == 0 and data["gdof"] == "9/5" and data["support_size"] == 2
    assert json.loads(run(capsys, "gdof", one)[1])["gdof"] == "5/3"
    data = json.loads(run(capsys, "gdof", direct, "--min-support")[1])
    assert data["gdof"] == "2" and data["support_size"] == 1
    data = json.loads(run(capsys, "gdof", sym, "--mode", "float")[1])
    assert data["gdof"] == pytest.approx(1.8)


def test_bad_inputs(capsys, files, tmp_path):
    code, _, err = run(capsys, "gdof", files[3])
    assert code != 0 and "error" in err
    assert run(capsys, "gdof", tmp_path / "missing.json")[0] != 0
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"n_relays": 13, "beta": [[0] * 14 for _ in range(14)]}))
    code, _, err = run(capsys, "gdof", big)
    assert code != 0 and "--mode float" in err


def test_fd_classify_mwbm(capsys, files, tmp_path):
    sym = files[0]
    assert json.loads(run(capsys, "fd", sym)[1]) == {"fd_gdof": "2"}
    data = json.loads(run(capsys, "classify", sym)[1])
    assert data["fd_case"] == "CASE2A" and data["best_relay_suboptimal"]
    m = tmp_path / "m.json"
    m.write_text("[[1, 3], [2, null]]")
    assert json.loads(run(capsys, "mwbm", m)[1])["value"] == "5"


def test_gap_curves(capsys):
    code, out, err = run(capsys, "gap-curves", "--n-max", "5")
    rows = [r.split(",") for r in out.strip().splitlines()]
    assert rows[1][:2] == ["1", "6.0630"] and rows[3][3] == "9.4146"
    assert "warning" in err
    assert run_gap_curves(5) == out


def test_sweep_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "conjecture-sweep", "--n", 2, "--trials", 25, "--seed", 7, "--out", a)
    run(capsys, "conjecture-sweep", "--n", 2, "--trials", 25, "--seed", 7, "--out", b, "--workers", 2)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "trial,gdof,support_size,tight_count,counterexample"
    assert lines[-1].startswith("summary,min=")


def test_sweep_config():
    with pytest.raises(ValueError):
        SweepConfig(9)
    with pytest.raises(ValueError):
        SweepConfig(2, trials=0)
    B = random_network(SweepConfig(3, seed=1), 4)
    assert all(B[i, i] == 0 for i in range(1, 4))
    assert all(x * 10 == int(x * 10) and 0 <= x <= 3 for row in B.beta for x in row)
    rep = run_conjecture_sweep(SweepConfig(1, trials=20))
    assert 1 <= rep.min_support <= rep.mean_support <= rep.max_support <= 2
    assert all(r.gdof >= 0 for r in rep.rows)


def test_oracle_check(capsys, files):
    code, out, err = run(capsys, "oracle-check", "--trials", 5)
    assert code == 0 and len(out.strip().splitlines()) == 6 and "convergence" in err
    code, out, _ = run(capsys, "oracle-check", "--network", files[0])
    assert out.splitlines()[0] == "snr,gdof_estimate"
    assert float(out.splitlines()[-1].split(",")[1]) == pytest.approx(1.8, abs=0.05)
