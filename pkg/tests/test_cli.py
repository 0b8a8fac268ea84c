import json
from importlib import resources

import pytest

from unambiguous.cli import main

FIX = resources.files("unambiguous") / "fixtures"


def fx(name):
    return str(FIX / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_rank2(capsys):
    code, out, _ = run(capsys, "analyze", fx("rank2_dim4.json"))
    assert code == 0
    assert "F 0.707107" in out and "Q_opt 0.707107 (certified" in out
    assert "special case RANK_D_2D" in out


def test_analyze_identical_flags_indiscriminable(capsys):
    code, out, _ = run(capsys, "analyze", fx("identical.json"))
    assert code == 0 and "indiscriminable" in out
    code, out, _ = run(capsys, "analyze", fx("identical.json"), "--format", "json")
    assert json.loads(out)["q_opt"] == 1.0


def test_analyze_single_overlap_window(capsys):
    _, out, _ = run(capsys, "analyze", fx("single_overlap.json"))
    # upper edge is F / Tr(P1 rho2) = sqrt(0.42)/2 / 0.175
    assert "window [0.46291, 1.85164]" in out


def test_analyze_formats(capsys, tmp_path):
    dest = tmp_path / "r.csv"
    code, out, _ = run(capsys, "analyze", fx("rank2_dim4.json"), "--format", "csv", "--out", str(dest))
    assert code == 0 and out == ""
    rows = dest.read_text().splitlines()
    assert rows[0] == "key,value" and any(r.startswith("q0,") for r in rows)


@pytest.mark.parametrize("name", ["rank2_dim4.json", "single_overlap.json", "identical.json", "comparison_F0.6_p0.9.json"])
def test_dump_round_trip(capsys, tmp_path, name):
    dump = tmp_path / "p.json"
    _, first, _ = run(capsys, "analyze", fx(name), "--format", "json", "--dump-problem", str(dump))
    _, second, _ = run(capsys, "analyze", str(dump), "--format", "json")
    assert first == second


def test_optimize_pure_pair(capsys, tmp_path):
    povm = tmp_path / "povm.json"
    code, out, _ = run(capsys, "optimize", fx("pure_pair_0.5.json"), "--format", "json", "--dump-povm", str(povm))
    assert code == 0
    assert json.loads(out)["q"] == pytest.approx(0.5, abs=1e-6)
    assert set(json.loads(povm.read_text())) >= {"Pi0", "Pi1", "Pi2"}


def test_optimize_deterministic(capsys):
    argv = ("optimize", fx("single_overlap.json"), "--seed", "11", "--restarts", "3", "--iters", "500")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_optimize_comparison_fixture(capsys):
    _, out, _ = run(capsys, "optimize", fx("comparison_F0.6_p0.9.json"), "--format", "json")
    assert json.loads(out)["q"] == pytest.approx(0.5565176470588235, abs=1e-8)


def test_simulate_single_trial(capsys):
    code, out, _ = run(capsys, "simulate", fx("rank2_dim4.json"), "--strategy", "n1", "--trials", "1")
    assert code == 0
    assert sum(line.startswith("trial ") for line in out.splitlines()) == 1
    assert "errors 0" in out


def test_simulate_optimal_within_three_sigma(capsys):
    _, out, _ = run(capsys, "simulate", fx("rank2_dim4.json"), "--trials", "100000", "--seed", "4", "--format", "json")
    d = json.loads(out)
    assert d["empirical_error"] == 0
    assert abs(d["empirical_failure"] - d["analytic_q"]) <= 3 * d["sigma"]


def test_simulate_bad_strategy_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", fx("rank2_dim4.json"), "--strategy", "best"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_compare(capsys):
    _, out, _ = run(capsys, "compare", "--psi1", fx("psi_0.json"), "--psi2", fx("psi_F0.6.json"), "--p1", "0.5")
    assert "Q_opt 0.6 " in out
    _, out, _ = run(capsys, "compare", "--psi1", fx("psi_0.json"), "--psi2", fx("psi_F0.6.json"), "--p1", "0.9")
    assert "Q_opt 0.556518" in out and "branch second branch" in out
    _, out, _ = run(capsys, "compare", "--psi1", fx("psi_0.json"), "--psi2", fx("psi_1.json"), "--p1", "0.3")
    assert "Q_opt 0 " in out


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"eta1": 0.5,\n "rho1": [[1, 0], [0, 0]],\n "rho2": [[1, 0], [0')
    code, out, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "line 3" in err and out == ""
    bad.write_text(json.dumps({"eta1": 0.5, "rho1": [[1, 0], [0, 0]], "rho2": [[1, 0], [0, "x"]]}))
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "rho2" in err and "row 1" in err
    bad.write_text(json.dumps({"eta1": 0.5, "rho1": [[1, 0], [0, 0]], "rho2": [[0.5, 0], [0, 0.2]]}))
    assert run(capsys, "analyze", str(bad))[0] == 2
