import math

import numpy as np
import pytest

from unambiguous import (
    DiscriminationProblem,
    SpecialCase,
    ValidationError,
    analyze,
    comparison_q_opt,
    comparison_states,
    optimize,
    rank_d_2d_pair,
    solve_state_comparison,
    verify_povm,
)

from conftest import cvxpy_q_min, random_problem

# frozen after evaluating the piecewise formula and cross-checking with the
# barrier oracle and a generic SDP solver
Q_COMPARISON_06_09 = 0.5565176470588235


def test_report_rank_d_2d():
    rep = analyze(DiscriminationProblem.from_matrices(*rank_d_2d_pair([0.5, 0.5]), 0.5))
    assert rep.special_case is SpecialCase.RANK_D_2D
    assert rep.optimal.q == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert rep.best_q == rep.optimal.q
    d = rep.to_dict()
    assert d["special_case"] == "RANK_D_2D" and d["optimal_parameters"]["alpha"] == pytest.approx(2 - math.sqrt(2))


def test_report_generic_is_not_certified(rng):
    p = random_problem(rng, dim=4, r1=2, r2=2)
    rep = analyze(p, run_oracle=False)
    assert rep.optimal is None
    assert any("no certified optimum" in n for n in rep.notes)
    assert rep.best_q == rep.upper_bound


def test_report_identical_states():
    rho = np.diag([0.6, 0.4, 0, 0]).astype(complex)
    rep = analyze(DiscriminationProblem.from_matrices(rho, rho, 0.5), run_oracle=False)
    assert not rep.discriminable
    assert any("indiscriminable" in n for n in rep.notes)
    assert rep.upper_bound == pytest.approx(1.0)


@pytest.mark.parametrize(
    "F, eta1, expected, branch",
    [
        (0.6, 0.5, 0.6, "first branch"),
        (0.0, 0.5, 0.0, "first branch"),
        (0.6, 0.82, Q_COMPARISON_06_09, "second branch"),
    ],
)
def test_comparison_formula(F, eta1, expected, branch):
    q, b = comparison_q_opt(F, eta1)
    assert q == pytest.approx(expected, abs=1e-12)
    assert b == branch


def test_comparison_second_branch_against_generic_sdp():
    r1, r2 = comparison_states([1, 0], [0.6, 0.8])
    assert cvxpy_q_min(r1, r2, 0.82) == pytest.approx(Q_COMPARISON_06_09, abs=1e-6)


@pytest.mark.parametrize("p1", [0.5, 0.7, 0.9, 0.2])
@pytest.mark.parametrize("F", [0.3, 0.6, 0.85])
def test_comparison_report_matches_oracle(F, p1):
    psi2 = np.array([F, math.sqrt(1 - F * F) * 1j])
    rep = solve_state_comparison([1, 0], psi2, p1, run_oracle=True)
    q_formula, branch = comparison_q_opt(F, rep.problem.eta1)
    assert rep.branch == branch
    assert rep.optimal.q == pytest.approx(q_formula, abs=1e-9)
    assert rep.oracle_result.q == pytest.approx(q_formula, abs=1e-7)
    assert verify_povm(rep.optimal.povm, rep.problem).ok


def test_comparison_rejects_bad_input():
    with pytest.raises(ValidationError):
        solve_state_comparison([1, 0], [1, 1], 0.5)
    with pytest.raises(ValidationError):
        solve_state_comparison([1, 0], [0, 1], 1.0)
