import numpy as np
import pytest

from unambiguous import (
    DiscriminationProblem,
    PriorsOutsideWindow,
    SpecialCase,
    StructureMismatch,
    decompose,
    fidelity,
    overlap_stats,
    pure_state_pair,
    random_density_matrix,
    rank_d_2d_pair,
    recognize_special_case,
    single_overlap_pair,
    solve_rank_d_2d,
    solve_single_overlap,
    solve_state_filtering,
    verify_povm,
    von_neumann_strategies,
    Provenance,
)


def _setup(r1, r2, eta1):
    p = DiscriminationProblem.from_matrices(r1, r2, eta1)
    return p, decompose(p.rho1, p.rho2)


def test_recognition(rng):
    p, d = _setup(*rank_d_2d_pair([0.5, 0.5], rng=rng), 0.5)
    assert recognize_special_case(p, d) is SpecialCase.RANK_D_2D
    p, d = _setup(*single_overlap_pair([0.6, 0.4], [0.7, 0.3], 0.5, dim=5, rng=rng), 0.5)
    assert recognize_special_case(p, d) is SpecialCase.SINGLE_OVERLAP
    p, d = _setup(*pure_state_pair(0.3, dim=3, rng=rng), 0.5)
    assert recognize_special_case(p, d) is SpecialCase.FILTERING
    p, d = _setup(random_density_matrix(4, 2, rng), random_density_matrix(4, 2, rng), 0.5)
    assert recognize_special_case(p, d) is SpecialCase.NONE


def test_unequal_spectra_not_rank_d_2d():
    p, d = _setup(*rank_d_2d_pair([0.7, 0.3], [0.5, 0.5]), 0.5)
    assert recognize_special_case(p, d) is SpecialCase.NONE
    with pytest.raises(StructureMismatch):
        solve_rank_d_2d(p, d)


@pytest.mark.parametrize("eta1", [0.35, 0.5, 0.6])
def test_rank_d_2d_reaches_bound(rng, eta1):
    p, d = _setup(*rank_d_2d_pair([0.5, 0.3, 0.2], rng=rng), eta1)
    povm, q = solve_rank_d_2d(p, d)
    assert verify_povm(povm, p).ok
    assert q == pytest.approx(2 * np.sqrt(p.eta1 * p.eta2) / np.sqrt(2), abs=1e-10)


def test_rank_d_2d_outside_window():
    p, d = _setup(*rank_d_2d_pair([0.5, 0.5]), 0.2)
    with pytest.raises(PriorsOutsideWindow):
        solve_rank_d_2d(p, d)


def test_single_overlap_value():
    p, d = _setup(*single_overlap_pair([0.6, 0.4], [0.7, 0.3], 0.5), 0.5)
    F = np.sqrt(0.6 * 0.7) * 0.5
    assert fidelity(p.rho1, p.rho2) == pytest.approx(F, abs=1e-12)
    povm, q = solve_single_overlap(p, d)
    assert verify_povm(povm, p).ok
    assert q == pytest.approx(F, abs=1e-10)


def test_single_overlap_lower_edge_equals_n1par():
    r1, r2 = single_overlap_pair([0.6, 0.4], [0.7, 0.3], 0.5)
    F = np.sqrt(0.42) * 0.5
    y = 0.15 / F
    eta1 = 1 / (1 + y**2)
    p, d = _setup(r1, r2, eta1)
    _, q = solve_single_overlap(p, d)
    q_n1par = von_neumann_strategies(p, d)[Provenance.N1_PAR][1]
    assert q == pytest.approx(q_n1par, abs=1e-9)


def test_single_overlap_complex_phase(rng):
    p, d = _setup(*single_overlap_pair([0.5, 0.3, 0.2], [0.8, 0.2], 0.4 * np.exp(0.7j), dim=6, rng=rng), 0.45)
    povm, q = solve_single_overlap(p, d)
    assert verify_povm(povm, p).ok
    assert q == pytest.approx(2 * np.sqrt(p.eta1 * p.eta2) * fidelity(p.rho1, p.rho2), abs=1e-10)


def test_single_overlap_orthogonal():
    p, d = _setup(*single_overlap_pair([0.6, 0.4], [0.7, 0.3], 0.0), 0.5)
    _, q = solve_single_overlap(p, d)
    assert q == pytest.approx(0.0, abs=1e-12)


def test_filtering_example_dim3():
    plus = np.array([1, 1, 0]) / np.sqrt(2)
    rho1 = np.diag([1.0, 0, 0]).astype(complex)
    rho2 = 0.5 * np.outer(plus, plus) + 0.5 * np.diag([0, 0, 1.0])
    p, d = _setup(rho1, rho2, 0.5)
    povm, q = solve_state_filtering(p, d)
    assert verify_povm(povm, p).ok
    assert q == pytest.approx(fidelity(rho1, rho2), abs=1e-10)
    assert q == pytest.approx(0.5, abs=1e-10)


def test_filtering_mixed_first(rng):
    rho_mixed = random_density_matrix(4, 2, rng)
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi /= np.linalg.norm(psi)
    pure = np.outer(psi, psi.conj())
    p, d = _setup(rho_mixed, pure, 0.5)
    st = overlap_stats(d, p.rho1, p.rho2)
    try:
        povm, q = solve_state_filtering(p, d, st)
    except PriorsOutsideWindow:
        pytest.skip("random draw outside window")
    assert verify_povm(povm, p).ok
    assert q == pytest.approx(st.F, abs=1e-9)


def test_filtering_pure_inside_support():
    rho1 = np.diag([1.0, 0, 0]).astype(complex)
    rho2 = np.diag([0.5, 0.5, 0]).astype(complex)
    p, d = _setup(rho1, rho2, 0.5)
    with pytest.raises(StructureMismatch):
        solve_state_filtering(p, d)


@pytest.mark.parametrize("c", [0.0, 0.2, 0.7 * np.exp(1j)])
def test_pure_pair_bound(c):
    p, d = _setup(*pure_state_pair(c), 0.5)
    povm, q = solve_state_filtering(p, d)
    assert verify_povm(povm, p).ok
    assert q == pytest.approx(abs(c), abs=1e-10)
