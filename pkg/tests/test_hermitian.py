import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from unambiguous import (
    DimensionError,
    DiscriminationProblem,
    EigensolverError,
    NotHermitian,
    NotPositiveSemidefinite,
    TraceError,
    ValidationError,
    assert_density,
    fidelity,
    psd_sqrt,
    random_density_matrix,
    spectral_decompose,
)
from unambiguous.hermitian import DensityOperator, hermitian_part, is_projector

from conftest import sqrtm_fidelity

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (2, 4, 4), elements=finite))
def test_spectral_reconstruction(parts):
    m = parts[0] + 1j * parts[1]
    h = (m + m.conj().T) / 2
    w, v = spectral_decompose(h)
    assert np.all(np.diff(w) <= 1e-12)
    assert np.max(np.abs((v * w) @ v.conj().T - h)) < 1e-10 * max(1, np.max(np.abs(h)))
    assert np.max(np.abs(v.conj().T @ v - np.eye(4))) < 1e-10


def test_spectral_rejects_nonfinite():
    h = np.eye(3)
    h[0, 0] = np.nan
    with pytest.raises((EigensolverError, ValidationError)):
        spectral_decompose(h)


def test_hermitian_part_rejects_asymmetric():
    with pytest.raises(NotHermitian):
        hermitian_part(np.array([[1, 1], [0, 1]], complex))


def test_psd_sqrt_squares_back(rng):
    rho = random_density_matrix(5, 3, rng)
    s = psd_sqrt(rho)
    assert np.allclose(s @ s, rho, atol=1e-12)
    with pytest.raises(NotPositiveSemidefinite):
        psd_sqrt(np.diag([1.0, -0.1]))


def test_assert_density_validation():
    with pytest.raises(TraceError):
        assert_density(np.diag([0.5, 0.4]))
    with pytest.raises(NotPositiveSemidefinite):
        assert_density(np.diag([1.2, -0.2]))
    with pytest.raises(DimensionError):
        assert_density(np.ones((2, 3)))
    # tiny trace defects are renormalized away
    d = assert_density(np.diag([0.6, 0.4 + 5e-10]))
    assert abs(np.trace(d.matrix).real - 1) < 1e-15


def test_density_operator_rank_and_support(rng):
    d = assert_density(random_density_matrix(6, 2, rng))
    assert d.rank == 2 and d.support.shape == (6, 2)
    assert not d.is_pure
    assert DensityOperator.pure(np.array([1, 1j]) / np.sqrt(2)).is_pure


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_fidelity_matches_sqrtm(dim, r1, r2, seed):
    rng = np.random.default_rng(seed)
    a = random_density_matrix(dim, min(r1, dim), rng)
    b = random_density_matrix(dim, min(r2, dim), rng)
    f = fidelity(a, b)
    assert 0.0 <= f <= 1.0
    assert abs(f - fidelity(b, a)) < 1e-10
    assert abs(f - sqrtm_fidelity(a, b)) < 1e-6


def test_fidelity_special_values():
    p0 = np.diag([1.0, 0.0])
    assert fidelity(p0, p0) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(p0, np.diag([0.0, 1.0])) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(p0, np.eye(2) / 2) == pytest.approx(np.sqrt(0.5), abs=1e-12)
    psi = np.array([1, 1]) / np.sqrt(2)
    assert fidelity(p0, np.outer(psi, psi)) == pytest.approx(np.sqrt(0.5), abs=1e-12)
    with pytest.raises(DimensionError):
        fidelity(p0, np.eye(3) / 3)


def test_problem_priors_and_swap(rng):
    a, b = random_density_matrix(3, 2, rng), random_density_matrix(3, 1, rng)
    p = DiscriminationProblem.from_matrices(a, b, 0.3)
    assert p.eta2 == pytest.approx(0.7)
    assert p.prior_ratio == pytest.approx(np.sqrt(0.7 / 0.3))
    s = p.swapped()
    assert s.eta1 == pytest.approx(0.7) and s.rho1 is p.rho2
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ValidationError):
            p.with_priors(bad)


def test_is_projector():
    assert is_projector(np.diag([1.0, 0.0, 1.0]))
    assert not is_projector(np.diag([1.0, 0.5]))
