import warnings

import numpy as np
import pytest
import scipy.linalg

from unambiguous import DiscriminationProblem, random_density_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_problem(rng, dim=None, r1=None, r2=None, eta1=None):
    dim = dim or int(rng.integers(2, 7))
    r1 = r1 or int(rng.integers(1, min(3, dim) + 1))
    r2 = r2 or int(rng.integers(1, min(3, dim) + 1))
    eta1 = eta1 if eta1 is not None else float(rng.uniform(0.05, 0.95))
    return DiscriminationProblem.from_matrices(
        random_density_matrix(dim, r1, rng), random_density_matrix(dim, r2, rng), eta1
    )


def sqrtm_fidelity(a, b):
    """Textbook fidelity through scipy's matrix square root; independent of the package."""
    sb = scipy.linalg.sqrtm(b)
    inner = scipy.linalg.sqrtm(sb @ a @ sb)
    return float(np.real(np.trace(inner)))


def cvxpy_q_min(rho1, rho2, eta1):
    """Minimal failure probability from a generic SDP solver.

    Unambiguity is built in by supporting ``Pi1`` on ``ker rho2`` and ``Pi2`` on
    ``ker rho1`` (kernels from scipy), which keeps the program strictly feasible.
    """
    cp = pytest.importorskip("cvxpy")
    n = rho1.shape[0]
    k2 = scipy.linalg.null_space(rho2, rcond=1e-10)
    k1 = scipy.linalg.null_space(rho1, rcond=1e-10)
    cons, pis = [], []
    for k in (k2, k1):
        if k.shape[1] == 0:
            pis.append(cp.Constant(np.zeros((n, n))))
            continue
        x = cp.Variable((k.shape[1], k.shape[1]), hermitian=True)
        cons.append(x >> 0)
        pis.append(k @ x @ k.conj().T)
    pi0 = cp.Constant(np.eye(n)) - pis[0] - pis[1]
    cons.append(pi0 >> 0)
    q = cp.real(eta1 * cp.trace(rho1 @ pi0) + (1 - eta1) * cp.trace(rho2 @ pi0))
    prob = cp.Problem(cp.Minimize(q), cons)
    with warnings.catch_warnings():
        # Clarabel's "may be inaccurate" notice; callers compare at 1e-6
        warnings.simplefilter("ignore", UserWarning)
        prob.solve(solver="CLARABEL")
    return float(prob.value)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
