"""Numerical minimization of the failure probability over unambiguous POVMs.

Every unambiguous POVM with no wasted inconclusive weight can be written as

    Pi1 = V A V^H,            V: orthonormal basis of H1_perp
    Pi2 = R B R^H + P2_prime, R: orthonormal basis of P1_bar

with Hermitian coefficient matrices ``A >= 0``, ``B >= 0`` and
``Pi0 = I - Pi1 - Pi2 >= 0``.  The failure probability is linear in ``(A, B)``
and the constraints are linear matrix inequalities, so the problem is a small
semidefinite program.  It is solved here with a primal log-barrier method:
Newton centering steps on

    t * Q(A, B) - log det A - log det B - log det (W^H Pi0 W)

(``W`` a basis of ``H1_par + H1_perp``, the only place ``Pi0`` can be nonzero)
for an increasing sequence of ``t``.  The final duality-gap bound is
``m / t`` with ``m`` the total size of the three blocks.

``parameterization="full"`` drops the structural assumptions and searches over
all ``Pi1`` supported on ``ker rho2`` and ``Pi2`` supported on ``ker rho1``;
it is slower and exists to audit the structured search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InfeasibleProjection
from .hermitian import DiscriminationProblem, spectral_decompose
from .strategies import Povm, Provenance, failure_probability, verify_povm
from .subspaces import SubspaceDecomposition, decompose

__all__ = ["OracleSettings", "OracleResult", "optimize"]


@dataclass(frozen=True)
class OracleSettings:
    """Knobs for :func:`optimize`.

    restarts
        Number of independent starting points; the best result wins, lowest
        index on ties.
    max_iterations
        Cap on the total number of Newton steps per restart.
    gap_tolerance
        Target for the duality-gap bound ``m / t``.
    barrier_growth
        Factor by which ``t`` grows between centering rounds.
    seed
        Seeds the starting points; identical settings give identical results.
    """

    restarts: int = 2
    max_iterations: int = 2000
    gap_tolerance: float = 1e-11
    barrier_growth: float = 50.0
    seed: int = 20240601

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if self.gap_tolerance <= 0 or self.barrier_growth <= 1:
            raise ValueError("gap_tolerance must be > 0 and barrier_growth > 1")


@dataclass(frozen=True)
class OracleResult:
    povm: Povm
    q: float
    certified_feasible: bool
    iterations_used: int
    gap_bound: float


def _hermitian_basis(k: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) real basis of k x k Hermitian matrices, shape (k*k, k, k)."""
    out = []
    for i in range(k):
        e = np.zeros((k, k), complex)
        e[i, i] = 1.0
        out.append(e)
    s = 1 / math.sqrt(2)
    for i in range(k):
        for j in range(i + 1, k):
            e = np.zeros((k, k), complex)
            e[i, j] = e[j, i] = s
            out.append(e)
            e = np.zeros((k, k), complex)
            e[i, j], e[j, i] = -1j * s, 1j * s
            out.append(e)
    return np.array(out).reshape(k * k, k, k)


class _Sdp:
    """Minimize ``q0 - c @ x`` subject to ``F_b(x) = C_b + sum_p x_p D_bp >= 0`` for each block."""

    def __init__(self, q0, c, blocks):
        self.q0 = q0
        self.c = c
        self.blocks = [(C, D) for C, D in blocks if C.shape[0] > 0]
        self.m = sum(C.shape[0] for C, _ in self.blocks)

    def objective(self, x):
        return self.q0 - self.c @ x

    def _chols(self, x):
        out = []
        for C, D in self.blocks:
            M = C + np.tensordot(x, D, axes=1)
            try:
                out.append(np.linalg.cholesky(M))
            except np.linalg.LinAlgError:
                return None
        return out

    def logdet(self, x):
        chols = self._chols(x)
        if chols is None:
            return -math.inf
        return float(sum(2 * np.sum(np.log(np.real(np.diag(L)))) for L in chols))

    def barrier_change(self, x, step, s, t, logdet0):
        """Change of ``t*Q - logdet`` along ``s*step``, evaluated without cancellation."""
        ld = self.logdet(x + s * step)
        if ld == -math.inf:
            return math.inf
        return -t * s * float(self.c @ step) - (ld - logdet0)

    def max_step(self, x, step):
        """Largest s with every block still positive definite at ``x + s * step``."""
        s_max = math.inf
        for (C, D), L in zip(self.blocks, self._chols(x)):
            dm = np.tensordot(step, D, axes=1)
            y = np.linalg.solve(L, dm)
            z = np.linalg.solve(L, y.conj().T)
            lam = np.linalg.eigvalsh(0.5 * (z + z.conj().T))[0]
            if lam < 0:
                s_max = min(s_max, -1.0 / lam)
        return s_max

    def newton(self, x, t):
        n = x.size
        g = -t * self.c
        H = np.zeros((n, n))
        chols = self._chols(x)
        for (C, D), L in zip(self.blocks, chols):
            k = C.shape[0]
            # S_p = L^{-1} D_p L^{-H}
            Y = np.linalg.solve(L, D)  # (n, k, k) broadcast
            S = np.linalg.solve(L, np.conj(np.swapaxes(Y, 1, 2)))
            S = np.conj(np.swapaxes(S, 1, 2))
            flat = S.reshape(n, k * k)
            g -= np.real(np.trace(S, axis1=1, axis2=2))
            H += np.real(flat @ flat.conj().T)
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(H, g, rcond=None)[0]
        return step, g


def _run(sdp: _Sdp, x0: np.ndarray, settings: OracleSettings) -> tuple[np.ndarray, int, float]:
    x = x0.copy()
    t = 1.0
    iters = 0
    while True:
        # centering
        for _ in range(100):
            if iters >= settings.max_iterations:
                break
            step, g = sdp.newton(x, t)
            decrement = float(-g @ step)
            if decrement / 2 <= 1e-8:
                break
            ld0 = sdp.logdet(x)
            s = min(1.0, 0.99 * sdp.max_step(x, step))
            while s > 1e-14:
                if sdp.barrier_change(x, step, s, t, ld0) <= -0.25 * s * decrement:
                    break
                s *= 0.5
            else:
                break
            x_new = x + s * step
            iters += 1
            if np.array_equal(x_new, x):
                break
            x = x_new
        gap = sdp.m / t
        if gap < settings.gap_tolerance or iters >= settings.max_iterations:
            return x, iters, gap
        t *= settings.barrier_growth


def _structure(problem: DiscriminationProblem, decomp: SubspaceDecomposition, full: bool):
    dim = problem.dim
    if full:
        _, ev2 = spectral_decompose(decomp.P2)
        _, ev1 = spectral_decompose(decomp.P1)
        v = ev2[:, decomp.d2:]  # kernel of rho2
        r = ev1[:, decomp.d1:]  # kernel of rho1
        fixed2 = np.zeros((dim, dim), complex)
        w = np.eye(dim, dtype=complex)
    else:
        v = decomp.basis_perp1
        r = decomp.basis_bar1
        fixed2 = decomp.P2_prime
        w = np.hstack([decomp.basis_par1, decomp.basis_perp1])
    return v, r, fixed2, w


def _build_sdp(problem, v, r, fixed2, w):
    eta1, eta2 = problem.eta1, problem.eta2
    rho1, rho2 = problem.rho1.matrix, problem.rho2.matrix
    k1, k2, k0 = v.shape[1], r.shape[1], w.shape[1]
    g1, g2 = _hermitian_basis(k1), _hermitian_basis(k2)
    n1, n2 = k1 * k1, k2 * k2

    # operator-space images of the basis matrices
    img1 = np.einsum("ia,pab,jb->pij", v, g1, v.conj()) if n1 else np.zeros((0, problem.dim, problem.dim))
    img2 = np.einsum("ia,pab,jb->pij", r, g2, r.conj()) if n2 else np.zeros((0, problem.dim, problem.dim))

    c = np.concatenate(
        [
            eta1 * np.real(np.einsum("ij,pji->p", rho1, img1)),
            eta2 * np.real(np.einsum("ij,pji->p", rho2, img2)),
        ]
    )
    q0 = 1.0 - eta2 * float(np.real(np.vdot(fixed2, rho2)))

    n = n1 + n2
    blocks = []
    D_a = np.zeros((n, k1, k1), complex)
    D_a[:n1] = g1
    blocks.append((np.zeros((k1, k1), complex), D_a))
    D_b = np.zeros((n, k2, k2), complex)
    D_b[n1:] = g2
    blocks.append((np.zeros((k2, k2), complex), D_b))
    wh = w.conj().T
    D_0 = -np.einsum("ai,pij,jb->pab", wh, np.concatenate([img1, img2]), w)
    blocks.append((np.eye(k0, dtype=complex), D_0))
    return _Sdp(q0, c, blocks), g1, g2


def _start(n1, n2, g1, g2, rng, index):
    k1 = int(round(math.sqrt(n1)))
    k2 = int(round(math.sqrt(n2)))
    # A = eps * (I + random PSD) / norm keeps Pi0 comfortably positive
    def coords(k, g):
        if k == 0:
            return np.zeros(0)
        m = np.eye(k, dtype=complex)
        if index > 0:
            z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            m = m + z @ z.conj().T / k
        m = 0.2 * m / np.linalg.eigvalsh(m)[-1]
        return np.real(np.einsum("pab,ba->p", g, m))
    return np.concatenate([coords(k1, g1), coords(k2, g2)])


def _assemble(x, n1, g1, g2, v, r, fixed2):
    a = np.tensordot(x[:n1], g1, axes=1) if n1 else np.zeros((0, 0))
    b = np.tensordot(x[n1:], g2, axes=1) if x.size > n1 else np.zeros((0, 0))
    pi1 = v @ a @ v.conj().T if n1 else np.zeros_like(fixed2)
    pi2 = (r @ b @ r.conj().T if x.size > n1 else 0) + fixed2
    return pi1, pi2


def _project_feasible(pi1, pi2, fixed2):
    """Clip round-off negativity in Pi1/Pi2, then shrink both until Pi0 >= 0."""
    def clip(p):
        w, u = spectral_decompose(p)
        return (u * np.clip(w, 0, None)) @ u.conj().T

    pi1 = clip(pi1)
    free2 = clip(pi2 - fixed2)
    lam = np.linalg.eigvalsh(np.eye(pi1.shape[0]) - pi1 - free2 - fixed2)[0]
    if lam < 0:
        top = np.linalg.eigvalsh(pi1 + free2)[-1]
        scale = 1.0 / top if top > 0 else 1.0
        pi1, free2 = scale * pi1, scale * free2
    return pi1, free2 + fixed2


def optimize(
    problem: DiscriminationProblem,
    decomp: SubspaceDecomposition | None = None,
    settings: OracleSettings | None = None,
    parameterization: str = "structured",
) -> OracleResult:
    """Minimize the failure probability numerically.

    Raises
    ------
    InfeasibleProjection
        If the returned iterate fails POVM verification at tolerance 1e-7.
    """
    settings = settings or OracleSettings()
    decomp = decomp or decompose(problem.rho1, problem.rho2)
    if parameterization not in ("structured", "full"):
        raise ValueError(f"unknown parameterization {parameterization!r}")
    v, r, fixed2, w = _structure(problem, decomp, parameterization == "full")
    k1, k2 = v.shape[1], r.shape[1]

    if k1 + k2 == 0:
        povm = Povm.from_detectors(np.zeros_like(fixed2), fixed2, Provenance.ORACLE)
        verdict = verify_povm(povm, problem, tol=1e-7)
        return OracleResult(povm, failure_probability(povm, problem), verdict.ok, 0, 0.0)

    sdp, g1, g2 = _build_sdp(problem, v, r, fixed2, w)
    n1 = k1 * k1
    seeds = np.random.SeedSequence(settings.seed).spawn(settings.restarts)
    best = None
    total_iters = 0
    for i, ss in enumerate(seeds):
        rng = np.random.Generator(np.random.Philox(ss))
        x0 = _start(n1, k2 * k2, g1, g2, rng, i)
        x, iters, gap = _run(sdp, x0, settings)
        total_iters += iters
        q = sdp.objective(x)
        if best is None or q < best[0]:
            best = (q, x, gap)

    _, x, gap = best
    pi1, pi2 = _project_feasible(*_assemble(x, n1, g1, g2, v, r, fixed2), fixed2)
    povm = Povm.from_detectors(pi1, pi2, Provenance.ORACLE)
    verdict = verify_povm(povm, problem, tol=1e-7)
    if not verdict.ok:
        raise InfeasibleProjection(
            f"oracle iterate failed verification: completeness {verdict.completeness_defect:.2e}, "
            f"min eigenvalue {verdict.min_eigenvalue:.2e}, ambiguity {verdict.ambiguity_defect:.2e}"
        )
    return OracleResult(povm, verdict.failure_prob, True, total_iters, gap)
