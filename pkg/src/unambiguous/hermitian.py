"""Hermitian matrix primitives: validation, spectra, square roots and fidelity.

Operators are plain complex ``numpy`` arrays.  Anything that is validated once
and reused (density operators, discrimination problems) is wrapped in a frozen
dataclass holding read-only arrays, so instances can be shared freely.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import (
    DimensionError,
    EigensolverError,
    NotHermitian,
    NotPositiveSemidefinite,
    TraceError,
    ValidationError,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "DensityOperator",
    "DiscriminationProblem",
    "as_matrix",
    "hermitian_part",
    "spectral_decompose",
    "psd_sqrt",
    "fidelity",
    "assert_density",
    "is_projector",
]

CMatrix = NDArray[np.complex128]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by every validation step.

    ``rank`` is relative to the largest eigenvalue; all others are absolute.
    """

    herm: float = 1e-10
    psd: float = 1e-9
    trace: float = 1e-9
    rank: float = 1e-10
    orth: float = 1e-10
    recon: float = 1e-9


DEFAULT_TOL = Tolerances()


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _fingerprint(m: np.ndarray) -> str:
    digest = hashlib.sha1(np.ascontiguousarray(m).tobytes()).hexdigest()[:12]
    return f"shape={m.shape} trace={np.trace(m):.6g} fro={np.linalg.norm(m):.6g} sha1={digest}"


def as_matrix(m: ArrayLike) -> CMatrix:
    """Coerce ``m`` to a finite square complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def hermitian_part(m: ArrayLike, tol: float = DEFAULT_TOL.herm) -> CMatrix:
    """Return ``(M + M^H) / 2`` after checking ``max|M - M^H| <= tol``."""
    a = as_matrix(m)
    defect = float(np.max(np.abs(a - a.conj().T)))
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    return 0.5 * (a + a.conj().T)


def spectral_decompose(h: ArrayLike) -> tuple[NDArray[np.float64], CMatrix]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.

    Returns
    -------
    eigenvalues : ndarray of float, shape (n,)
    eigenvectors : ndarray of complex, shape (n, n)
        Orthonormal columns, ``h = V @ diag(w) @ V^H``.
    """
    a = as_matrix(h)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh failed to converge ({_fingerprint(a)})") from exc
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(h: ArrayLike, tol_psd: float = DEFAULT_TOL.psd) -> CMatrix:
    """Positive square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol_psd, 0)`` are treated as round-off and clamped to
    zero; anything more negative raises :class:`NotPositiveSemidefinite`.
    """
    w, v = spectral_decompose(hermitian_part(h, tol=np.inf))
    if w[-1] < -tol_psd:
        raise NotPositiveSemidefinite(f"eigenvalue {w[-1]:.3e} below -{tol_psd:.1e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.conj().T


def is_projector(p: ArrayLike, tol: float = DEFAULT_TOL.recon) -> bool:
    a = np.asarray(p)
    return bool(
        np.max(np.abs(a - a.conj().T), initial=0.0) <= tol
        and np.max(np.abs(a @ a - a), initial=0.0) <= tol
    )


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A validated density matrix with its spectral data.

    Attributes
    ----------
    matrix : ndarray
        Symmetrized, trace-normalized matrix.
    eigenvalues : ndarray
        All eigenvalues, descending.
    eigenvectors : ndarray
        Matching orthonormal eigenvectors as columns.
    rank : int
        Number of eigenvalues above ``tol.rank`` times the largest one.
    """

    matrix: CMatrix
    eigenvalues: NDArray[np.float64]
    eigenvectors: CMatrix
    rank: int
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectrum(self) -> NDArray[np.float64]:
        """The retained (nonzero) eigenvalues."""
        return self.eigenvalues[: self.rank]

    @property
    def support(self) -> CMatrix:
        """Orthonormal basis of the support, one column per retained eigenvalue."""
        return self.eigenvectors[:, : self.rank]

    @property
    def is_pure(self) -> bool:
        return self.rank == 1

    def sqrt(self) -> CMatrix:
        u = self.support
        return (u * np.sqrt(self.spectrum)) @ u.conj().T

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @classmethod
    def pure(cls, psi: ArrayLike, tol: Tolerances = DEFAULT_TOL) -> "DensityOperator":
        v = np.asarray(psi, dtype=np.complex128).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValidationError("zero state vector")
        v = v / norm
        return assert_density(np.outer(v, v.conj()), tol)


def assert_density(m: ArrayLike, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """Validate ``m`` as a density matrix and return its spectral representation.

    A trace defect up to ``tol.trace`` is silently renormalized away; larger
    defects, negative eigenvalues beyond ``tol.psd`` and non-Hermitian input
    are rejected.
    """
    if isinstance(m, DensityOperator):
        return m
    h = hermitian_part(m, tol.herm)
    w, v = spectral_decompose(h)
    if w[-1] < -tol.psd:
        raise NotPositiveSemidefinite(f"eigenvalue {w[-1]:.3e} below -{tol.psd:.1e}")
    tr = float(np.sum(w))
    if abs(tr - 1.0) > tol.trace:
        raise TraceError(f"trace {tr:.12g} differs from 1 by more than {tol.trace:.1e}")
    h = h / tr
    w = w / tr
    rank = int(np.count_nonzero(w > tol.rank * w[0]))
    return DensityOperator(_frozen(h), _frozen(w), _frozen(v), rank, tol)


def fidelity(rho1: DensityOperator | ArrayLike, rho2: DensityOperator | ArrayLike) -> float:
    """Root fidelity ``Tr sqrt(sqrt(rho2) rho1 sqrt(rho2))``, clipped to [0, 1].

    Evaluated as the sum of singular values of ``sqrt(rho1) sqrt(rho2)``, which
    has the same value but avoids rooting round-off noise in the product.
    """
    r1, r2 = assert_density(rho1), assert_density(rho2)
    if r1.dim != r2.dim:
        raise DimensionError(f"dimension mismatch: {r1.dim} vs {r2.dim}")
    core = (np.sqrt(r1.spectrum)[:, None] * (r1.support.conj().T @ r2.support)) * np.sqrt(
        r2.spectrum
    )
    f = float(np.sum(np.linalg.svd(core, compute_uv=False)))
    return min(max(f, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class DiscriminationProblem:
    """Two density operators with the prior probability of the first.

    ``eta2`` is always derived as ``1 - eta1``.
    """

    rho1: DensityOperator
    rho2: DensityOperator
    eta1: float

    def __post_init__(self):
        if self.rho1.dim != self.rho2.dim:
            raise DimensionError(f"dimension mismatch: {self.rho1.dim} vs {self.rho2.dim}")
        eta1 = float(self.eta1)
        if not 0.0 < eta1 < 1.0:
            raise ValidationError(f"eta1 must lie in (0, 1), got {eta1!r}")
        object.__setattr__(self, "eta1", eta1)

    @property
    def eta2(self) -> float:
        return 1.0 - self.eta1

    @property
    def dim(self) -> int:
        return self.rho1.dim

    @property
    def prior_ratio(self) -> float:
        """``sqrt(eta2 / eta1)``, the quantity the reachability window constrains."""
        return float(np.sqrt(self.eta2 / self.eta1))

    @classmethod
    def from_matrices(
        cls, rho1: ArrayLike, rho2: ArrayLike, eta1: float, tol: Tolerances = DEFAULT_TOL
    ) -> "DiscriminationProblem":
        return cls(assert_density(rho1, tol), assert_density(rho2, tol), eta1)

    def with_priors(self, eta1: float) -> "DiscriminationProblem":
        return DiscriminationProblem(self.rho1, self.rho2, eta1)

    def swapped(self) -> "DiscriminationProblem":
        return DiscriminationProblem(self.rho2, self.rho1, self.eta2)
