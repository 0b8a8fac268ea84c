"""Support projectors and the parallel/perpendicular split of two supports.

For states ``rho1`` and ``rho2`` the support of ``rho1`` is split against the
support of ``rho2``:

* ``H1_par``  spanned by ``P2 |r_l>``           (projector ``P1_par``)
* ``H1_perp`` spanned by ``(I - P2) |r_l>``     (projector ``P1_perp``)
* ``P1_bar = P1_par + P1_perp - P1``            (kernel of rho1 inside H1_par + H1_perp)
* ``P2_prime = I - P1_par - P1_perp``

so that ``I = P1_perp + P1_par + P2_prime = P1 + P1_bar + P2_prime``.  The
mirrored family (``P2_par``, ``P2_perp``, ``P2_bar``, ``P1_prime``) swaps the
roles of the two states.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike

from .exceptions import DimensionError
from .hermitian import (
    DEFAULT_TOL,
    CMatrix,
    DensityOperator,
    fidelity,
    spectral_decompose,
)

__all__ = [
    "SubspaceDecomposition",
    "OverlapStats",
    "orthonormalize",
    "support_projector",
    "parallel_basis",
    "perpendicular_basis",
    "decompose",
    "overlap_stats",
]


def _proj(basis: np.ndarray) -> CMatrix:
    return basis @ basis.conj().T


def orthonormalize(vectors: ArrayLike, tol: float = DEFAULT_TOL.rank) -> CMatrix:
    """Classical Gram-Schmidt with one re-orthogonalization pass.

    Columns whose norm after deflation is ``<= tol`` are dropped, so the number
    of returned columns is the numerical rank of the input.
    """
    vecs = np.asarray(vectors, dtype=np.complex128)
    dim = vecs.shape[0]
    basis: list[np.ndarray] = []
    for k in range(vecs.shape[1]):
        h = vecs[:, k].copy()
        for _ in range(2):
            for b in basis:
                h -= b * np.vdot(b, h)
        norm = np.linalg.norm(h)
        if norm > tol:
            basis.append(h / norm)
    if not basis:
        return np.zeros((dim, 0), dtype=np.complex128)
    return np.column_stack(basis)


def support_projector(rho: DensityOperator) -> tuple[CMatrix, int]:
    """Projector onto the support of ``rho`` and its rank."""
    return _proj(rho.support), rho.rank


def parallel_basis(rho1: DensityOperator, p2: ArrayLike, tol: float = DEFAULT_TOL.rank) -> CMatrix:
    """Orthonormal basis of the span of ``P2 |r_l>`` over the eigenvectors of ``rho1``.

    May have zero columns, which happens exactly when the supports are orthogonal.
    """
    return orthonormalize(np.asarray(p2) @ rho1.support, tol)


def perpendicular_basis(
    rho1: DensityOperator, p2: ArrayLike, tol: float = DEFAULT_TOL.rank
) -> CMatrix:
    """Orthonormal basis of the span of ``(I - P2) |r_l>``."""
    p2 = np.asarray(p2)
    return orthonormalize(rho1.support - p2 @ rho1.support, tol)


def _range_basis(p: np.ndarray) -> CMatrix:
    # p is a projector up to round-off: keep eigenvectors with eigenvalue ~1
    if p.shape[0] == 0:
        return p
    w, v = spectral_decompose(0.5 * (p + p.conj().T))
    return v[:, w > 0.5]


@dataclass(frozen=True)
class _Split:
    support: CMatrix
    par: CMatrix
    perp: CMatrix
    bar: CMatrix
    prime: CMatrix  # basis of the *other* state's residual space


def _split(rho_a: DensityOperator, rho_b: DensityOperator, tol: float) -> _Split:
    dim = rho_a.dim
    pb = _proj(rho_b.support)
    par = parallel_basis(rho_a, pb, tol)
    perp = perpendicular_basis(rho_a, pb, tol)
    p10 = _proj(par) + _proj(perp)
    bar = _range_basis(p10 - _proj(rho_a.support))
    prime = _range_basis(np.eye(dim) - p10)
    return _Split(rho_a.support, par, perp, bar, prime)


@dataclass(frozen=True, eq=False)
class SubspaceDecomposition:
    """Orthonormal bases of every subspace in both decompositions of the identity.

    Projectors (``P1``, ``P1_par``, ...) are exposed as cached properties built
    from the stored bases; dimensions are the column counts.
    """

    dim: int
    side1: _Split
    side2: _Split

    # bases -------------------------------------------------------------
    @property
    def basis_par1(self) -> CMatrix:
        return self.side1.par

    @property
    def basis_perp1(self) -> CMatrix:
        return self.side1.perp

    @property
    def basis_bar1(self) -> CMatrix:
        return self.side1.bar

    @property
    def basis_prime2(self) -> CMatrix:
        return self.side1.prime

    @property
    def basis_par2(self) -> CMatrix:
        return self.side2.par

    @property
    def basis_perp2(self) -> CMatrix:
        return self.side2.perp

    @property
    def basis_bar2(self) -> CMatrix:
        return self.side2.bar

    @property
    def basis_prime1(self) -> CMatrix:
        return self.side2.prime

    # projectors --------------------------------------------------------
    @cached_property
    def P1(self) -> CMatrix:
        return _proj(self.side1.support)

    @cached_property
    def P2(self) -> CMatrix:
        return _proj(self.side2.support)

    @cached_property
    def P1_par(self) -> CMatrix:
        return _proj(self.side1.par)

    @cached_property
    def P1_perp(self) -> CMatrix:
        return _proj(self.side1.perp)

    @cached_property
    def P1_bar(self) -> CMatrix:
        return _proj(self.side1.bar)

    @cached_property
    def P2_prime(self) -> CMatrix:
        return _proj(self.side1.prime)

    @cached_property
    def P2_par(self) -> CMatrix:
        return _proj(self.side2.par)

    @cached_property
    def P2_perp(self) -> CMatrix:
        return _proj(self.side2.perp)

    @cached_property
    def P2_bar(self) -> CMatrix:
        return _proj(self.side2.bar)

    @cached_property
    def P1_prime(self) -> CMatrix:
        return _proj(self.side2.prime)

    # dimensions --------------------------------------------------------
    @property
    def d1(self) -> int:
        return self.side1.support.shape[1]

    @property
    def d2(self) -> int:
        return self.side2.support.shape[1]

    @property
    def d1_par(self) -> int:
        return self.side1.par.shape[1]

    @property
    def d1_perp(self) -> int:
        return self.side1.perp.shape[1]

    @property
    def d1_bar(self) -> int:
        return self.side1.bar.shape[1]

    @property
    def d2_prime(self) -> int:
        return self.side1.prime.shape[1]

    @property
    def d2_par(self) -> int:
        return self.side2.par.shape[1]

    @property
    def d2_perp(self) -> int:
        return self.side2.perp.shape[1]

    @property
    def d2_bar(self) -> int:
        return self.side2.bar.shape[1]

    @property
    def d1_prime(self) -> int:
        return self.side2.prime.shape[1]

    @property
    def discriminable(self) -> bool:
        """False when the supports coincide and every unambiguous POVM fails surely."""
        return self.d1_perp > 0 or self.d2_perp > 0

    def mirrored(self) -> "SubspaceDecomposition":
        """The same decomposition with the roles of the two states exchanged."""
        return SubspaceDecomposition(self.dim, self.side2, self.side1)

    def projectors(self) -> dict[str, CMatrix]:
        names = ("P1", "P2", "P1_par", "P1_perp", "P1_bar", "P2_prime",
                 "P2_par", "P2_perp", "P2_bar", "P1_prime")
        return {n: getattr(self, n) for n in names}


def decompose(
    rho1: DensityOperator, rho2: DensityOperator, tol: float = DEFAULT_TOL.rank
) -> SubspaceDecomposition:
    """Build both projector families for the pair ``(rho1, rho2)``.

    Degenerate geometry (orthogonal or identical supports) is encoded in the
    subspace dimensions; no error is raised for it.
    """
    if rho1.dim != rho2.dim:
        raise DimensionError(f"dimension mismatch: {rho1.dim} vs {rho2.dim}")
    return SubspaceDecomposition(rho1.dim, _split(rho1, rho2, tol), _split(rho2, rho1, tol))


@dataclass(frozen=True)
class OverlapStats:
    """The fidelity and the four trace overlaps that govern the problem."""

    F: float
    t_p1_r2: float
    t_p2_r1: float
    t_p1par_r2: float
    t_p2par_r1: float

    def as_dict(self) -> dict[str, float]:
        return {
            "F": self.F,
            "Tr(P1 rho2)": self.t_p1_r2,
            "Tr(P2 rho1)": self.t_p2_r1,
            "Tr(P1par rho2)": self.t_p1par_r2,
            "Tr(P2par rho1)": self.t_p2par_r1,
        }


def _expect(p: np.ndarray, rho: DensityOperator) -> float:
    return min(max(float(np.real(np.vdot(p, rho.matrix))), 0.0), 1.0)


def overlap_stats(
    decomp: SubspaceDecomposition, rho1: DensityOperator, rho2: DensityOperator
) -> OverlapStats:
    return OverlapStats(
        F=fidelity(rho1, rho2),
        t_p1_r2=_expect(decomp.P1, rho2),
        t_p2_r1=_expect(decomp.P2, rho1),
        t_p1par_r2=_expect(decomp.P1_par, rho2),
        t_p2par_r1=_expect(decomp.P2_par, rho1),
    )
