"""Generators for random and structured pairs of density matrices.

These produce raw complex arrays; wrap them with
:meth:`DiscriminationProblem.from_matrices` to validate.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import unitary_group

from .exceptions import ValidationError

__all__ = [
    "random_unitary",
    "random_density_matrix",
    "pure_state_pair",
    "rank_d_2d_pair",
    "single_overlap_pair",
    "comparison_states",
]


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def random_density_matrix(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Random density matrix of the given rank (Ginibre construction)."""
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank must lie in [1, {dim}], got {rank}")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _rotate(mats, rng):
    if rng is None:
        return mats
    u = random_unitary(mats[0].shape[0], rng)
    return tuple(u @ m @ u.conj().T for m in mats)


def pure_state_pair(overlap: complex, dim: int = 2, rng: np.random.Generator | None = None):
    """Two pure-state density matrices with ``<psi1|psi2> = overlap``."""
    c = complex(overlap)
    if abs(c) > 1:
        raise ValidationError("|overlap| must not exceed 1")
    psi1 = np.zeros(dim, complex)
    psi2 = np.zeros(dim, complex)
    psi1[0] = 1.0
    psi2[0] = c
    psi2[1] = np.sqrt(1.0 - abs(c) ** 2)
    return _rotate((np.outer(psi1, psi1.conj()), np.outer(psi2, psi2.conj())), rng)


def rank_d_2d_pair(r: ArrayLike, s: ArrayLike | None = None, rng: np.random.Generator | None = None):
    """Rank-d states on a 2d-dimensional space with ``|s_i> = (|r_i> + |rbar_i>)/sqrt 2``.

    With ``s`` omitted the two eigenvalue lists coincide, which is the case the
    closed-form solver handles.
    """
    r = np.asarray(r, float)
    s = r if s is None else np.asarray(s, float)
    d = len(r)
    if len(s) != d:
        raise ValidationError("eigenvalue lists must have equal length")
    eye = np.eye(2 * d)
    rho1 = np.zeros((2 * d, 2 * d), complex)
    rho2 = np.zeros((2 * d, 2 * d), complex)
    for i in range(d):
        ri, rbar = eye[:, i], eye[:, d + i]
        si = (ri + rbar) / np.sqrt(2)
        rho1 += r[i] * np.outer(ri, ri)
        rho2 += s[i] * np.outer(si, si)
    return _rotate((rho1 / r.sum(), rho2 / s.sum()), rng)


def single_overlap_pair(
    r: ArrayLike,
    s: ArrayLike,
    a: complex,
    dim: int | None = None,
    rng: np.random.Generator | None = None,
):
    """States whose eigenvectors overlap only through ``<r_1|s_1> = a``.

    The default dimension ``len(r) + len(s)`` is the smallest that fits.
    """
    r = np.asarray(r, float)
    s = np.asarray(s, float)
    d1, d2 = len(r), len(s)
    dim = d1 + d2 if dim is None else dim
    if dim < d1 + d2:
        raise ValidationError(f"need dim >= {d1 + d2}")
    if abs(a) >= 1:
        raise ValidationError("|a| must be < 1")
    eye = np.eye(dim, dtype=complex)
    r_vecs = [eye[:, 0]] + [eye[:, 1 + l] for l in range(d1 - 1)]
    s1 = a * eye[:, 0] + np.sqrt(1 - abs(a) ** 2) * eye[:, d1]
    s_vecs = [s1] + [eye[:, d1 + m] for m in range(1, d2)]
    rho1 = sum(w * np.outer(v, v.conj()) for w, v in zip(r, r_vecs))
    rho2 = sum(w * np.outer(v, v.conj()) for w, v in zip(s, s_vecs))
    return _rotate((rho1 / r.sum(), rho2 / s.sum()), rng)


def comparison_states(psi1: ArrayLike, psi2: ArrayLike):
    """Two-copy states for comparing whether two systems were prepared alike.

    ``rho1`` mixes the equal preparations ``|psi_i psi_i>``; ``rho2`` mixes the
    unequal ones ``|psi_1 psi_2>`` and ``|psi_2 psi_1>``.
    """
    a = np.asarray(psi1, complex).ravel()
    b = np.asarray(psi2, complex).ravel()
    if a.shape != b.shape:
        raise ValidationError("state vectors must have equal length")
    for v in (a, b):
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValidationError("state vectors must be normalized")

    def ket(x, y):
        return np.kron(x, y)

    def proj(v):
        return np.outer(v, v.conj())

    rho1 = 0.5 * (proj(ket(a, a)) + proj(ket(b, b)))
    rho2 = 0.5 * (proj(ket(a, b)) + proj(ket(b, a)))
    return rho1, rho2
