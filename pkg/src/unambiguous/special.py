"""Closed-form optimal measurements for structured pairs of states.

Three families are recognized:

* ``FILTERING``      one of the states is pure;
* ``SINGLE_OVERLAP`` the eigenbases overlap in a single pair, ``<r_1|s_1> = a``;
* ``RANK_D_2D``      rank-d states on a 2d-dimensional space with equal spectra
                     and ``|s_i> = (|r_i> + |rbar_i>)/sqrt 2``.

Inside the reachability window each solver returns a POVM whose failure
probability equals the fidelity bound.  At the window edges the coefficients
hit 0 or 1 and the POVM turns into one of the projective strategies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import PriorsOutsideWindow, StructureMismatch
from .hermitian import DiscriminationProblem
from .strategies import Povm, Provenance, failure_probability
from .subspaces import OverlapStats, SubspaceDecomposition, overlap_stats

__all__ = [
    "SpecialCase",
    "SingleOverlapStructure",
    "recognize_special_case",
    "single_overlap_structure",
    "is_rank_d_2d",
    "solve_rank_d_2d",
    "solve_single_overlap",
    "solve_state_filtering",
]

STRUCTURE_TOL = 1e-9
WINDOW_RTOL = 1e-9


class SpecialCase(str, enum.Enum):
    FILTERING = "FILTERING"
    SINGLE_OVERLAP = "SINGLE_OVERLAP"
    RANK_D_2D = "RANK_D_2D"
    NONE = "NONE"


@dataclass(frozen=True)
class SingleOverlapStructure:
    """Eigenvectors ``r1vec``, ``s1vec`` carrying the only overlap ``a = <r1vec|s1vec>``."""

    r1vec: np.ndarray
    s1vec: np.ndarray
    r1: float
    s1: float
    a: complex


def _is_eigvec(rho: np.ndarray, v: np.ndarray, tol: float) -> bool:
    w = rho @ v
    lam = np.vdot(v, w)
    return float(np.linalg.norm(w - lam * v)) <= tol


def single_overlap_structure(
    problem: DiscriminationProblem, tol: float = STRUCTURE_TOL, allow_zero: bool = False
) -> SingleOverlapStructure | None:
    """Find the overlapping eigenvector pair, or ``None`` if there is none.

    The cross-Gram matrix ``<r_l|s_m>`` has a single nonzero entry in some pair
    of eigenbases iff ``P1 P2`` has rank one and its singular vectors are
    eigenvectors of the respective states.  Checking it this way does not
    depend on how degenerate eigenspaces happened to be diagonalized.
    """
    u1, u2 = problem.rho1.support, problem.rho2.support
    x, sv, yh = np.linalg.svd(u1.conj().T @ u2)
    n_nonzero = int(np.count_nonzero(sv > tol))
    if n_nonzero > 1 or (n_nonzero == 0 and not allow_zero):
        return None
    r1vec = u1 @ x[:, 0]
    s1vec = u2 @ yh[0].conj()
    if not (_is_eigvec(problem.rho1.matrix, r1vec, tol) and _is_eigvec(problem.rho2.matrix, s1vec, tol)):
        return None
    a = complex(np.vdot(r1vec, s1vec))
    if abs(a) >= 1 - tol:
        return None
    r1 = float(np.real(np.vdot(r1vec, problem.rho1.matrix @ r1vec)))
    s1 = float(np.real(np.vdot(s1vec, problem.rho2.matrix @ s1vec)))
    return SingleOverlapStructure(r1vec, s1vec, r1, s1, a)


def is_rank_d_2d(
    problem: DiscriminationProblem, decomp: SubspaceDecomposition, tol: float = STRUCTURE_TOL
) -> bool:
    """Equal-spectrum rank-d pair on 2d dimensions with 45-degree eigenvector overlaps.

    Equivalent basis-free conditions: ``P1 P2 P1 = P1/2`` and
    ``2 P1 rho2 P1 = rho1`` (and the mirror), which force ``<r_i|s_j> = delta_ij/sqrt 2``
    with matching eigenvalues.
    """
    d = decomp.d1
    if d < 1 or decomp.d2 != d or decomp.dim != 2 * d or decomp.d2_prime != 0:
        return False
    p1, p2 = decomp.P1, decomp.P2
    rho1, rho2 = problem.rho1.matrix, problem.rho2.matrix
    checks = (
        p1 @ p2 @ p1 - 0.5 * p1,
        p2 @ p1 @ p2 - 0.5 * p2,
        2 * p1 @ rho2 @ p1 - rho1,
        2 * p2 @ rho1 @ p2 - rho2,
    )
    return all(float(np.max(np.abs(c))) <= tol for c in checks)


def recognize_special_case(
    problem: DiscriminationProblem,
    decomp: SubspaceDecomposition,
    stats: OverlapStats | None = None,
    tol: float = STRUCTURE_TOL,
) -> SpecialCase:
    """Classify the pair; the first matching case in the order FILTERING,
    SINGLE_OVERLAP, RANK_D_2D wins."""
    if decomp.d1 == 1 or decomp.d2 == 1:
        return SpecialCase.FILTERING
    if single_overlap_structure(problem, tol) is not None:
        return SpecialCase.SINGLE_OVERLAP
    if is_rank_d_2d(problem, decomp, tol):
        return SpecialCase.RANK_D_2D
    return SpecialCase.NONE


def _check_window(y: float, lower: float, upper: float, what: str) -> None:
    if y < lower * (1 - WINDOW_RTOL) or y > upper * (1 + WINDOW_RTOL):
        raise PriorsOutsideWindow(
            f"{what}: sqrt(eta2/eta1) = {y:.9g} outside [{lower:.9g}, {upper:.9g}]"
        )


def _clip01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def solve_rank_d_2d(
    problem: DiscriminationProblem, decomp: SubspaceDecomposition
) -> tuple[Povm, float]:
    """Optimal POVM ``Pi1 = alpha P1_perp``, ``Pi2 = beta P2_perp`` with
    ``alpha = 2 - sqrt(2 eta2/eta1)`` and ``beta = 2 - sqrt(2 eta1/eta2)``.

    Valid for ``1/sqrt 2 <= sqrt(eta2/eta1) <= sqrt 2``.
    """
    if not is_rank_d_2d(problem, decomp):
        raise StructureMismatch("not an equal-spectrum rank-d pair on 2d dimensions")
    y = problem.prior_ratio
    _check_window(y, 1 / math.sqrt(2), math.sqrt(2), "rank-d/2d")
    alpha = _clip01(2.0 - math.sqrt(2.0) * y)
    beta = _clip01(2.0 - math.sqrt(2.0) / y)
    povm = Povm.from_detectors(
        alpha * decomp.P1_perp, beta * decomp.P2_perp, Provenance.RANK_D_2D, alpha=alpha, beta=beta
    )
    return povm, failure_probability(povm, problem)


def solve_single_overlap(
    problem: DiscriminationProblem,
    decomp: SubspaceDecomposition,
    stats: OverlapStats | None = None,
) -> tuple[Povm, float]:
    """Optimal POVM when only ``<r_1|s_1> = a`` is nonzero.

    ``Pi1`` is the projector on ``r_2 .. r_d1`` plus a weighted projector on
    ``(I - P2)|r_1>``; ``Pi2`` is built the same way from ``(I - P1)|s_1>``,
    with the rest of the space outside ``rho1``'s reach added to it.
    """
    st = single_overlap_structure(problem, allow_zero=True)
    if st is None:
        raise StructureMismatch("eigenbases overlap in more than one pair")
    stats = stats or overlap_stats(decomp, problem.rho1, problem.rho2)
    F, y = stats.F, problem.prior_ratio
    if F > 0:
        _check_window(y, stats.t_p2_r1 / F, F / stats.t_p1_r2, "single overlap")
    a = st.a
    norm2 = 1.0 - abs(a) ** 2
    v = st.r1vec - np.conj(a) * st.s1vec
    w = st.s1vec - a * st.r1vec
    v_proj = np.outer(v, v.conj()) / norm2
    w_proj = np.outer(w, w.conj()) / norm2
    c1 = _clip01((1.0 - y * F / st.r1) / norm2)
    c2 = _clip01((1.0 - F / (y * st.s1)) / norm2)
    r_rest = decomp.P1 - np.outer(st.r1vec, st.r1vec.conj())
    kernel1_rest = np.eye(decomp.dim) - decomp.P1 - w_proj
    pi1 = c1 * v_proj + r_rest
    pi2 = c2 * w_proj + kernel1_rest
    povm = Povm.from_detectors(
        pi1, pi2, Provenance.SINGLE_OVERLAP, alpha=c1, beta=c2, a_abs=abs(a), r1=st.r1, s1=st.s1
    )
    return povm, failure_probability(povm, problem)


def _solve_filtering_pure_first(
    problem: DiscriminationProblem, decomp: SubspaceDecomposition, stats: OverlapStats
) -> Povm:
    F, y = stats.F, problem.prior_ratio
    if F <= STRUCTURE_TOL:
        return Povm.from_detectors(decomp.P1_perp, decomp.P2_prime, Provenance.FILTERING, alpha=1.0, beta=0.0)
    if decomp.d1_perp == 0:
        raise StructureMismatch("the pure state lies inside the support of the mixed state")
    n2 = stats.t_p2_r1  # squared norm of the projection of |r_1> onto supp(rho2)
    _check_window(y, n2 / F, 1.0 / F, "filtering")
    c1 = _clip01((1.0 - y * F) / (1.0 - n2))
    c2 = _clip01((1.0 - n2 / (y * F)) / (1.0 - n2))
    return Povm.from_detectors(
        c1 * decomp.P1_perp,
        c2 * decomp.P1_bar + decomp.P2_prime,
        Provenance.FILTERING,
        alpha=c1,
        beta=c2,
    )


def solve_state_filtering(
    problem: DiscriminationProblem,
    decomp: SubspaceDecomposition,
    stats: OverlapStats | None = None,
) -> tuple[Povm, float]:
    """Optimal POVM for a pure state against an arbitrary state.

    Either state may be the pure one; if it is ``rho2`` the problem is solved
    with the roles exchanged and the detectors swapped back.
    """
    if decomp.d1 == 1:
        stats = stats or overlap_stats(decomp, problem.rho1, problem.rho2)
        povm = _solve_filtering_pure_first(problem, decomp, stats)
    elif decomp.d2 == 1:
        sub, sub_decomp = problem.swapped(), decomp.mirrored()
        sub_stats = overlap_stats(sub_decomp, sub.rho1, sub.rho2)
        inner = _solve_filtering_pure_first(sub, sub_decomp, sub_stats)
        povm = Povm(
            inner.Pi0,
            inner.Pi2,
            inner.Pi1,
            Provenance.FILTERING,
            {"alpha": inner.parameters["beta"], "beta": inner.parameters["alpha"]},
        )
    else:
        raise StructureMismatch("neither state is pure")
    return povm, failure_probability(povm, problem)
