"""Detection operators, their verification, and the von Neumann strategies."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError
from .hermitian import CMatrix, DiscriminationProblem, hermitian_part
from .subspaces import OverlapStats, SubspaceDecomposition

__all__ = [
    "Provenance",
    "Povm",
    "PovmVerdict",
    "ReachabilityWindow",
    "failure_probability",
    "fidelity_bound",
    "verify_povm",
    "balance_defect",
    "residual_state_defect",
    "von_neumann_strategies",
    "fidelity_bound_window",
]


class Provenance(str, enum.Enum):
    N1 = "N1"
    N1_PAR = "N1_PAR"
    N2 = "N2"
    N2_PAR = "N2_PAR"
    RANK_D_2D = "RANK_D_2D"
    SINGLE_OVERLAP = "SINGLE_OVERLAP"
    COMPARISON = "COMPARISON"
    FILTERING = "FILTERING"
    ORACLE = "ORACLE"


@dataclass(frozen=True, eq=False)
class Povm:
    """Detection operators: ``Pi1`` infers state 1, ``Pi2`` state 2, ``Pi0`` fails."""

    Pi0: CMatrix
    Pi1: CMatrix
    Pi2: CMatrix
    provenance: Provenance
    parameters: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_detectors(
        cls, pi1: np.ndarray, pi2: np.ndarray, provenance: Provenance, **parameters: float
    ) -> "Povm":
        pi1 = hermitian_part(pi1, tol=np.inf)
        pi2 = hermitian_part(pi2, tol=np.inf)
        pi0 = np.eye(pi1.shape[0]) - pi1 - pi2
        return cls(pi0, pi1, pi2, Provenance(provenance), dict(parameters))

    @property
    def dim(self) -> int:
        return self.Pi0.shape[0]

    @property
    def elements(self) -> tuple[CMatrix, CMatrix, CMatrix]:
        return self.Pi0, self.Pi1, self.Pi2


def _tr(a: np.ndarray, b: np.ndarray) -> float:
    # Tr(a b) for Hermitian a, b
    return float(np.real(np.vdot(a, b)))


def failure_probability(povm: Povm, problem: DiscriminationProblem) -> float:
    """Prior-weighted probability of the inconclusive outcome."""
    if povm.dim != problem.dim:
        raise DimensionError(f"POVM dimension {povm.dim} != problem dimension {problem.dim}")
    q = problem.eta1 * _tr(problem.rho1.matrix, povm.Pi0) + problem.eta2 * _tr(
        problem.rho2.matrix, povm.Pi0
    )
    return min(max(q, 0.0), 1.0)


def fidelity_bound(problem: DiscriminationProblem, F: float) -> float:
    """``2 sqrt(eta1 eta2) F``, the smallest failure probability any POVM can reach."""
    return 2.0 * math.sqrt(problem.eta1 * problem.eta2) * F


@dataclass(frozen=True)
class PovmVerdict:
    complete: bool
    psd: bool
    unambiguous: bool
    failure_prob: float
    completeness_defect: float
    min_eigenvalue: float
    ambiguity_defect: float

    @property
    def ok(self) -> bool:
        return self.complete and self.psd and self.unambiguous


def verify_povm(povm: Povm, problem: DiscriminationProblem, tol: float = 1e-8) -> PovmVerdict:
    """Check completeness, positivity and the no-error conditions ``rho1 Pi2 = rho2 Pi1 = 0``."""
    eye = np.eye(povm.dim)
    completeness = float(np.max(np.abs(povm.Pi0 + povm.Pi1 + povm.Pi2 - eye)))
    min_eig = min(float(np.linalg.eigvalsh(hermitian_part(p, np.inf))[0]) for p in povm.elements)
    ambiguity = max(
        float(np.max(np.abs(problem.rho1.matrix @ povm.Pi2))),
        float(np.max(np.abs(problem.rho2.matrix @ povm.Pi1))),
    )
    return PovmVerdict(
        complete=completeness <= tol,
        psd=min_eig >= -tol,
        unambiguous=ambiguity <= tol,
        failure_prob=failure_probability(povm, problem),
        completeness_defect=completeness,
        min_eigenvalue=min_eig,
        ambiguity_defect=ambiguity,
    )


def balance_defect(povm: Povm, problem: DiscriminationProblem, F: float) -> float:
    """Largest deviation of ``eta_k Tr(rho_k Pi0)`` from ``sqrt(eta1 eta2) F``.

    Zero exactly when the inconclusive weight is split evenly between the two
    states at the level the fidelity bound requires.
    """
    target = math.sqrt(problem.eta1 * problem.eta2) * F
    return max(
        abs(problem.eta1 * _tr(problem.rho1.matrix, povm.Pi0) - target),
        abs(problem.eta2 * _tr(problem.rho2.matrix, povm.Pi0) - target),
    )


def residual_state_defect(
    povm: Povm, problem: DiscriminationProblem, zero_tol: float = 1e-12
) -> float:
    """Max entry of ``sqrt(Pi0) (eta2 rho2 - eta1 rho1) sqrt(Pi0)``.

    It vanishes when both states are mapped onto the same (unnormalized)
    post-measurement state on failure.  Eigenvalues of ``Pi0`` below
    ``zero_tol`` are round-off and are set to zero before taking the root.
    """
    w, v = np.linalg.eigh(hermitian_part(povm.Pi0, np.inf))
    w = np.where(w > zero_tol, w, 0.0)
    root = (v * np.sqrt(w)) @ v.conj().T
    diff = problem.eta2 * problem.rho2.matrix - problem.eta1 * problem.rho1.matrix
    return float(np.max(np.abs(root @ diff @ root)))


def von_neumann_strategies(
    problem: DiscriminationProblem, decomp: SubspaceDecomposition
) -> dict[Provenance, tuple[Povm, float]]:
    """The four projective unambiguous measurements.

    ``N1`` never concludes state 1 and fails on ``P1``; ``N1_PAR`` concludes
    state 1 on ``P1_perp`` and fails on ``P1_par``.  ``N2``/``N2_PAR`` mirror them.
    """
    d = decomp
    zero = np.zeros((d.dim, d.dim), dtype=complex)
    povms = {
        Provenance.N1: Povm.from_detectors(zero, d.P1_bar + d.P2_prime, Provenance.N1),
        Provenance.N1_PAR: Povm.from_detectors(d.P1_perp, d.P2_prime, Provenance.N1_PAR),
        Provenance.N2: Povm.from_detectors(d.P2_bar + d.P1_prime, zero, Provenance.N2),
        Provenance.N2_PAR: Povm.from_detectors(d.P1_prime, d.P2_perp, Provenance.N2_PAR),
    }
    return {k: (p, failure_probability(p, problem)) for k, p in povms.items()}


@dataclass(frozen=True)
class ReachabilityWindow:
    """Interval of ``sqrt(eta2/eta1)`` in which the fidelity bound can be attained.

    ``lower``/``upper`` are the necessary-condition endpoints.
    ``general_lower_bound`` holds for all priors: ``Q0`` when ``sqrt(eta1/eta2)``
    lies in ``fidelity_window = (F, 1/F)``, else ``eta_min + eta_max F**2``.
    """

    lower: float
    upper: float
    ratio: float
    contains_ratio: bool
    general_lower_bound: float
    fidelity_window: tuple[float, float]

    @property
    def nonempty(self) -> bool:
        return self.lower <= self.upper * (1 + 1e-9)


def fidelity_bound_window(
    stats: OverlapStats, problem: DiscriminationProblem, tol: float = 1e-12
) -> ReachabilityWindow:
    F = stats.F
    y = problem.prior_ratio
    eta_min, eta_max = sorted((problem.eta1, problem.eta2))
    if F <= 0.0:
        lower, upper = 0.0, math.inf
        f_window = (0.0, math.inf)
        bound = 0.0
    else:
        lower = stats.t_p2_r1 / F
        upper = F / stats.t_p1_r2 if stats.t_p1_r2 > 0 else math.inf
        f_window = (F, 1.0 / F)
        if F <= 1.0 / y <= 1.0 / F:
            bound = fidelity_bound(problem, F)
        else:
            bound = eta_min + eta_max * F**2
    contains = lower * (1 - tol) - tol <= y <= upper * (1 + tol) + tol
    return ReachabilityWindow(lower, upper, y, contains, bound, f_window)
