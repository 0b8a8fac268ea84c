"""Full analysis of a discrimination problem and the state-comparison application."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from .constructions import comparison_states
from .exceptions import PriorsOutsideWindow, StructureMismatch, ValidationError
from .hermitian import DiscriminationProblem
from .oracle import OracleResult, OracleSettings, optimize
from .special import (
    SpecialCase,
    recognize_special_case,
    solve_rank_d_2d,
    solve_single_overlap,
    solve_state_filtering,
)
from .strategies import (
    Povm,
    Provenance,
    ReachabilityWindow,
    failure_probability,
    fidelity_bound,
    fidelity_bound_window,
    von_neumann_strategies,
)
from .subspaces import OverlapStats, SubspaceDecomposition, decompose, overlap_stats

__all__ = ["Solution", "AnalysisReport", "analyze", "solve_state_comparison", "comparison_q_opt"]


class Solution(NamedTuple):
    povm: Povm
    q: float


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    """Everything known about one problem.

    ``optimal`` is set only when a closed form applies and is certified; when
    it is absent, ``upper_bound`` (the better of the two parallel von Neumann
    strategies) and the oracle value are the best available numbers and are
    not certified.
    """

    problem: DiscriminationProblem
    decomposition: SubspaceDecomposition
    stats: OverlapStats
    window: ReachabilityWindow
    strategies: dict[Provenance, Solution]
    q0: float
    special_case: SpecialCase
    optimal: Solution | None = None
    oracle_result: OracleResult | None = None
    branch: str | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def q_n1(self) -> float:
        return self.strategies[Provenance.N1].q

    @property
    def q_n1_par(self) -> float:
        return self.strategies[Provenance.N1_PAR].q

    @property
    def q_n2(self) -> float:
        return self.strategies[Provenance.N2].q

    @property
    def q_n2_par(self) -> float:
        return self.strategies[Provenance.N2_PAR].q

    @property
    def upper_bound(self) -> float:
        return min(self.q_n1_par, self.q_n2_par)

    @property
    def discriminable(self) -> bool:
        return self.decomposition.discriminable

    @property
    def best_q(self) -> float:
        if self.optimal is not None:
            return self.optimal.q
        if self.oracle_result is not None:
            return min(self.oracle_result.q, self.upper_bound)
        return self.upper_bound

    def to_dict(self) -> dict[str, Any]:
        d = self.decomposition
        w = self.window
        out: dict[str, Any] = {
            "eta1": self.problem.eta1,
            "eta2": self.problem.eta2,
            "dim": self.problem.dim,
            "ranks": [d.d1, d.d2],
            "dims": {
                "d1_par": d.d1_par, "d1_perp": d.d1_perp, "d1_bar": d.d1_bar,
                "d2_par": d.d2_par, "d2_perp": d.d2_perp, "d2_bar": d.d2_bar,
            },
            "stats": self.stats.as_dict(),
            "discriminable": self.discriminable,
            "q0": self.q0,
            "q_n1": self.q_n1,
            "q_n1_par": self.q_n1_par,
            "q_n2": self.q_n2,
            "q_n2_par": self.q_n2_par,
            "window": {
                "lower": w.lower,
                "upper": None if math.isinf(w.upper) else w.upper,
                "ratio": w.ratio,
                "contains_ratio": w.contains_ratio,
                "nonempty": w.nonempty,
                "general_lower_bound": w.general_lower_bound,
            },
            "special_case": self.special_case.value,
            "optimal_q": None if self.optimal is None else self.optimal.q,
            "optimal_provenance": None if self.optimal is None else self.optimal.povm.provenance.value,
            "oracle_q": None if self.oracle_result is None else self.oracle_result.q,
            "branch": self.branch,
            "notes": list(self.notes),
        }
        if self.optimal is not None:
            out["optimal_parameters"] = dict(self.optimal.povm.parameters)
        return out


_SOLVERS = {
    SpecialCase.FILTERING: lambda p, d, s: solve_state_filtering(p, d, s),
    SpecialCase.SINGLE_OVERLAP: lambda p, d, s: solve_single_overlap(p, d, s),
    SpecialCase.RANK_D_2D: lambda p, d, s: solve_rank_d_2d(p, d),
}


def analyze(
    problem: DiscriminationProblem,
    *,
    run_oracle: bool = True,
    oracle_settings: OracleSettings | None = None,
) -> AnalysisReport:
    """Decompose, evaluate every strategy and bound, and solve in closed form if possible."""
    decomp = decompose(problem.rho1, problem.rho2)
    stats = overlap_stats(decomp, problem.rho1, problem.rho2)
    window = fidelity_bound_window(stats, problem)
    strategies = {k: Solution(*v) for k, v in von_neumann_strategies(problem, decomp).items()}
    case = recognize_special_case(problem, decomp, stats)
    notes: list[str] = []
    if not decomp.discriminable:
        notes.append("indiscriminable: supports coincide, every unambiguous POVM fails surely")

    optimal = None
    solver = _SOLVERS.get(case)
    if solver is not None and decomp.discriminable:
        try:
            optimal = Solution(*solver(problem, decomp, stats))
        except PriorsOutsideWindow as exc:
            notes.append(f"closed form not applicable: {exc}")
        except StructureMismatch as exc:
            notes.append(f"closed form not applicable: {exc}")
    if optimal is None:
        notes.append("no certified optimum; upper bound is min(Q_N1par, Q_N2par)")

    oracle_result = None
    if run_oracle:
        oracle_result = optimize(problem, decomp, oracle_settings)

    return AnalysisReport(
        problem=problem,
        decomposition=decomp,
        stats=stats,
        window=window,
        strategies=strategies,
        q0=fidelity_bound(problem, stats.F),
        special_case=case,
        optimal=optimal,
        oracle_result=oracle_result,
        notes=tuple(notes),
    )


def comparison_q_opt(F: float, eta1: float) -> tuple[float, str]:
    """Minimum failure probability for comparing two pure states with overlap modulus ``F``.

    ``eta1`` is the probability that both systems were prepared alike.  Returns
    the value and which branch of the piecewise formula applied.
    """
    eta2 = 1.0 - eta1
    eta_min, eta_max = sorted((eta1, eta2))
    if math.sqrt(eta_min / eta_max) >= 2 * F / (1 + F**2):
        return 2 * math.sqrt(eta1 * eta2) * F, "first branch"
    return eta_max * 2 * F**2 / (1 + F**2) + eta_min * (1 + F**2) / 2, "second branch"


def solve_state_comparison(
    psi1: ArrayLike,
    psi2: ArrayLike,
    p1: float,
    *,
    run_oracle: bool = False,
    oracle_settings: OracleSettings | None = None,
) -> AnalysisReport:
    """Optimal unambiguous comparison of two copies, each prepared in ``psi1`` or ``psi2``.

    ``p1`` is the prior of ``psi1``.  The two hypotheses ("same" and
    "different") are the two-copy mixed states of
    :func:`~unambiguous.constructions.comparison_states`, with priors
    ``p1**2 + p2**2`` and ``2 p1 p2``.
    """
    if not 0.0 < p1 < 1.0:
        raise ValidationError(f"p1 must lie in (0, 1), got {p1!r}")
    rho1, rho2 = comparison_states(psi1, psi2)
    p2 = 1.0 - p1
    problem = DiscriminationProblem.from_matrices(rho1, rho2, p1**2 + p2**2)
    base = analyze(problem, run_oracle=run_oracle, oracle_settings=oracle_settings)

    a = np.asarray(psi1, complex).ravel()
    b = np.asarray(psi2, complex).ravel()
    F = min(abs(complex(np.vdot(a, b))), 1.0)
    q_formula, branch = comparison_q_opt(F, problem.eta1)

    if branch == "first branch" and base.optimal is not None:
        povm = base.optimal.povm
    else:
        # the better parallel von Neumann strategy attains the second branch
        key = Provenance.N1_PAR if base.q_n1_par <= base.q_n2_par else Provenance.N2_PAR
        povm = base.strategies[key].povm
    povm = Povm(povm.Pi0, povm.Pi1, povm.Pi2, Provenance.COMPARISON,
                {**povm.parameters, "F": F})
    q = failure_probability(povm, problem)
    notes = list(base.notes)
    if abs(q - q_formula) > 1e-8:
        notes.append(f"POVM failure probability {q:.12g} differs from formula {q_formula:.12g}")
    return AnalysisReport(
        problem=problem,
        decomposition=base.decomposition,
        stats=base.stats,
        window=base.window,
        strategies=base.strategies,
        q0=base.q0,
        special_case=base.special_case,
        optimal=Solution(povm, q),
        oracle_result=base.oracle_result,
        branch=branch,
        notes=tuple(n for n in notes if not n.startswith("no certified optimum")),
    )
