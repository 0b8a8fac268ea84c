"""Unambiguous discrimination of two mixed quantum states.

Typical use::

    >>> import numpy as np
    >>> from unambiguous import DiscriminationProblem, analyze, rank_d_2d_pair
    >>> rho1, rho2 = rank_d_2d_pair([0.5, 0.5])
    >>> report = analyze(DiscriminationProblem.from_matrices(rho1, rho2, 0.5), run_oracle=False)
    >>> round(report.optimal.q, 6)
    0.707107
"""

from .analysis import AnalysisReport, Solution, analyze, comparison_q_opt, solve_state_comparison
from .constructions import (
    comparison_states,
    pure_state_pair,
    random_density_matrix,
    random_unitary,
    rank_d_2d_pair,
    single_overlap_pair,
)
from .exceptions import (
    DimensionError,
    DiscriminationError,
    EigensolverError,
    InfeasibleProjection,
    InvalidPovm,
    NotHermitian,
    NotPositiveSemidefinite,
    PriorsOutsideWindow,
    StructureMismatch,
    TraceError,
    ValidationError,
)
from .hermitian import (
    DEFAULT_TOL,
    DensityOperator,
    DiscriminationProblem,
    Tolerances,
    assert_density,
    fidelity,
    psd_sqrt,
    spectral_decompose,
)
from .oracle import OracleResult, OracleSettings, optimize
from .simulate import SimulationResult, simulate
from .special import (
    SpecialCase,
    recognize_special_case,
    solve_rank_d_2d,
    solve_single_overlap,
    solve_state_filtering,
)
from .strategies import (
    Povm,
    PovmVerdict,
    Provenance,
    ReachabilityWindow,
    balance_defect,
    failure_probability,
    fidelity_bound,
    fidelity_bound_window,
    residual_state_defect,
    verify_povm,
    von_neumann_strategies,
)
from .subspaces import OverlapStats, SubspaceDecomposition, decompose, overlap_stats

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
