"""Reaching the fidelity bound for a pair of rank-2 states in four dimensions."""

import numpy as np

from unambiguous import DiscriminationProblem, analyze, rank_d_2d_pair, simulate

# %% Two rank-2 states; each eigenvector of rho2 sits at 45 degrees to one of rho1
rho1, rho2 = rank_d_2d_pair([0.5, 0.5])
problem = DiscriminationProblem.from_matrices(rho1, rho2, eta1=0.5)
report = analyze(problem)

print(f"fidelity          {report.stats.F:.6f}")
print(f"fidelity bound Q0 {report.q0:.6f}")
print(f"best projective   {report.upper_bound:.6f}")
print(f"optimal POVM      {report.optimal.q:.6f}  ({report.optimal.povm.provenance.value})")
print(f"numerical oracle  {report.oracle_result.q:.6f}")

# %% The inconclusive operator is not a projector: two eigenvalues sit at 2 sqrt2 - 2
print("Pi0 spectrum", np.round(np.linalg.eigvalsh(report.optimal.povm.Pi0), 6))

# %% Sweep the priors across the window [1/sqrt2, sqrt2] of sqrt(eta2/eta1)
for ratio in (0.5, 0.75, 1.0, 1.5, 2.0):
    rep = analyze(problem.with_priors(1 / (1 + ratio)), run_oracle=False)
    print(f"eta2/eta1={ratio:4.2f}  Q={rep.optimal.q:.6f}  "
          f"Q_N1par={rep.q_n1_par:.6f}  Q_N2par={rep.q_n2_par:.6f}  "
          f"alpha={rep.optimal.povm.parameters['alpha']:.4f}")

# %% Sampling the optimal measurement never produces a wrong conclusion
res = simulate(problem, report.optimal.povm, 100_000, seed=2024)
print(f"empirical failure {res.empirical_failure:.5f} +- {res.failure_sigma(report.optimal.q):.5f}, "
      f"errors {res.empirical_error}")
