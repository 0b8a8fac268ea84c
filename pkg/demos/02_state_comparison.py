"""Comparing two systems: were they prepared in the same pure state or not?"""

import numpy as np

from unambiguous import comparison_q_opt, solve_state_comparison

psi1 = np.array([1.0, 0.0])

# %% Failure probability against the prior p1, for a few overlaps
for F in (0.2, 0.6, 0.9):
    psi2 = np.array([F, np.sqrt(1 - F**2)])
    row = []
    for p1 in (0.5, 0.7, 0.9):
        rep = solve_state_comparison(psi1, psi2, p1)
        row.append(f"p1={p1}: {rep.optimal.q:.5f} ({rep.branch.split()[0]})")
    print(f"F={F}  " + "  ".join(row))

# %% Cross-check one point against the numerical optimizer
psi2 = np.array([0.6, 0.8])
rep = solve_state_comparison(psi1, psi2, 0.9, run_oracle=True)
print("formula", comparison_q_opt(0.6, rep.problem.eta1))
print("POVM   ", rep.optimal.q)
print("oracle ", rep.oracle_result.q)
