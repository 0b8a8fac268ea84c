"""Random mixed-state pairs: bounds, projective strategies and the numerical optimum."""

import numpy as np

from unambiguous import DiscriminationProblem, analyze, random_density_matrix

rng = np.random.default_rng(5)
print(f"{'dim':>3} {'ranks':>5} {'Q0':>8} {'lower':>8} {'oracle':>8} {'N1par':>8} {'N2par':>8}  case")
for _ in range(8):
    dim = int(rng.integers(3, 7))
    r1, r2 = rng.integers(1, 4, size=2)
    p = DiscriminationProblem.from_matrices(
        random_density_matrix(dim, int(r1), rng), random_density_matrix(dim, int(r2), rng),
        float(rng.uniform(0.2, 0.8)),
    )
    rep = analyze(p)
    print(f"{dim:>3} {r1:>2},{r2:<2} {rep.q0:8.5f} {rep.window.general_lower_bound:8.5f} "
          f"{rep.oracle_result.q:8.5f} {rep.q_n1_par:8.5f} {rep.q_n2_par:8.5f}  {rep.special_case.value}")
