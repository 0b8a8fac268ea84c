"""Monte Carlo sampling of measurement outcomes.

Each trial draws the true state from the priors and then an outcome ``k`` with
probability ``Tr(rho Pi_k)``.  Random numbers come from numpy's Philox4x64
counter-based generator; shards get independent child seeds spawned from a
``SeedSequence``, so a run is fully determined by ``(seed, shards)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidPovm, ValidationError
from .hermitian import DiscriminationProblem
from .strategies import Povm

__all__ = ["OUTCOMES", "SimulationResult", "outcome_probabilities", "simulate"]

OUTCOMES = ("infer-1", "infer-2", "inconclusive")
_ZERO = 1e-12


@dataclass(frozen=True)
class SimulationResult:
    """Outcome counts keyed by true state (1 or 2), then by outcome label."""

    trials: int
    counts: dict[int, dict[str, int]]
    seed: int
    events: np.ndarray | None = None  # (trials, 2): true state, outcome index

    @property
    def empirical_failure(self) -> float:
        return sum(c["inconclusive"] for c in self.counts.values()) / self.trials

    @property
    def empirical_error(self) -> float:
        wrong = self.counts[1]["infer-2"] + self.counts[2]["infer-1"]
        return wrong / self.trials

    def failure_sigma(self, q: float) -> float:
        """Binomial standard deviation of the failure rate if the true rate is ``q``."""
        return math.sqrt(q * (1 - q) / self.trials)


def outcome_probabilities(problem: DiscriminationProblem, povm: Povm) -> np.ndarray:
    """Row ``s`` holds ``Tr(rho_s Pi_k)`` for outcomes (infer-1, infer-2, inconclusive).

    Values below 1e-12 are treated as exact zeros; rows are renormalized.
    """
    if povm.dim != problem.dim:
        raise ValidationError("POVM and problem dimensions differ")
    probs = np.empty((2, 3))
    for s, rho in enumerate((problem.rho1.matrix, problem.rho2.matrix)):
        for k, pi in enumerate((povm.Pi1, povm.Pi2, povm.Pi0)):
            probs[s, k] = np.real(np.vdot(pi, rho))
    total = probs.sum(axis=1)
    if np.any(np.abs(total - 1.0) > 1e-6):
        raise InvalidPovm(f"outcome probabilities sum to {total.tolist()}")
    probs[probs < _ZERO] = 0.0
    return probs / probs.sum(axis=1, keepdims=True)


def _draw(n: int, eta1: float, cum: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    state = np.where(rng.random(n) < eta1, 0, 1)
    u = rng.random(n)
    outcome = np.empty(n, dtype=np.int64)
    for s in (0, 1):
        mask = state == s
        outcome[mask] = np.searchsorted(cum[s], u[mask], side="right")
    np.minimum(outcome, 2, out=outcome)
    return np.column_stack([state + 1, outcome])


def simulate(
    problem: DiscriminationProblem,
    povm: Povm,
    trials: int,
    seed: int = 0,
    *,
    shards: int = 1,
    keep_events: bool = False,
) -> SimulationResult:
    """Sample ``trials`` independent measurements of ``povm``."""
    if trials < 1:
        raise ValidationError("trials must be positive")
    if shards < 1:
        raise ValidationError("shards must be positive")
    probs = outcome_probabilities(problem, povm)
    cum = np.cumsum(probs, axis=1)
    # zero-probability outcomes must be unreachable even when u lands on a boundary
    cum[:, -1] = 1.0

    sizes = [trials // shards + (i < trials % shards) for i in range(shards)]
    children = np.random.SeedSequence(seed).spawn(shards)
    parts = [
        _draw(n, problem.eta1, cum, np.random.Generator(np.random.Philox(ss)))
        for n, ss in zip(sizes, children)
        if n > 0
    ]
    events = np.concatenate(parts)
    counts = {
        s: {label: int(np.count_nonzero((events[:, 0] == s) & (events[:, 1] == k)))
            for k, label in enumerate(OUTCOMES)}
        for s in (1, 2)
    }
    return SimulationResult(trials, counts, seed, events if keep_events else None)
