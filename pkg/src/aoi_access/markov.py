"""Finite discrete-time Markov chain utilities.

Small dense chains only (a few dozen states). The stationary solver uses
a direct linear solve; stationary_power_iteration is an independent
cross-check path kept deliberately separate from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceError, NotIrreducibleError, NotStochasticError

ROW_SUM_TOL = 1e-12
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Row-stochastic transition matrix; entries[i, j] = P(i -> j)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise NotStochasticError(f"transition matrix must be square, got shape {m.shape}")
        if np.any(m < 0.0) or np.any(m > 1.0):
            raise NotStochasticError("transition matrix entries must lie in [0, 1]")
        row_err = np.abs(m.sum(axis=1) - 1.0)
        if np.any(row_err > ROW_SUM_TOL):
            worst = int(np.argmax(row_err))
            raise NotStochasticError(
                f"row {worst} sums to {m[worst].sum()!r}, off by more than {ROW_SUM_TOL}"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    """Steady-state probability vector of a chain."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or np.any(p < 0.0) or abs(p.sum() - 1.0) > ROW_SUM_TOL:
            raise ConvergenceError("stationary vector must be nonnegative and sum to 1")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __getitem__(self, i: int) -> float:
        return float(self.probs[i])

    def __len__(self) -> int:
        return len(self.probs)


def _closed_class_count(m: StochasticMatrix) -> int:
    """Number of closed communicating classes of the nonzero-pattern graph."""
    mask = m.entries > 0.0
    n_comp, labels = connected_components(csr_matrix(mask), directed=True, connection="strong")
    closed = 0
    for c in range(n_comp):
        states = labels == c
        # a class is closed iff no mass leaves it
        if not mask[np.ix_(states, ~states)].any():
            closed += 1
    return closed


def _check_residual(pi: np.ndarray, m: StochasticMatrix, context: str) -> None:
    residual = float(np.max(np.abs(pi @ m.entries - pi)))
    if residual > RESIDUAL_TOL:
        raise ConvergenceError(f"{context}: stationarity residual {residual:g} exceeds {RESIDUAL_TOL:g}")


def stationary(m: StochasticMatrix) -> StationaryDistribution:
    """Unique stationary distribution via a direct linear solve.

    Solves (P^T - I) pi = 0 with the normalization row appended, which is
    well conditioned for the small chains used here. Raises
    NotIrreducibleError when the chain has more than one closed class
    (the solution would not be unique).
    """
    if _closed_class_count(m) != 1:
        raise NotIrreducibleError("chain has multiple closed classes; stationary vector not unique")
    n = m.n
    a = np.vstack([m.entries.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[n] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    # lstsq leaves O(1e-16) round-off on states whose true mass is zero;
    # scrub everything below the solve's noise floor so degenerate cases
    # (absorbing empty queue, unreachable states) come out exact
    pi[np.abs(pi) < 1e-13] = 0.0
    if np.any(pi < 0.0):
        raise ConvergenceError(f"direct solve produced a negative probability: {pi.min()!r}")
    pi /= pi.sum()
    _check_residual(pi, m, "direct solve")
    return StationaryDistribution(pi)


def stationary_power_iteration(
    m: StochasticMatrix, steps: int = 10_000, tol: float = 1e-13
) -> StationaryDistribution:
    """Independent stationary-distribution oracle by repeated left-multiplication.

    Starts from a uniform vector with a tiny index-proportional tilt: a
    perfectly uniform start sits exactly on the fixed point of symmetric
    periodic chains and would masquerade as converged; the tilt makes
    periodic chains oscillate forever and fail loudly instead.
    """
    n = m.n
    v = 1.0 + 1e-6 * np.arange(n) / max(n - 1, 1)
    v /= v.sum()
    diff = float("inf")
    for _ in range(steps):
        nxt = v @ m.entries
        nxt /= nxt.sum()
        diff = float(np.max(np.abs(nxt - v)))
        v = nxt
        if diff < tol:
            _check_residual(v, m, "power iteration")
            return StationaryDistribution(v)
    raise ConvergenceError(
        f"power iteration did not converge within {steps} steps (last diff {diff:g}); "
        "the chain may be periodic"
    )
