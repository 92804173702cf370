import numpy as np
import pytest

from aoi_access.deadline_queue import QueueParams, build_waiting_time_matrix
from aoi_access.errors import ConvergenceError, NotIrreducibleError, NotStochasticError
from aoi_access.markov import (
    StationaryDistribution,
    StochasticMatrix,
    stationary,
    stationary_power_iteration,
)


def random_positive_chain(rng, n):
    """Strictly positive rows: irreducible and aperiodic by construction."""
    m = rng.uniform(0.01, 1.0, size=(n, n))
    return StochasticMatrix(m / m.sum(axis=1, keepdims=True))


def test_symmetric_two_state():
    pi = stationary(StochasticMatrix([[0.5, 0.5], [0.5, 0.5]]))
    assert np.allclose(pi.probs, [0.5, 0.5], atol=1e-12)


def test_no_arrivals_chain_concentrates_on_empty_state():
    m = build_waiting_time_matrix(QueueParams(0.0, 0.8, 3))
    pi = stationary(m)
    assert np.allclose(pi.probs, [1.0, 0.0, 0.0, 0.0], atol=1e-10)


def test_direct_solve_agrees_with_power_iteration_on_deadline_chain():
    m = build_waiting_time_matrix(QueueParams(0.5, 0.375, 3))
    direct = stationary(m)
    oracle = stationary_power_iteration(m, steps=10_000)
    assert np.max(np.abs(direct.probs - oracle.probs)) < 1e-9


def test_power_iteration_hand_solved_chain():
    # balance: 0.1 a = 0.5 b with a + b = 1 gives [5/6, 1/6]
    pi = stationary_power_iteration(StochasticMatrix([[0.9, 0.1], [0.5, 0.5]]))
    assert np.allclose(pi.probs, [5.0 / 6.0, 1.0 / 6.0], atol=1e-10)


def test_power_iteration_periodic_chain_raises():
    with pytest.raises(ConvergenceError):
        stationary_power_iteration(StochasticMatrix([[0.0, 1.0], [1.0, 0.0]]))


def test_oracle_equivalence_on_random_chains():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 51))
        m = random_positive_chain(rng, n)
        direct = stationary(m)
        oracle = stationary_power_iteration(m)
        assert np.max(np.abs(direct.probs - oracle.probs)) < 1e-9
        # stationarity residual invariant
        assert np.max(np.abs(direct.probs @ m.entries - direct.probs)) < 1e-10


def test_rejects_bad_row_sums():
    with pytest.raises(NotStochasticError):
        StochasticMatrix([[0.5, 0.4], [0.5, 0.5]])


def test_rejects_entries_outside_unit_interval():
    with pytest.raises(NotStochasticError):
        StochasticMatrix([[1.5, -0.5], [0.5, 0.5]])


def test_rejects_non_square():
    with pytest.raises(NotStochasticError):
        StochasticMatrix(np.full((2, 3), 1.0 / 3.0))


def test_two_closed_classes_rejected():
    with pytest.raises(NotIrreducibleError):
        stationary(StochasticMatrix(np.eye(2)))


def test_transient_states_are_fine():
    pi = stationary(StochasticMatrix([[0.5, 0.5], [0.0, 1.0]]))
    assert np.allclose(pi.probs, [0.0, 1.0], atol=1e-12)


def test_matrix_is_immutable():
    m = StochasticMatrix([[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(ValueError):
        m.entries[0, 0] = 1.0


def test_stationary_distribution_validates():
    with pytest.raises(ConvergenceError):
        StationaryDistribution([0.7, 0.7])
    with pytest.raises(ConvergenceError):
        StationaryDistribution([-0.1, 1.1])
