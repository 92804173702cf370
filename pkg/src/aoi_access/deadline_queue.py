"""Head-of-line waiting-time chain for the deadline-constrained user.

State k in 1..d is the age (in slots) of the packet at the head of the
queue; state 0 is an empty queue. A packet may be attempted at ages 1..d
and is dropped if it is still undelivered at the end of its age-d slot,
so the per-slot drop rate is pi_d * (1 - mu1). Arrivals follow the
early-departure / late-arrival convention: a packet arriving in slot t
becomes eligible at age 1 in slot t+1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import SuccessProbs
from .errors import ParameterError, PartitionError
from .markov import StationaryDistribution, StochasticMatrix, stationary

LUMP_TOL = 1e-12


def _check_prob(name: str, v: float) -> None:
    if not 0.0 <= v <= 1.0:
        raise ParameterError(f"{name} must be in [0,1], got {v}")


@dataclass(frozen=True)
class QueueParams:
    """Arrival probability per slot, service probability per slot, deadline in slots."""

    arrival_prob: float
    service_prob: float
    deadline: int

    def __post_init__(self):
        _check_prob("arrival_prob", self.arrival_prob)
        _check_prob("service_prob", self.service_prob)
        if not isinstance(self.deadline, int) or self.deadline < 1:
            raise ParameterError(f"deadline must be an integer >= 1, got {self.deadline!r}")


@dataclass(frozen=True, eq=False)
class QueueMetrics:
    """Steady-state figures of the deadline queue.

    drop_rate is expected drops per slot; throughput is delivered packets
    per slot (arrivals minus drops, since every arrival is eventually
    either delivered or dropped); busy_prob is Pr{queue non-empty}.
    """

    stationary: StationaryDistribution
    drop_rate: float
    per_packet_drop_prob: float
    throughput: float
    busy_prob: float


def build_waiting_time_matrix(p: QueueParams) -> StochasticMatrix:
    """(d+1)x(d+1) transition matrix of the head-of-line age process.

    Row 0 (empty queue) moves to age 1 on an arrival. Rows 1..d-1 either
    fail service (age + 1) or deliver and promote the oldest waiting
    packet, whose age is set by how long ago it arrived. Row d does not
    depend on the service probability: the head leaves either way,
    delivered or dropped.
    """
    lam, mu, d = p.arrival_prob, p.service_prob, p.deadline
    lam_bar = 1.0 - lam
    m = np.zeros((d + 1, d + 1))
    m[0, 0] = lam_bar
    m[0, 1] = lam
    for k in range(1, d):
        m[k, 0] = mu * lam_bar**k
        for j in range(1, k + 1):
            m[k, j] = mu * lam * lam_bar ** (k - j)
        m[k, k + 1] = 1.0 - mu
    m[d, 0] = lam_bar**d
    for j in range(1, d + 1):
        m[d, j] = lam * lam_bar ** (d - j)
    return StochasticMatrix(m)


def queue_metrics(p: QueueParams) -> QueueMetrics:
    """Solve the waiting-time chain and derive the per-slot rates."""
    pi = stationary(build_waiting_time_matrix(p))
    drop_rate = pi[p.deadline] * (1.0 - p.service_prob)
    busy_prob = 1.0 - pi[0]
    throughput = p.arrival_prob - drop_rate
    per_packet = drop_rate / p.arrival_prob if p.arrival_prob > 0.0 else 0.0
    return QueueMetrics(
        stationary=pi,
        drop_rate=drop_rate,
        per_packet_drop_prob=per_packet,
        throughput=throughput,
        busy_prob=busy_prob,
    )


def build_2d_action_chain(
    p: QueueParams, q2: float, sp: SuccessProbs, q1: float
) -> StochasticMatrix:
    """Joint chain over (other-user action, head-of-line age).

    State index a*(d+1)+y couples the interferer's action a with the
    waiting time y. The action driving a transition is the one drawn for
    the slot in which that transition happens, i.e. the action coordinate
    of the DESTINATION state; the origin's action is last slot's and no
    longer matters. Service is q1*p_1_joint under interference and
    q1*p_1_solo without.
    """
    _check_prob("q1", q1)
    _check_prob("q2", q2)
    d = p.deadline
    n = d + 1
    t_silent = build_waiting_time_matrix(
        QueueParams(p.arrival_prob, q1 * sp.p_1_solo, d)
    ).entries
    t_active = build_waiting_time_matrix(
        QueueParams(p.arrival_prob, q1 * sp.p_1_joint, d)
    ).entries
    m = np.zeros((2 * n, 2 * n))
    for x in (0, 1):
        m[x * n : (x + 1) * n, 0:n] = (1.0 - q2) * t_silent
        m[x * n : (x + 1) * n, n : 2 * n] = q2 * t_active
    return StochasticMatrix(m)


def action_partition(deadline: int) -> list[list[int]]:
    """Blocks pairing the two action states of each waiting-time value."""
    n = deadline + 1
    return [[j, n + j] for j in range(n)]


@dataclass(frozen=True, eq=False)
class LumpabilityReport:
    lumpable: bool
    max_deviation: float
    lumped: StochasticMatrix | None


def verify_lumpability(
    m: StochasticMatrix, partition: list[list[int]], tol: float = LUMP_TOL
) -> LumpabilityReport:
    """Check the strong-lumpability condition of a partition numerically.

    The condition: within every block, all states must carry the same
    total transition probability into each block. When it holds the
    block-to-block sums define a Markov chain on the blocks, returned as
    the lumped matrix.
    """
    n = m.n
    seen = sorted(s for block in partition for s in block)
    if seen != list(range(n)):
        raise PartitionError("partition must cover every state exactly once")
    if any(len(block) == 0 for block in partition):
        raise PartitionError("partition blocks must be non-empty")

    nblocks = len(partition)
    # block_sums[s, J] = total probability of jumping from state s into block J
    block_sums = np.empty((n, nblocks))
    for j, block in enumerate(partition):
        block_sums[:, j] = m.entries[:, block].sum(axis=1)

    max_dev = 0.0
    lumped = np.empty((nblocks, nblocks))
    for i, block in enumerate(partition):
        rows = block_sums[block, :]
        dev = float(np.max(rows.max(axis=0) - rows.min(axis=0)))
        max_dev = max(max_dev, dev)
        lumped[i, :] = rows.mean(axis=0)

    if max_dev > tol:
        return LumpabilityReport(lumpable=False, max_deviation=max_dev, lumped=None)
    return LumpabilityReport(
        lumpable=True, max_deviation=max_dev, lumped=StochasticMatrix(lumped)
    )
