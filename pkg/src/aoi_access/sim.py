"""Seeded slot-level Monte Carlo simulator of the two-user system.

Coupled mode plays out the ground-truth packet dynamics: user 2's update
outcome depends on whether user 1 actually transmitted in the same slot.
Decoupled mode keeps user 1's dynamics identical but drives user 2's
update successes from an i.i.d. Bernoulli stream with the closed-form
per-slot probability, which is exactly the independence assumption the
analytical age results rest on.

Each replication is an independent deterministic run seeded with
seed + replication index; the per-slot random draws are materialized up
front so the slot loop itself is branch-only.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import channel, system
from .channel import SuccessProbs
from .deadline_queue import QueueMetrics, QueueParams, build_waiting_time_matrix, queue_metrics
from .errors import ParameterError
from .system import DEFAULT_VIOLATION_THRESHOLDS, SystemParams

MODES = ("coupled", "decoupled")

DEFAULT_MIN_VISITS = 10_000

# 95% two-sided normal quantile for across-replication confidence intervals
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SimConfig:
    """One simulation request; identical configs give bit-identical reports.

    warmup_slots=None means 10% of the horizon, enough for every chain in
    scope; raise it for stress cases near saturation. slots counts the
    horizon of EACH replication.
    """

    params: SystemParams
    slots: int
    seed: int
    warmup_slots: int | None = None
    replications: int = 1
    mode: str = "coupled"
    success_probs_override: SuccessProbs | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.slots, int) or self.slots < 1:
            raise ParameterError(f"slots must be a positive integer, got {self.slots!r}")
        if self.warmup_slots is None:
            object.__setattr__(self, "warmup_slots", self.slots // 10)
        if not isinstance(self.warmup_slots, int) or self.warmup_slots < 0:
            raise ParameterError(f"warmup_slots must be >= 0, got {self.warmup_slots!r}")
        if self.slots <= self.warmup_slots:
            raise ParameterError(
                f"slots ({self.slots}) must exceed warmup_slots ({self.warmup_slots})"
            )
        if not isinstance(self.replications, int) or self.replications < 1:
            raise ParameterError(f"replications must be >= 1, got {self.replications!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ParameterError(f"seed must be a non-negative integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimulationReport:
    """Empirical counterparts of the analytical outputs, with 95% CIs.

    Rates are averages over the post-warmup window of every replication;
    ci_halfwidth holds the across-replication normal-approximation
    half-widths (0.0 for a single replication). counts carries exact
    whole-run totals satisfying arrivals = delivered + dropped +
    queue_residual.
    """

    mode: str
    seed: int
    slots: int
    warmup_slots: int
    replications: int
    drop_rate: float
    throughput: float
    busy_prob: float
    per_packet_drop_prob: float
    aoi_average: float
    aoi_violation: dict[int, float]
    aoi_histogram: dict[int, int]
    waiting_time_occupancy: tuple[float, ...]
    ci_halfwidth: dict[str, float]
    counts: dict[str, int]


@dataclass(frozen=True, eq=False)
class _Pipeline:
    sp: SuccessProbs
    mu1: float
    metrics: QueueMetrics
    mu2: float


def _pipeline(cfg: SimConfig) -> _Pipeline:
    p = cfg.params
    sp = cfg.success_probs_override
    if sp is None:
        sp = channel.success_probs(p.link1, p.link2, p.rx)
    mu1 = system.service_prob_user1(p, sp)
    metrics = queue_metrics(QueueParams(p.arrival_prob, mu1, p.deadline))
    mu2 = system.service_prob_user2(p, sp, metrics.busy_prob)
    return _Pipeline(sp=sp, mu1=mu1, metrics=metrics, mu2=mu2)


def _replicate(cfg: SimConfig, pipe: _Pipeline, rep: int) -> dict:
    """One seeded replication; returns raw post-warmup tallies."""
    p = cfg.params
    sp = pipe.sp
    slots, warmup, d = cfg.slots, cfg.warmup_slots, p.deadline
    decoupled = cfg.mode == "decoupled"

    rng = np.random.default_rng(cfg.seed + rep)
    arrive = (rng.random(slots) < p.arrival_prob).tobytes()
    att1 = (rng.random(slots) < p.q1).tobytes()
    att2 = (rng.random(slots) < p.q2).tobytes()
    win1_solo = (rng.random(slots) < sp.p_1_solo).tobytes()
    win1_joint = (rng.random(slots) < sp.p_1_joint).tobytes()
    if decoupled:
        win2_solo = win2_joint = b""
        dec = (rng.random(slots) < pipe.mu2).tobytes()
    else:
        win2_solo = (rng.random(slots) < sp.p_2_solo).tobytes()
        win2_joint = (rng.random(slots) < sp.p_2_joint).tobytes()
        dec = b""

    queue: deque[int] = deque()
    occ = [0] * (d + 1)
    trans = [[0] * (d + 1) for _ in range(d + 1)]
    hist = [0] * 512
    aoi = 1
    aoi_sum = 0
    prev_state = -1
    arrivals = delivered = dropped = 0
    arrivals_m = delivered_m = dropped_m = 0

    for t in range(slots):
        if queue:
            state = t - queue[0]
            busy = True
        else:
            state = 0
            busy = False
        measured = t >= warmup
        if measured:
            occ[state] += 1
            if prev_state >= 0:
                trans[prev_state][state] += 1
            prev_state = state
            if aoi >= len(hist):
                hist.extend([0] * (aoi + 256 - len(hist)))
            hist[aoi] += 1
            aoi_sum += aoi

        tx1 = busy and att1[t]
        tx2 = att2[t]
        s1 = (win1_joint[t] if tx2 else win1_solo[t]) if tx1 else 0
        if decoupled:
            s2 = dec[t]
        else:
            s2 = (win2_joint[t] if tx1 else win2_solo[t]) if tx2 else 0

        # age update, then early departure / drop, then late arrival
        aoi = 1 if s2 else aoi + 1
        if busy:
            if s1:
                queue.popleft()
                delivered += 1
                delivered_m += measured
            elif state == d:
                queue.popleft()
                dropped += 1
                dropped_m += measured
        if arrive[t]:
            queue.append(t)
            arrivals += 1
            arrivals_m += measured

    return {
        "occ": occ,
        "trans": trans,
        "hist": hist,
        "aoi_sum": aoi_sum,
        "arrivals": arrivals,
        "delivered": delivered,
        "dropped": dropped,
        "arrivals_m": arrivals_m,
        "delivered_m": delivered_m,
        "dropped_m": dropped_m,
        "queue_residual": len(queue),
    }


def _ci(values: list[float], replications: int) -> float:
    if replications < 2:
        return 0.0
    return _Z95 * float(np.std(values, ddof=1)) / math.sqrt(replications)


def _run(
    cfg: SimConfig, violation_thresholds: tuple[int, ...]
) -> tuple[SimulationReport, _Pipeline, list[list[int]]]:
    pipe = _pipeline(cfg)
    reps = [_replicate(cfg, pipe, r) for r in range(cfg.replications)]
    measured = cfg.slots - cfg.warmup_slots
    n_rep = cfg.replications

    per_rep = {
        "drop_rate": [r["dropped_m"] / measured for r in reps],
        "throughput": [r["delivered_m"] / measured for r in reps],
        "busy_prob": [(measured - r["occ"][0]) / measured for r in reps],
        "per_packet_drop_prob": [
            (r["dropped_m"] / r["arrivals_m"]) if r["arrivals_m"] > 0 else 0.0 for r in reps
        ],
        "aoi_average": [r["aoi_sum"] / measured for r in reps],
    }
    for x in violation_thresholds:
        per_rep[f"aoi_violation_{x}"] = [
            sum(r["hist"][x + 1 :]) / measured for r in reps
        ]

    ci = {k: _ci(v, n_rep) for k, v in per_rep.items()}
    means = {k: float(np.mean(v)) for k, v in per_rep.items()}

    occupancy = tuple(
        float(np.mean([r["occ"][s] / measured for r in reps]))
        for s in range(cfg.params.deadline + 1)
    )
    histogram: dict[int, int] = {}
    for r in reps:
        for age, count in enumerate(r["hist"]):
            if count:
                histogram[age] = histogram.get(age, 0) + count
    histogram = dict(sorted(histogram.items()))

    counts = {
        "arrivals": sum(r["arrivals"] for r in reps),
        "delivered": sum(r["delivered"] for r in reps),
        "dropped": sum(r["dropped"] for r in reps),
        "queue_residual": sum(r["queue_residual"] for r in reps),
        "measured_slots": measured * n_rep,
    }

    trans_total = [
        [sum(r["trans"][i][j] for r in reps) for j in range(cfg.params.deadline + 1)]
        for i in range(cfg.params.deadline + 1)
    ]

    report = SimulationReport(
        mode=cfg.mode,
        seed=cfg.seed,
        slots=cfg.slots,
        warmup_slots=cfg.warmup_slots,
        replications=n_rep,
        drop_rate=means["drop_rate"],
        throughput=means["throughput"],
        busy_prob=means["busy_prob"],
        per_packet_drop_prob=means["per_packet_drop_prob"],
        aoi_average=means["aoi_average"],
        aoi_violation={x: means[f"aoi_violation_{x}"] for x in violation_thresholds},
        aoi_histogram=histogram,
        waiting_time_occupancy=occupancy,
        ci_halfwidth=ci,
        counts=counts,
    )
    return report, pipe, trans_total


def simulate(
    cfg: SimConfig, violation_thresholds: tuple[int, ...] = DEFAULT_VIOLATION_THRESHOLDS
) -> SimulationReport:
    """Run every replication and aggregate the empirical metrics."""
    report, _, _ = _run(cfg, violation_thresholds)
    return report


@dataclass(frozen=True, eq=False)
class OccupancyComparison:
    """Empirical head-of-line-age occupancy against the chain's stationary vector."""

    occupancy: tuple[float, ...]
    stationary: tuple[float, ...]
    max_abs_deviation: float


def occupancy_vs_stationary(cfg: SimConfig) -> OccupancyComparison:
    """Compare simulated state occupancy with the analytical steady state."""
    if cfg.mode != "coupled":
        raise ParameterError("occupancy comparison is defined for coupled mode")
    report, pipe, _ = _run(cfg, DEFAULT_VIOLATION_THRESHOLDS)
    pi = tuple(float(v) for v in pipe.metrics.stationary.probs)
    dev = max(abs(a - b) for a, b in zip(report.waiting_time_occupancy, pi))
    return OccupancyComparison(
        occupancy=report.waiting_time_occupancy, stationary=pi, max_abs_deviation=dev
    )


@dataclass(frozen=True, eq=False)
class TransitionCheck:
    """Empirical one-step transition frequencies against the built matrix.

    flagged holds (origin, destination, empirical, analytical, threshold)
    for every cell whose deviation exceeds 3 standard errors plus 0.005;
    states visited fewer than min_visits times are reported in
    insufficient_states and excluded rather than failed.
    """

    analytical: np.ndarray
    empirical: np.ndarray
    visits: tuple[int, ...]
    flagged: tuple[tuple[int, int, float, float, float], ...]
    insufficient_states: tuple[int, ...]
    min_visits: int
    passed: bool


def transition_frequency_check(
    cfg: SimConfig, min_visits: int = DEFAULT_MIN_VISITS
) -> TransitionCheck:
    """Validate the constructed waiting-time matrix against simulated transitions."""
    if cfg.mode != "coupled":
        raise ParameterError("transition frequency check is defined for coupled mode")
    _, pipe, trans = _run(cfg, DEFAULT_VIOLATION_THRESHOLDS)
    d = cfg.params.deadline
    analytical = build_waiting_time_matrix(
        QueueParams(cfg.params.arrival_prob, pipe.mu1, d)
    ).entries
    visits = tuple(sum(row) for row in trans)
    empirical = np.full((d + 1, d + 1), np.nan)
    flagged = []
    insufficient = []
    for i in range(d + 1):
        if visits[i] < min_visits:
            insufficient.append(i)
            continue
        for j in range(d + 1):
            emp = trans[i][j] / visits[i]
            empirical[i, j] = emp
            a = analytical[i, j]
            threshold = 3.0 * math.sqrt(a * (1.0 - a) / visits[i]) + 0.005
            if abs(emp - a) > threshold:
                flagged.append((i, j, emp, float(a), threshold))
    return TransitionCheck(
        analytical=analytical,
        empirical=empirical,
        visits=visits,
        flagged=tuple(flagged),
        insufficient_states=tuple(insufficient),
        min_visits=min_visits,
        passed=not flagged,
    )
