"""Stochastic episode harness: seeded queues, arrivals, and delay stats.

All randomness in an episode flows from one seeded PCG64 generator in a
documented draw order: initial queues first (paths ascending, vehicles
front to back), then per tick one Bernoulli draw per path ascending plus
one priority draw per realized arrival. Identical configs therefore give
bit-identical episodes on any platform.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dynamics import DynamicsConfig, step
from .errors import InvalidSpecError
from .model import IntersectionSpec, TrafficSnapshot, VehicleRecord
from .policies import (
    ControllerState,
    PolicyKind,
    decide_f1,
    decide_f2,
    decide_horizon_opt,
    make_controller_state,
)
from .solver import SolverConfig

PRIORITY_CLASSES: tuple[tuple[int, float], ...] = ((10, 0.02), (3, 0.08), (1, 0.90))
TICK_CAP = 100_000


class SimMode(str, Enum):
    """Episode shape: drain a seeded load, or run a fixed-length arrival process."""

    DRAIN = "drain"
    STEADY = "steady"


@dataclass(frozen=True)
class SimConfig:
    """Everything an episode needs besides the policy itself."""

    spec: IntersectionSpec
    intensity: float
    seed: int = 0
    mode: SimMode = SimMode.DRAIN
    arrival_rate_scale: float = 0.3
    episode_ticks: int = 500
    priority_classes: tuple[tuple[int, float], ...] = PRIORITY_CLASSES
    dynamics: DynamicsConfig = field(default_factory=DynamicsConfig)

    def __post_init__(self) -> None:
        if not 0.0 <= self.intensity <= 1.0:
            raise InvalidSpecError("intensity must lie in [0, 1]")
        if self.seed < 0:
            raise InvalidSpecError("seed must be nonnegative")
        if self.arrival_rate_scale < 0:
            raise InvalidSpecError("arrival_rate_scale must be >= 0")
        if self.intensity * self.arrival_rate_scale > 1.0:
            raise InvalidSpecError("intensity * arrival_rate_scale must be <= 1")
        if self.episode_ticks < 0:
            raise InvalidSpecError("episode_ticks must be >= 0")
        if not self.priority_classes:
            raise InvalidSpecError("priority_classes must be nonempty")
        for weight, prob in self.priority_classes:
            if weight < 1:
                raise InvalidSpecError("priority weights must be >= 1")
            if not 0.0 <= prob <= 1.0:
                raise InvalidSpecError("class probabilities must lie in [0, 1]")
        total = sum(prob for _, prob in self.priority_classes)
        if abs(total - 1.0) > 1e-9:
            raise InvalidSpecError(f"class probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class EpisodeStats:
    """Delay statistics over an episode's departed vehicles.

    mean_wait and std_wait are unweighted over departures (std is the
    population standard deviation); both are 0.0 when nothing departed.
    starvation_events counts vehicles, departed or still queued at the
    end, whose wait exceeded the starvation threshold. terminated means
    the episode ended by its own rule rather than the safety cap.
    """

    mean_wait: float
    mean_wait_seconds: float
    std_wait: float
    max_wait: int
    throughput: int
    rejected_arrivals: int
    starvation_events: int
    terminated: bool
    ticks: int


@dataclass(frozen=True)
class WaitLogEntry:
    """One departed vehicle; wait_ticks always equals exit_tick - enter_tick."""

    seed: int
    policy: str
    path: int
    priority: int
    enter_tick: int
    exit_tick: int
    wait_ticks: int


def draw_priority(rng: np.random.Generator, classes: tuple[tuple[int, float], ...]) -> int:
    """Sample one priority weight by inverse CDF over the class list order."""
    u = rng.random()
    cum = 0.0
    for weight, prob in classes:
        cum += prob
        if u < cum:
            return weight
    return classes[-1][0]


def seed_initial_queues(cfg: SimConfig, rng: np.random.Generator | None = None) -> TrafficSnapshot:
    """Fill every path with ceil(intensity * capacity) fresh vehicles.

    Priorities are drawn path by path, front to back. Passing an rng lets
    an episode continue the same stream for its arrivals; otherwise a
    generator is seeded from cfg.seed.
    """
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
    fill = cfg.spec.fill_count(cfg.intensity)
    queues = tuple(
        tuple(
            VehicleRecord(draw_priority(rng, cfg.priority_classes), 0)
            for _ in range(fill)
        )
        for _ in range(cfg.spec.num_paths)
    )
    return TrafficSnapshot(tick=0, queues=queues)


def generate_arrivals(
    cfg: SimConfig, tick: int, rng: np.random.Generator
) -> tuple[tuple[VehicleRecord, ...], ...]:
    """Per-path arrivals for one tick: at most one vehicle per path.

    Each path ascending consumes one uniform draw for its Bernoulli
    trial (probability intensity * arrival_rate_scale) and, on arrival,
    one more for the priority, keeping the stream layout fixed.
    """
    p = cfg.intensity * cfg.arrival_rate_scale
    out = []
    for _ in range(cfg.spec.num_paths):
        if rng.random() < p:
            out.append((VehicleRecord(draw_priority(rng, cfg.priority_classes), 0),))
        else:
            out.append(())
    return tuple(out)


def append_arrivals(
    spec: IntersectionSpec,
    s: TrafficSnapshot,
    arrivals: tuple[tuple[VehicleRecord, ...], ...],
) -> tuple[TrafficSnapshot, int]:
    """Append arrivals to queues with room; reject the rest, counted."""
    if len(arrivals) != spec.num_paths:
        raise InvalidSpecError(
            f"arrivals cover {len(arrivals)} paths, expected {spec.num_paths}"
        )
    rejected = 0
    queues = []
    for q, incoming in zip(s.queues, arrivals):
        q = list(q)
        for rec in incoming:
            if len(q) < spec.max_queue_len:
                q.append(rec)
            else:
                rejected += 1
        queues.append(tuple(q))
    return TrafficSnapshot(tick=s.tick, queues=tuple(queues)), rejected


def run_episode(
    cfg: SimConfig,
    policy: PolicyKind,
    solver_cfg: SolverConfig | None = None,
) -> tuple[EpisodeStats, tuple[WaitLogEntry, ...]]:
    """Drive one policy through one seeded episode.

    A decision is taken every phase_ticks ticks from the fresh snapshot;
    dynamics advance one tick at a time; in Steady mode arrivals are
    appended after every tick. Drain episodes end when all queues empty,
    or hit the safety cap and report terminated=False. The wait log
    records one row per departed vehicle in departure order.
    """
    spec = cfg.spec
    dyn = cfg.dynamics
    if solver_cfg is None:
        solver_cfg = SolverConfig(dynamics=dyn)
    if solver_cfg.dynamics != dyn:
        raise InvalidSpecError("solver and simulator dynamics must match")

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    state = seed_initial_queues(cfg, rng)
    st: ControllerState = make_controller_state(spec, policy)
    maximal = spec.conflicts.maximal_phases()
    enter: list[deque[int]] = [deque([0] * len(q)) for q in state.queues]
    ages = [0] * spec.num_paths
    log: list[WaitLogEntry] = []
    rejected = 0
    phase = st.prev_phase
    terminated = True

    while True:
        t = state.tick
        if cfg.mode is SimMode.DRAIN:
            if state.is_empty():
                break
            if t >= TICK_CAP:
                terminated = False
                break
        elif t >= cfg.episode_ticks:
            break

        if t % dyn.phase_ticks == 0:
            if policy is PolicyKind.HORIZON:
                phase = decide_horizon_opt(spec, state, st, solver_cfg)
            elif policy is PolicyKind.F1:
                phase = decide_f1(state, spec.conflicts, maximal)
            else:
                phase = decide_f2(t, st, dyn.phase_ticks)
            st.decision_log.append((t, phase))

        out = step(spec, state, phase, ages, dyn)
        for i, rec in out.departed:
            log.append(
                WaitLogEntry(
                    seed=cfg.seed,
                    policy=policy.value,
                    path=i,
                    priority=rec.priority,
                    enter_tick=enter[i].popleft(),
                    exit_tick=t,
                    wait_ticks=rec.wait,
                )
            )
        for i in range(spec.num_paths):
            ages[i] = ages[i] + 1 if phase.is_open(i) else 0
        state = out.next
        st.prev_phase = phase

        if cfg.mode is SimMode.STEADY:
            arrivals = generate_arrivals(cfg, state.tick, rng)
            before = [len(q) for q in state.queues]
            state, rej = append_arrivals(spec, state, arrivals)
            rejected += rej
            for i, q in enumerate(state.queues):
                if len(q) > before[i]:
                    enter[i].append(state.tick)

    waits = [e.wait_ticks for e in log]
    mean = float(np.mean(waits)) if waits else 0.0
    std = float(np.std(waits)) if waits else 0.0
    peak = max(waits) if waits else 0
    starvation = 0
    if solver_cfg.wmax is not None:
        starvation = sum(1 for w in waits if w > solver_cfg.wmax)
        starvation += sum(
            1 for q in state.queues for v in q if v.wait > solver_cfg.wmax
        )
    stats = EpisodeStats(
        mean_wait=mean,
        mean_wait_seconds=mean * dyn.tick_seconds,
        std_wait=std,
        max_wait=peak,
        throughput=len(log),
        rejected_arrivals=rejected,
        starvation_events=starvation,
        terminated=terminated,
        ticks=state.tick,
    )
    return stats, tuple(log)
