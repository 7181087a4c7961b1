"""Exact k-step schedule search: branch and bound plus a brute-force oracle.

The optimizer explores candidate phases depth-first in ascending
bit-vector order, pruning a branch as soon as its accrued cost plus the
admissible lower bound cannot strictly beat the incumbent. Because the
first minimum-cost leaf reached in that order is the lexicographically
smallest one, the returned schedule is deterministic and matches the
oracle's tie-break exactly.

Block costs are computed in closed form from per-path prefix sums rather
than by replaying ticks, which keeps a single search well under real-time
budgets; the oracle recomputes every leaf through the public tick
dynamics instead, so the two routes share no cost code.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .dynamics import DynamicsConfig, rollout_cost, step
from .errors import InvalidSpecError, NoFeasibleScheduleError, OracleTooLargeError
from .model import (
    IntersectionSpec,
    Phase,
    TrafficSnapshot,
    enumerate_feasible_phases,
)

DEFAULT_ORACLE_CAP = 1_000_000


@dataclass(frozen=True)
class SolverConfig:
    """Search parameters: horizon, candidate policy, starvation threshold."""

    horizon: int = 3
    maximal_only: bool = True
    wmax: int | None = 60
    dynamics: DynamicsConfig = field(default_factory=DynamicsConfig)

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise InvalidSpecError("horizon must be >= 1")
        if self.wmax is not None:
            # guard threshold must exceed the worst forced wait of a
            # freshly green queue, or the guard can thrash
            floor = self.dynamics.phase_ticks * self.dynamics.slow_start
            if self.wmax <= floor:
                raise InvalidSpecError(
                    f"wmax must exceed phase_ticks * slow_start = {floor}"
                )


@dataclass(frozen=True)
class Solution:
    """A schedule with its exact cost and search effort accounting.

    nodes_explored counts candidate-phase applications: one per phase
    tried at any depth of the search tree. The oracle counts the same
    events without pruning, so optimize_schedule never exceeds it.
    """

    schedule: tuple[Phase, ...]
    cost: int
    nodes_explored: int
    elapsed_seconds: float


def _base_phases(spec: IntersectionSpec, cfg: SolverConfig) -> tuple[Phase, ...]:
    if cfg.maximal_only:
        return spec.conflicts.maximal_phases()
    return enumerate_feasible_phases(spec.conflicts, maximal_only=False)


def candidate_phases(
    spec: IntersectionSpec,
    s: TrafficSnapshot,
    prev_phase: Phase,
    cfg: SolverConfig,
) -> tuple[Phase, ...]:
    """Phases eligible for the next decision, in ascending bit-vector order.

    Membership depends on queue contents, not on `prev_phase` (any
    feasible phase may follow any other; switching costs live in the
    dynamics). When the starvation guard is enabled and some front
    vehicle has waited wmax ticks or more, only phases opening the
    longest-waiting such path are returned, ties going to the lowest
    path index.
    """
    spec.validate_snapshot(s)
    base = _base_phases(spec, cfg)
    if cfg.wmax is None:
        return base
    target = -1
    worst = -1
    for i, q in enumerate(s.queues):
        if q and q[0].wait >= cfg.wmax and q[0].wait > worst:
            worst = q[0].wait
            target = i
    if target < 0:
        return base
    guarded = tuple(ph for ph in base if ph.is_open(target))
    if not guarded:
        raise NoFeasibleScheduleError(f"no candidate phase opens starved path {target}")
    return guarded


def optimize_schedule(
    spec: IntersectionSpec,
    s: TrafficSnapshot,
    prev_phase: Phase,
    cfg: SolverConfig,
) -> Solution:
    """Find the cheapest k-phase schedule by pruned depth-first search.

    Returns the lexicographically smallest schedule among those of
    minimal rollout cost. Search state is incremental: per-path departed
    counts and green ages, with block costs and bounds evaluated in O(1)
    per path from prefix sums.
    """
    t0 = time.perf_counter()
    spec.validate_snapshot(s)
    dyn = cfg.dynamics
    big_d, small_s = dyn.phase_ticks, dyn.slow_start
    k = cfg.horizon
    paths = spec.num_paths

    base = _base_phases(spec, cfg)
    if not base:
        raise NoFeasibleScheduleError("no feasible candidate phase exists")

    pri = [[v.priority for v in q] for q in s.queues]
    w0 = [[v.wait for v in q] for q in s.queues]
    lens = [len(q) for q in s.queues]
    # ps[i][x] = sum of the first x priorities on path i;
    # iw[i][x] = sum of position-weighted priorities, positions 0-based
    ps = []
    iw = []
    for q in pri:
        a = [0]
        b = [0]
        for j, p in enumerate(q):
            a.append(a[-1] + p)
            b.append(b[-1] + j * p)
        ps.append(a)
        iw.append(b)

    def bound(d: list[int], r: int) -> int:
        total = 0
        for i in range(paths):
            n = lens[i]
            di = d[i]
            m = di + r if di + r < n else n
            span = ps[i][m] - ps[i][di]
            total += (iw[i][m] - iw[i][di]) - di * span + r * (ps[i][n] - ps[i][m])
        return total

    def candidates_at(d: list[int], depth: int) -> tuple[Phase, ...]:
        if cfg.wmax is None:
            return base
        elapsed = depth * big_d
        target = -1
        worst = -1
        for i in range(paths):
            di = d[i]
            if di < lens[i]:
                w = w0[i][di] + elapsed
                if w >= cfg.wmax and w > worst:
                    worst = w
                    target = i
        if target < 0:
            return base
        guarded = tuple(ph for ph in base if ph.is_open(target))
        if not guarded:
            raise NoFeasibleScheduleError(
                f"no candidate phase opens starved path {target}"
            )
        return guarded

    def apply_block(mask: int, d: list[int], ages: list[int]):
        cost = 0
        d2 = d.copy()
        ages2 = ages.copy()
        for i in range(paths):
            n = lens[i]
            di = d[i]
            remaining_pri = ps[i][n] - ps[i][di]
            if mask >> i & 1:
                a = ages[i]
                # ticks of this block during which path i may depart
                avail = big_d if a >= small_s else big_d - small_s + a
                m = n - di
                if m > avail:
                    m = avail
                if m > 0:
                    e = di + m
                    span = ps[i][e] - ps[i][di]
                    steps = (iw[i][e] - iw[i][di]) - di * span
                    # departer t leaves at in-block tick (D - avail + 1) + t
                    # and skips paying for avail - t ticks
                    cost += big_d * remaining_pri - (avail * span - steps)
                    d2[i] = e
                else:
                    cost += big_d * remaining_pri
                ages2[i] = a + big_d
            else:
                cost += big_d * remaining_pri
                ages2[i] = 0
        return cost, d2, ages2

    best_cost: int | None = None
    best_schedule: tuple[Phase, ...] | None = None
    nodes = 0
    chosen: list[Phase] = []

    d0 = [0] * paths
    ages0 = [small_s if prev_phase.is_open(i) else 0 for i in range(paths)]

    def dfs(depth: int, accrued: int, d: list[int], ages: list[int]) -> None:
        nonlocal best_cost, best_schedule, nodes
        if depth == k:
            if best_cost is None or accrued < best_cost:
                best_cost = accrued
                best_schedule = tuple(chosen)
            return
        remaining = (k - depth - 1) * big_d
        for ph in candidates_at(d, depth):
            nodes += 1
            block_cost, d2, ages2 = apply_block(ph.mask, d, ages)
            acc = accrued + block_cost
            if best_cost is not None and acc + bound(d2, remaining) >= best_cost:
                continue
            chosen.append(ph)
            dfs(depth + 1, acc, d2, ages2)
            chosen.pop()

    dfs(0, 0, d0, ages0)
    assert best_schedule is not None and best_cost is not None
    return Solution(best_schedule, best_cost, nodes, time.perf_counter() - t0)


def exhaustive_oracle(
    spec: IntersectionSpec,
    s: TrafficSnapshot,
    prev_phase: Phase,
    cfg: SolverConfig,
    cap: int = DEFAULT_ORACLE_CAP,
) -> Solution:
    """Enumerate every candidate schedule and keep the cheapest.

    Each leaf is costed with a full rollout through the public tick
    dynamics from the root snapshot, independently of any incremental
    bookkeeping, so this is a true cross-check for optimize_schedule.
    Ties break to the lexicographically smallest schedule, same as the
    optimizer. Refuses instances whose enumeration would exceed `cap`
    schedules.
    """
    t0 = time.perf_counter()
    spec.validate_snapshot(s)
    dyn = cfg.dynamics
    root = candidate_phases(spec, s, prev_phase, cfg)
    if not root:
        raise NoFeasibleScheduleError("no feasible candidate phase exists")
    if len(root) ** cfg.horizon > cap:
        raise OracleTooLargeError(
            f"{len(root)}^{cfg.horizon} schedules exceed the cap of {cap}"
        )

    best_cost: int | None = None
    best_schedule: tuple[Phase, ...] | None = None
    nodes = 0
    prefix: list[Phase] = []

    def advance(state: TrafficSnapshot, phase: Phase, ages: list[int]):
        ages = ages.copy()
        for _ in range(dyn.phase_ticks):
            out = step(spec, state, phase, ages, dyn)
            state = out.next
            for i in range(spec.num_paths):
                ages[i] = ages[i] + 1 if phase.is_open(i) else 0
        return state, ages

    def recurse(depth: int, state: TrafficSnapshot, ages: list[int], prev: Phase) -> None:
        nonlocal best_cost, best_schedule, nodes
        if depth == cfg.horizon:
            cost, _ = rollout_cost(spec, s, tuple(prefix), prev_phase, dyn)
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_schedule = tuple(prefix)
            return
        for ph in candidate_phases(spec, state, prev, cfg):
            nodes += 1
            nxt, ages2 = advance(state, ph, ages)
            prefix.append(ph)
            recurse(depth + 1, nxt, ages2, ph)
            prefix.pop()

    ages0 = [dyn.slow_start if prev_phase.is_open(i) else 0 for i in range(spec.num_paths)]
    recurse(0, s, ages0, prev_phase)
    assert best_schedule is not None and best_cost is not None
    return Solution(best_schedule, best_cost, nodes, time.perf_counter() - t0)
