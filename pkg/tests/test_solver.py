"""Tests for the branch-and-bound schedule search and its brute-force twin."""

import numpy as np
import pytest

from greenlight import (
    ConflictMatrix,
    DynamicsConfig,
    IntersectionSpec,
    Movement,
    Phase,
    SolverConfig,
    TrafficSnapshot,
    Turn,
    VehicleRecord,
    candidate_phases,
    exhaustive_oracle,
    optimize_schedule,
    rollout_cost,
    standard_movements,
)
from greenlight.errors import InvalidSpecError, OracleTooLargeError


def snapshot_with(spec, path_queues, tick=0):
    queues = [()] * spec.num_paths
    for path, vehicles in path_queues.items():
        queues[path] = tuple(VehicleRecord(p, w) for p, w in vehicles)
    return TrafficSnapshot(tick, tuple(queues))


def zero_conflict_spec(paths=3, max_queue_len=3):
    cm = ConflictMatrix(np.zeros((paths, paths), dtype=bool))
    return IntersectionSpec(
        arms=4,
        paths=standard_movements(4)[:paths],
        max_queue_len=max_queue_len,
        conflicts=cm,
    )


def crossing_pair_spec(max_queue_len=3):
    # two straights that cross; the only maximal phases are {0} and {1}
    return IntersectionSpec(
        arms=4,
        paths=(Movement(0, Turn.STRAIGHT), Movement(1, Turn.STRAIGHT)),
        max_queue_len=max_queue_len,
    )


def test_solver_config_defaults():
    cfg = SolverConfig()
    assert cfg.horizon == 3
    assert cfg.maximal_only is True
    assert cfg.wmax == 60


def test_solver_config_rejects_bad_values():
    with pytest.raises(InvalidSpecError):
        SolverConfig(horizon=0)
    # the guard threshold must exceed one full slow-started block
    with pytest.raises(InvalidSpecError):
        SolverConfig(wmax=4, dynamics=DynamicsConfig(phase_ticks=4, slow_start=1))


def test_candidates_without_guard_or_restriction():
    # zero conflicts over 3 paths: all 2^3 - 1 subsets qualify
    spec = zero_conflict_spec(3)
    cfg = SolverConfig(maximal_only=False)
    phases = candidate_phases(spec, spec.empty_snapshot(), spec.all_closed(), cfg)
    assert len(phases) == 7
    assert [p.mask for p in phases] == list(range(1, 8))


def test_candidates_restricted_to_maximal():
    spec = zero_conflict_spec(3)
    cfg = SolverConfig(maximal_only=True)
    phases = candidate_phases(spec, spec.empty_snapshot(), spec.all_closed(), cfg)
    assert [p.mask for p in phases] == [7]


def test_guard_forces_overdue_path_open():
    # front vehicle on path 5 has hit the threshold: every candidate
    # must show path 5 green
    spec = IntersectionSpec.standard(max_queue_len=6)
    cfg = SolverConfig(wmax=60)
    s = snapshot_with(spec, {5: [(1, 60)], 0: [(1, 3)]})
    phases = candidate_phases(spec, s, spec.all_closed(), cfg)
    assert phases
    assert all(p.is_open(5) for p in phases)


def test_guard_prefers_longest_wait():
    # waits 70 on path 2 and 65 on path 9: path 2 is older, so all
    # candidates open path 2
    spec = IntersectionSpec.standard(max_queue_len=6)
    cfg = SolverConfig(wmax=60)
    s = snapshot_with(spec, {2: [(1, 70)], 9: [(1, 65)]})
    phases = candidate_phases(spec, s, spec.all_closed(), cfg)
    assert phases
    assert all(p.is_open(2) for p in phases)


def test_guard_wait_tie_breaks_to_lowest_index():
    spec = IntersectionSpec.standard(max_queue_len=6)
    cfg = SolverConfig(wmax=60)
    s = snapshot_with(spec, {9: [(1, 70)], 2: [(1, 70)]})
    phases = candidate_phases(spec, s, spec.all_closed(), cfg)
    assert phases
    assert all(p.is_open(2) for p in phases)


def test_guard_disabled_ignores_waits():
    spec = IntersectionSpec.standard(max_queue_len=6)
    cfg = SolverConfig(wmax=None)
    s = snapshot_with(spec, {5: [(1, 999)]})
    phases = candidate_phases(spec, s, spec.all_closed(), cfg)
    assert any(not p.is_open(5) for p in phases)


def test_optimize_empty_snapshot_takes_lex_smallest():
    # every schedule costs 0, so the tie-break picks the smallest maximal
    # phase at every depth
    spec = IntersectionSpec.standard(max_queue_len=6)
    cfg = SolverConfig(horizon=3)
    sol = optimize_schedule(spec, spec.empty_snapshot(), spec.all_closed(), cfg)
    first = spec.conflicts.maximal_phases()[0]
    assert sol.schedule == (first, first, first)
    assert sol.cost == 0


def test_optimize_single_green_vehicle_costs_nothing():
    # one priority-1 vehicle on path 0, previous phase already open
    # there: it departs on the first held tick, cost 0
    spec = IntersectionSpec.standard(max_queue_len=6)
    dyn = DynamicsConfig(phase_ticks=2, slow_start=1)
    cfg = SolverConfig(horizon=1, dynamics=dyn)
    s = snapshot_with(spec, {0: [(1, 0)]})
    prev = spec.conflicts.maximal_phases()[0]
    sol = optimize_schedule(spec, s, prev, cfg)
    assert sol.schedule[0].is_open(0)
    assert sol.cost == 0


def test_optimize_two_path_hand_case():
    # path 0 holds two priority-1 vehicles, path 1 one priority-5; D=1,
    # S=0, k=2. Serving path 1 first costs 2 + 1 = 3, every other order
    # pays the heavy vehicle at least once: 11, 7, or 4. Minimum is
    # ({1}, {0}) at cost 3.
    spec = crossing_pair_spec()
    s = snapshot_with(spec, {0: [(1, 0), (1, 0)], 1: [(5, 0)]})
    dyn = DynamicsConfig(phase_ticks=1, slow_start=0)
    cfg = SolverConfig(horizon=2, dynamics=dyn)
    sol = optimize_schedule(spec, s, spec.all_closed(), cfg)
    assert [p.mask for p in sol.schedule] == [0b10, 0b01]
    assert sol.cost == 3


def test_oracle_two_paths_visits_four_schedules():
    # 2 maximal phases at depth 2: 2 first moves plus 4 completions,
    # nodes_explored = 6 and the 4 leaves are the 4 schedules
    spec = crossing_pair_spec()
    s = snapshot_with(spec, {0: [(1, 0), (1, 0)], 1: [(5, 0)]})
    dyn = DynamicsConfig(phase_ticks=1, slow_start=0)
    cfg = SolverConfig(horizon=2, dynamics=dyn)
    orc = exhaustive_oracle(spec, s, spec.all_closed(), cfg)
    assert orc.nodes_explored == 6
    assert orc.cost == 3
    # cross-check the minimum against direct rollouts of all schedules
    phases = spec.conflicts.maximal_phases()
    costs = {}
    for a in phases:
        for b in phases:
            costs[(a.mask, b.mask)] = rollout_cost(
                spec, s, (a, b), spec.all_closed(), dyn
            )[0]
    assert len(costs) == 4
    assert orc.cost == min(costs.values())


def test_oracle_empty_snapshot_costs_nothing():
    spec = IntersectionSpec.standard(max_queue_len=4)
    cfg = SolverConfig(horizon=2)
    orc = exhaustive_oracle(spec, spec.empty_snapshot(), spec.all_closed(), cfg)
    assert orc.cost == 0


def test_oracle_refuses_oversized_search():
    spec = IntersectionSpec.standard(max_queue_len=4)
    cfg = SolverConfig(horizon=3)
    with pytest.raises(OracleTooLargeError):
        exhaustive_oracle(spec, spec.empty_snapshot(), spec.all_closed(), cfg, cap=100)


def random_instance(rng):
    """One random small instance: spec, snapshot, prev phase, solver config."""
    p = int(rng.integers(2, 6))
    max_queue_len = int(rng.integers(1, 4))
    data = np.zeros((p, p), dtype=bool)
    for i in range(p):
        for j in range(i + 1, p):
            if rng.random() < 0.4:
                data[i, j] = data[j, i] = True
    spec = IntersectionSpec(
        arms=4,
        paths=standard_movements(4)[:p],
        max_queue_len=max_queue_len,
        conflicts=ConflictMatrix(data),
    )
    queues = []
    for _ in range(p):
        n = int(rng.integers(0, max_queue_len + 1))
        queues.append(
            tuple(
                VehicleRecord(int(rng.integers(1, 6)), int(rng.integers(0, 20)))
                for _ in range(n)
            )
        )
    s = TrafficSnapshot(0, tuple(queues))
    slow_start, phase_ticks = ((0, 1), (0, 2), (1, 2))[int(rng.integers(0, 3))]
    dyn = DynamicsConfig(phase_ticks=phase_ticks, slow_start=slow_start)
    maximal_only = bool(rng.integers(0, 2))
    cfg = SolverConfig(
        horizon=int(rng.integers(1, 4)),
        maximal_only=maximal_only,
        wmax=60,
        dynamics=dyn,
    )
    base = candidate_phases(spec, s, spec.all_closed(), cfg)
    while len(base) ** cfg.horizon > 800 and cfg.horizon > 1:
        cfg = SolverConfig(
            horizon=cfg.horizon - 1,
            maximal_only=maximal_only,
            wmax=60,
            dynamics=dyn,
        )
    prev_choices = [spec.all_closed()] + list(base)
    prev = prev_choices[int(rng.integers(0, len(prev_choices)))]
    return spec, s, prev, cfg


def test_search_matches_oracle_on_random_instances():
    # paired runs: equal cost, identical schedule under the shared
    # tie-break, and pruning never visits more nodes than enumeration
    rng = np.random.default_rng(20260816)
    for _ in range(60):
        spec, s, prev, cfg = random_instance(rng)
        sol = optimize_schedule(spec, s, prev, cfg)
        orc = exhaustive_oracle(spec, s, prev, cfg)
        assert sol.cost == orc.cost
        assert sol.schedule == orc.schedule
        assert sol.nodes_explored <= orc.nodes_explored
        replay, _ = rollout_cost(spec, s, sol.schedule, prev, cfg.dynamics)
        assert replay == sol.cost


def test_maximal_restriction_preserves_optimal_cost():
    # opening extra compatible paths never hurts, so restricting the
    # search to maximal phases must land on the same cost
    rng = np.random.default_rng(7)
    for _ in range(30):
        spec, s, prev, cfg = random_instance(rng)
        if prev.mask and prev.mask not in {
            p.mask for p in spec.conflicts.maximal_phases()
        }:
            prev = spec.all_closed()
        k = min(cfg.horizon, 2)
        wide = SolverConfig(
            horizon=k, maximal_only=False, wmax=60, dynamics=cfg.dynamics
        )
        narrow = SolverConfig(
            horizon=k, maximal_only=True, wmax=60, dynamics=cfg.dynamics
        )
        assert (
            optimize_schedule(spec, s, prev, narrow).cost
            == optimize_schedule(spec, s, prev, wide).cost
        )


def test_guard_shapes_first_phase_of_solution():
    # whenever some front vehicle is overdue, the chosen schedule starts
    # by serving the oldest such path
    rng = np.random.default_rng(99)
    spec = IntersectionSpec.standard(max_queue_len=4)
    cfg = SolverConfig(horizon=2, wmax=30)
    for _ in range(20):
        queues = {}
        overdue = []
        for path in range(12):
            if rng.random() < 0.3:
                wait = int(rng.integers(0, 50))
                queues[path] = [(1, wait)]
                if wait >= 30:
                    overdue.append((wait, path))
        if not overdue:
            queues[3] = [(1, 44)]
            overdue.append((44, 3))
        s = snapshot_with(spec, queues)
        oldest = max(w for w, _ in overdue)
        target = min(p for w, p in overdue if w == oldest)
        sol = optimize_schedule(spec, s, spec.all_closed(), cfg)
        assert sol.schedule[0].is_open(target)


def test_prefixing_previous_best_is_admissible():
    # a (k-1)-step optimum extended by one more phase can never beat the
    # k-step optimum; the k-step cost is bounded by any such extension
    spec = crossing_pair_spec(max_queue_len=3)
    s = snapshot_with(spec, {0: [(1, 0), (2, 1)], 1: [(3, 0)]})
    dyn = DynamicsConfig(phase_ticks=2, slow_start=1)
    short = optimize_schedule(
        spec, s, spec.all_closed(), SolverConfig(horizon=2, dynamics=dyn)
    )
    full = optimize_schedule(
        spec, s, spec.all_closed(), SolverConfig(horizon=3, dynamics=dyn)
    )
    for extension in spec.conflicts.maximal_phases():
        extended, _ = rollout_cost(
            spec, s, short.schedule + (extension,), spec.all_closed(), dyn
        )
        assert full.cost <= extended


def test_solution_reports_elapsed_time():
    spec = IntersectionSpec.standard(max_queue_len=4)
    sol = optimize_schedule(
        spec, spec.empty_snapshot(), spec.all_closed(), SolverConfig(horizon=1)
    )
    assert sol.elapsed_seconds >= 0.0
