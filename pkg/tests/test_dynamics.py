"""Tests for the one-tick transition, trajectory cost, and the search bound."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenlight import (
    DynamicsConfig,
    IntersectionSpec,
    Movement,
    Phase,
    TrafficSnapshot,
    Turn,
    VehicleRecord,
    enumerate_feasible_phases,
    initial_green_ages,
    lower_bound,
    rollout_cost,
    step,
)
from greenlight.errors import (
    ConstraintViolationError,
    DimensionError,
    InvalidSpecError,
)


def spec12():
    return IntersectionSpec.standard(max_queue_len=6)


def snapshot_with(spec, path_queues, tick=0):
    queues = [()] * spec.num_paths
    for path, vehicles in path_queues.items():
        queues[path] = tuple(VehicleRecord(p, w) for p, w in vehicles)
    return TrafficSnapshot(tick, tuple(queues))


def test_config_defaults():
    cfg = DynamicsConfig()
    assert cfg.phase_ticks == 4
    assert cfg.slow_start == 1
    assert cfg.tick_seconds == 5.0


def test_config_rejects_slow_start_not_below_phase_ticks():
    # a held phase must get at least one serving tick
    with pytest.raises(InvalidSpecError):
        DynamicsConfig(phase_ticks=1, slow_start=1)
    with pytest.raises(InvalidSpecError):
        DynamicsConfig(phase_ticks=4, slow_start=4)


def test_config_rejects_nonpositive_phase_ticks():
    with pytest.raises(InvalidSpecError):
        DynamicsConfig(phase_ticks=0, slow_start=0)


def test_step_closed_path_only_ages():
    # two priority-1 vehicles with waits (0,0) on a closed path: nobody
    # leaves, waits become (1,1), both still pay, tick_cost = 1 + 1 = 2
    spec = spec12()
    s = snapshot_with(spec, {0: [(1, 0), (1, 0)]})
    out = step(spec, s, spec.all_closed(), [0] * 12, DynamicsConfig())
    assert out.departed == ()
    assert [v.wait for v in out.next.queues[0]] == [1, 1]
    assert out.tick_cost == 2
    assert out.next.tick == 1


def test_step_slow_start_blocks_departure():
    # path turned green this tick (age 0 < S=1): the front vehicle stays
    # and its wait climbs from 5 to 6
    spec = spec12()
    s = snapshot_with(spec, {0: [(1, 5)]})
    phase = Phase(1, 12)
    out = step(spec, s, phase, [0] * 12, DynamicsConfig(phase_ticks=4, slow_start=1))
    assert out.departed == ()
    assert [v.wait for v in out.next.queues[0]] == [6]
    assert out.tick_cost == 1


def test_step_warm_green_departs_front():
    # age 1 >= S=1: front leaves recorded at wait 5, the queue behind it
    # ages to (3), tick_cost only counts the remaining vehicle
    spec = spec12()
    s = snapshot_with(spec, {0: [(1, 5), (1, 2)]})
    phase = Phase(1, 12)
    out = step(spec, s, phase, [1] + [0] * 11, DynamicsConfig())
    assert out.departed == ((0, VehicleRecord(1, 5)),)
    assert [v.wait for v in out.next.queues[0]] == [3]
    assert out.tick_cost == 1


def test_step_departure_is_fifo_one_per_tick():
    spec = spec12()
    s = snapshot_with(spec, {0: [(2, 9), (5, 9), (1, 9)]})
    phase = Phase(1, 12)
    out = step(spec, s, phase, [3] + [0] * 11, DynamicsConfig())
    # only the front departs even though three are ready; cost = 5 + 1
    assert out.departed == ((0, VehicleRecord(2, 9)),)
    assert len(out.next.queues[0]) == 2
    assert out.tick_cost == 6


def test_step_rejects_infeasible_phase():
    # paths 1 and 4 conflict in the default geometry
    spec = spec12()
    with pytest.raises(ConstraintViolationError):
        step(
            spec,
            spec.empty_snapshot(),
            Phase((1 << 1) | (1 << 4), 12),
            [0] * 12,
            DynamicsConfig(),
        )


def test_step_rejects_wrong_age_vector_length():
    spec = spec12()
    with pytest.raises(DimensionError):
        step(spec, spec.empty_snapshot(), spec.all_closed(), [0] * 5, DynamicsConfig())


def test_initial_green_ages_warm_open_paths():
    spec = spec12()
    cfg = DynamicsConfig(phase_ticks=4, slow_start=1)
    ages = initial_green_ages(spec, Phase(0b101, 12), cfg)
    assert ages == [1, 0, 1] + [0] * 9


def test_rollout_empty_snapshot_costs_nothing():
    spec = spec12()
    schedule = (Phase(1, 12), Phase(2, 12))
    total, final = rollout_cost(
        spec, spec.empty_snapshot(), schedule, spec.all_closed(), DynamicsConfig()
    )
    assert total == 0
    assert final.is_empty
    assert final.tick == 2 * 4


def test_rollout_already_green_vehicle_departs_free():
    # one priority-1 vehicle on path 0, phase already green before the
    # plan starts (so no slow start applies): it departs on the first
    # tick and never pays, total cost 0
    spec = spec12()
    s = snapshot_with(spec, {0: [(1, 0)]})
    cfg = DynamicsConfig(phase_ticks=2, slow_start=1)
    phase = Phase(1, 12)
    total, final = rollout_cost(spec, s, (phase,), phase, cfg)
    assert total == 0
    assert final.is_empty


def test_rollout_closed_path_pays_every_tick():
    # one priority-1 vehicle, path closed for both scheduled phases,
    # D=1: it pays 1 per tick for 2 ticks, total 2
    spec = spec12()
    s = snapshot_with(spec, {0: [(1, 0)]})
    cfg = DynamicsConfig(phase_ticks=1, slow_start=0)
    closed = Phase(1 << 1, 12)
    total, final = rollout_cost(spec, s, (closed, closed), spec.all_closed(), cfg)
    assert total == 2
    assert [v.wait for v in final.queues[0]] == [2]


def test_rollout_rejects_empty_schedule():
    spec = spec12()
    with pytest.raises(InvalidSpecError):
        rollout_cost(spec, spec.empty_snapshot(), (), spec.all_closed(), DynamicsConfig())


def test_rollout_green_age_resets_on_reopen():
    # phase A then phase B then A again with S=1, D=2: path 0 is closed
    # during B, so its age restarts and the first A tick after reopening
    # serves nobody
    spec = spec12()
    s = snapshot_with(spec, {0: [(1, 0), (1, 0), (1, 0)]})
    cfg = DynamicsConfig(phase_ticks=2, slow_start=1)
    a, b = Phase(1, 12), Phase(1 << 1, 12)
    total, final = rollout_cost(spec, s, (a, b, a), spec.all_closed(), cfg)
    # tick by tick departures on path 0: slow start, depart, closed,
    # closed, slow start again, depart; 3 - 2 = 1 vehicle remains
    assert len(final.queues[0]) == 1
    # costs per tick: 3, 2, 2, 2, 2, 1 summed = 12
    assert total == 12


def test_lower_bound_empty_and_zero_horizon():
    spec = spec12()
    assert lower_bound(spec.empty_snapshot(), 7) == 0
    s = snapshot_with(spec, {0: [(4, 0)], 5: [(2, 3)]})
    assert lower_bound(s, 0) == 0


def test_lower_bound_three_vehicles():
    # positions 0,1,2 with R=2: min(i, R) gives 0 + 1 + 2 = 3
    spec = spec12()
    s = snapshot_with(spec, {0: [(1, 0), (1, 0), (1, 0)]})
    assert lower_bound(s, 2) == 3


def test_lower_bound_weights_by_priority():
    # path with priorities (2, 5): 0*2 + 1*5 = 5 once R >= 1
    spec = spec12()
    s = snapshot_with(spec, {0: [(2, 0), (5, 0)]})
    assert lower_bound(s, 9) == 5
    # R=1 caps position 1 at 1, same value here
    assert lower_bound(s, 1) == 5


def tri_spec():
    # three-arm junction, one left turn per arm; small enough that every
    # schedule can be enumerated
    return IntersectionSpec(
        arms=3,
        paths=(
            Movement(0, Turn.LEFT),
            Movement(1, Turn.LEFT),
            Movement(2, Turn.LEFT),
        ),
        max_queue_len=3,
    )


def tri_snapshot_strategy():
    vehicle = st.tuples(
        st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=9)
    )
    queue = st.lists(vehicle, max_size=3)
    return st.tuples(queue, queue, queue)


@given(tri_snapshot_strategy(), st.integers(min_value=0, max_value=7))
@settings(max_examples=100)
def test_property_step_conserves_vehicles(raw_queues, mask_bits):
    spec = tri_spec()
    s = snapshot_with(spec, dict(enumerate(raw_queues)))
    feasible = {p.mask for p in enumerate_feasible_phases(spec.conflicts, False)}
    mask = mask_bits if mask_bits in feasible or mask_bits == 0 else 0
    out = step(spec, s, Phase(mask, 3), [1] * 3, DynamicsConfig(phase_ticks=2))
    for i in range(3):
        departed_here = sum(1 for p, _ in out.departed if p == i)
        assert len(s.queues[i]) == len(out.next.queues[i]) + departed_here


@given(tri_snapshot_strategy())
@settings(max_examples=100)
def test_property_remaining_waits_rise_by_one(raw_queues):
    spec = tri_spec()
    s = snapshot_with(spec, dict(enumerate(raw_queues)))
    out = step(spec, s, Phase(0b001, 3), [1, 0, 0], DynamicsConfig())
    for i in range(3):
        survivors = out.next.queues[i]
        before = s.queues[i][len(s.queues[i]) - len(survivors):]
        assert [v.wait for v in survivors] == [v.wait + 1 for v in before]
        assert [v.priority for v in survivors] == [v.priority for v in before]


@given(tri_snapshot_strategy())
@settings(max_examples=100)
def test_property_tick_cost_is_remaining_priority_sum(raw_queues):
    spec = tri_spec()
    s = snapshot_with(spec, dict(enumerate(raw_queues)))
    out = step(spec, s, Phase(0b010, 3), [0, 1, 0], DynamicsConfig())
    assert out.tick_cost == sum(v.priority for q in out.next.queues for v in q)


@given(tri_snapshot_strategy(), st.integers(min_value=1, max_value=3))
@settings(max_examples=50)
def test_property_rollout_equals_summed_tick_costs(raw_queues, k):
    # re-accumulate the trajectory one step at a time and compare
    spec = tri_spec()
    cfg = DynamicsConfig(phase_ticks=2, slow_start=1)
    s = snapshot_with(spec, dict(enumerate(raw_queues)))
    phases = enumerate_feasible_phases(spec.conflicts, maximal_only=True)
    schedule = tuple(phases[i % len(phases)] for i in range(k))
    prev = spec.all_closed()

    total, final = rollout_cost(spec, s, schedule, prev, cfg)

    acc = 0
    cur = s
    ages = initial_green_ages(spec, prev, cfg)
    for phase in schedule:
        ages = [a if phase.is_open(i) else 0 for i, a in enumerate(ages)]
        for _ in range(cfg.phase_ticks):
            out = step(spec, cur, phase, ages, cfg)
            acc += out.tick_cost
            cur = out.next
            ages = [a + 1 if phase.is_open(i) else 0 for i, a in enumerate(ages)]
    assert total == acc
    assert final == cur


@given(tri_snapshot_strategy(), st.integers(min_value=1, max_value=2))
@settings(max_examples=50)
def test_property_lower_bound_is_admissible(raw_queues, k):
    # the bound must sit at or below the cost of every feasible schedule
    spec = tri_spec()
    cfg = DynamicsConfig(phase_ticks=2, slow_start=1)
    s = snapshot_with(spec, dict(enumerate(raw_queues)))
    phases = enumerate_feasible_phases(spec.conflicts, maximal_only=False)
    bound = lower_bound(s, k * cfg.phase_ticks)

    def all_schedules(depth):
        if depth == 0:
            yield ()
            return
        for rest in all_schedules(depth - 1):
            for p in phases:
                yield (p,) + rest

    for schedule in all_schedules(k):
        total, _ = rollout_cost(spec, s, schedule, spec.all_closed(), cfg)
        assert bound <= total


def test_rollout_is_deterministic():
    spec = spec12()
    s = snapshot_with(spec, {0: [(3, 1)], 4: [(1, 0), (2, 2)], 7: [(10, 5)]})
    phases = enumerate_feasible_phases(spec.conflicts, maximal_only=True)
    schedule = (phases[0], phases[3], phases[7])
    first = rollout_cost(spec, s, schedule, spec.all_closed(), DynamicsConfig())
    second = rollout_cost(spec, s, schedule, spec.all_closed(), DynamicsConfig())
    assert first == second
