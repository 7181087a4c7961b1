"""Intersection model: movements, conflicts, phases, and queue snapshots.

An intersection has A arms labelled clockwise. Every path is a movement
(entry arm, turn) and owns one FIFO vehicle queue of bounded length L.
Two paths conflict when their trajectories cross inside the junction;
a phase (bit vector over paths) is feasible when no two open paths
conflict. Queue state round-trips through a (P, 2, L) integer array:
plane 0 holds priorities front to back, plane 1 the waiting times, and
unused slots are zero in both planes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import ceil

import numpy as np

from .errors import (
    DimensionError,
    InvalidGeometryError,
    InvalidSpecError,
    MalformedArrayError,
)

MIN_ARMS = 3
DEFAULT_ARMS = 4
DEFAULT_MAX_QUEUE_LEN = 21


class Turn(str, Enum):
    """Turn direction relative to the entry arm."""

    LEFT = "L"
    STRAIGHT = "S"
    RIGHT = "R"


class DrivingSide(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Movement:
    """One traffic path: vehicles entering at entry_arm and turning `turn`."""

    entry_arm: int
    turn: Turn


def exit_arm(movement: Movement, arms: int, side: DrivingSide = DrivingSide.LEFT) -> int:
    """Arm where `movement` leaves the junction, with arms labelled clockwise.

    For left-hand driving a left turn exits the next arm clockwise, straight
    exits two arms over, and a right turn exits the previous arm; the mapping
    is mirrored for right-hand driving.
    """
    if arms < MIN_ARMS:
        raise InvalidGeometryError(f"need at least {MIN_ARMS} arms, got {arms}")
    if not 0 <= movement.entry_arm < arms:
        raise InvalidGeometryError(
            f"entry arm {movement.entry_arm} out of range for {arms} arms"
        )
    near, far = (1, arms - 1) if side is DrivingSide.LEFT else (arms - 1, 1)
    offset = {Turn.LEFT: near, Turn.STRAIGHT: 2, Turn.RIGHT: far}[movement.turn]
    return (movement.entry_arm + offset) % arms


def standard_movements(arms: int = DEFAULT_ARMS) -> tuple[Movement, ...]:
    """All (entry, turn) combinations, entry-major, turns in L/S/R order."""
    return tuple(
        Movement(entry, turn) for entry in range(arms) for turn in Turn
    )


@dataclass(frozen=True)
class Phase:
    """Set of simultaneously open paths, packed into a bit mask of width P."""

    mask: int
    width: int

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise DimensionError("phase width must be positive")
        if not 0 <= self.mask < (1 << self.width):
            raise DimensionError(
                f"mask {self.mask:#x} does not fit width {self.width}"
            )

    def is_open(self, path: int) -> bool:
        return bool(self.mask >> path & 1)

    def open_paths(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.width) if self.mask >> i & 1)

    @property
    def count(self) -> int:
        return bin(self.mask).count("1")

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.open_paths())) + "}"


def _slot(arm: int, entry: bool, side: DrivingSide) -> int:
    # Each arm contributes an exit point and an entry point on the boundary
    # circle; clockwise under left-hand driving the exit point comes first.
    if side is DrivingSide.LEFT:
        return 2 * arm + (1 if entry else 0)
    return 2 * arm + (0 if entry else 1)


def _strictly_cross(a: int, b: int, c: int, d: int, n: int) -> bool:
    # Chords {a,b} and {c,d} on an n-point circle, all endpoints distinct:
    # they cross iff exactly one of c, d lies on the open arc a -> b.
    def inside(x: int) -> bool:
        return (x - a) % n < (b - a) % n and x != a

    return inside(c) != inside(d)


class ConflictMatrix:
    """Symmetric boolean P x P matrix of pairwise path conflicts.

    Instances are immutable values; derived structures (per-path conflict
    bit masks, the maximal-phase list) are computed lazily and cached.
    """

    def __init__(self, data: np.ndarray):
        data = np.asarray(data, dtype=bool)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise DimensionError(f"conflict matrix must be square, got {data.shape}")
        if data.shape[0] == 0:
            raise DimensionError("conflict matrix must cover at least one path")
        if data.diagonal().any():
            raise InvalidSpecError("a path cannot conflict with itself")
        if not np.array_equal(data, data.T):
            raise InvalidSpecError("conflict matrix must be symmetric")
        self._data = data
        self._data.setflags(write=False)
        self._neighbor_masks: tuple[int, ...] | None = None
        self._maximal: tuple[Phase, ...] | None = None

    @property
    def paths(self) -> int:
        return self._data.shape[0]

    def conflicts(self, i: int, j: int) -> bool:
        return bool(self._data[i, j])

    def as_array(self) -> np.ndarray:
        return self._data

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """All conflicting pairs (i, j) with i < j."""
        rows, cols = np.nonzero(np.triu(self._data))
        return tuple(zip(rows.tolist(), cols.tolist()))

    def neighbor_masks(self) -> tuple[int, ...]:
        """For each path, the bit mask of paths it conflicts with."""
        if self._neighbor_masks is None:
            masks = []
            for i in range(self.paths):
                m = 0
                for j in np.nonzero(self._data[i])[0].tolist():
                    m |= 1 << j
                masks.append(m)
            self._neighbor_masks = tuple(masks)
        return self._neighbor_masks

    def maximal_phases(self) -> tuple[Phase, ...]:
        if self._maximal is None:
            self._maximal = tuple(enumerate_feasible_phases(self, maximal_only=True))
        return self._maximal

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConflictMatrix) and np.array_equal(
            self._data, other._data
        )

    def __repr__(self) -> str:
        return f"ConflictMatrix(paths={self.paths}, pairs={len(self.pairs())})"


def build_conflict_matrix(
    arms: int,
    paths: tuple[Movement, ...],
    side: DrivingSide = DrivingSide.LEFT,
    merge_conflicts: bool = False,
) -> ConflictMatrix:
    """Derive the conflict matrix from junction geometry.

    Each path is drawn as a chord of the junction boundary from its entry
    point to its exit point (every arm has one entry and one exit point,
    mirrored by driving side). Two paths conflict when their chords
    strictly cross. Paths sharing an entry arm never conflict; paths
    merging into the same exit arm conflict only when `merge_conflicts`
    is set.
    """
    n = len(paths)
    seen = set()
    for m in paths:
        if m in seen:
            raise InvalidSpecError(f"duplicate path {m}")
        seen.add(m)
    exits = [exit_arm(m, arms, side) for m in paths]
    data = np.zeros((n, n), dtype=bool)
    circle = 2 * arms
    for i in range(n):
        for j in range(i + 1, n):
            a, b = paths[i], paths[j]
            if a.entry_arm == b.entry_arm:
                continue
            if exits[i] == exits[j]:
                data[i, j] = data[j, i] = merge_conflicts
                continue
            pts = (
                _slot(a.entry_arm, True, side),
                _slot(exits[i], False, side),
                _slot(b.entry_arm, True, side),
                _slot(exits[j], False, side),
            )
            if len(set(pts)) < 4:
                continue  # touching chords do not strictly cross
            data[i, j] = data[j, i] = _strictly_cross(*pts, circle)
    return ConflictMatrix(data)


def is_feasible_phase(phase: Phase, conflicts: ConflictMatrix) -> bool:
    """True when no two open paths conflict (open set is independent)."""
    if phase.width != conflicts.paths:
        raise DimensionError(
            f"phase width {phase.width} != matrix size {conflicts.paths}"
        )
    mask = phase.mask
    neighbors = conflicts.neighbor_masks()
    m = mask
    while m:
        i = (m & -m).bit_length() - 1
        if neighbors[i] & mask:
            return False
        m &= m - 1
    return True


def enumerate_feasible_phases(
    conflicts: ConflictMatrix, maximal_only: bool = False
) -> list[Phase]:
    """All nonempty feasible phases in ascending bit-vector order.

    With `maximal_only`, only phases to which no further path can be
    added. Enumeration is exponential in P by nature; intended for the
    small path counts of single junctions.
    """
    p = conflicts.paths
    neighbors = conflicts.neighbor_masks()
    out = []
    for mask in range(1, 1 << p):
        feasible = True
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            if neighbors[i] & mask:
                feasible = False
                break
            m &= m - 1
        if not feasible:
            continue
        if maximal_only:
            extendable = any(
                not (mask >> j & 1) and not (neighbors[j] & mask) for j in range(p)
            )
            if extendable:
                continue
        out.append(Phase(mask, p))
    return out


@dataclass(frozen=True)
class VehicleRecord:
    """One queued vehicle: its priority class and accumulated waiting ticks."""

    priority: int
    wait: int = 0

    def __post_init__(self) -> None:
        if self.priority < 1:
            raise InvalidSpecError(f"priority must be >= 1, got {self.priority}")
        if self.wait < 0:
            raise InvalidSpecError(f"wait must be >= 0, got {self.wait}")


@dataclass(frozen=True)
class TrafficSnapshot:
    """Immutable queue state of every path at one tick."""

    tick: int
    queues: tuple[tuple[VehicleRecord, ...], ...]

    @property
    def paths(self) -> int:
        return len(self.queues)

    def queue_lengths(self) -> tuple[int, ...]:
        return tuple(len(q) for q in self.queues)

    def total_vehicles(self) -> int:
        return sum(len(q) for q in self.queues)

    def is_empty(self) -> bool:
        return all(not q for q in self.queues)


@dataclass(frozen=True)
class IntersectionSpec:
    """Static description of one junction: geometry, paths, and conflicts."""

    arms: int
    paths: tuple[Movement, ...]
    max_queue_len: int
    driving_side: DrivingSide = DrivingSide.LEFT
    merge_conflicts: bool = False
    conflicts: ConflictMatrix = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.arms < MIN_ARMS:
            raise InvalidGeometryError(f"need at least {MIN_ARMS} arms")
        if not self.paths:
            raise InvalidSpecError("at least one path required")
        if self.max_queue_len < 1:
            raise InvalidSpecError("max_queue_len must be >= 1")
        if self.conflicts is None:
            object.__setattr__(
                self,
                "conflicts",
                build_conflict_matrix(
                    self.arms, self.paths, self.driving_side, self.merge_conflicts
                ),
            )
        if self.conflicts.paths != len(self.paths):
            raise DimensionError(
                f"conflict matrix covers {self.conflicts.paths} paths, "
                f"instance has {len(self.paths)}"
            )

    @classmethod
    def standard(
        cls,
        arms: int = DEFAULT_ARMS,
        max_queue_len: int = DEFAULT_MAX_QUEUE_LEN,
        driving_side: DrivingSide = DrivingSide.LEFT,
        merge_conflicts: bool = False,
    ) -> "IntersectionSpec":
        """The default junction: every (entry, turn) movement present."""
        return cls(
            arms=arms,
            paths=standard_movements(arms),
            max_queue_len=max_queue_len,
            driving_side=driving_side,
            merge_conflicts=merge_conflicts,
        )

    @property
    def num_paths(self) -> int:
        return len(self.paths)

    def exit_arms(self) -> tuple[int, ...]:
        return tuple(exit_arm(m, self.arms, self.driving_side) for m in self.paths)

    def empty_snapshot(self, tick: int = 0) -> TrafficSnapshot:
        return TrafficSnapshot(tick=tick, queues=tuple(() for _ in self.paths))

    def all_closed(self) -> Phase:
        return Phase(0, self.num_paths)

    def validate_snapshot(self, s: TrafficSnapshot) -> None:
        if s.paths != self.num_paths:
            raise DimensionError(
                f"snapshot has {s.paths} queues, instance has {self.num_paths}"
            )
        for i, q in enumerate(s.queues):
            if len(q) > self.max_queue_len:
                raise DimensionError(
                    f"queue {i} holds {len(q)} vehicles, limit {self.max_queue_len}"
                )

    def fill_count(self, intensity: float) -> int:
        """Seeded vehicles per path for a load level in [0, 1]."""
        if not 0.0 <= intensity <= 1.0:
            raise InvalidSpecError(f"intensity must be in [0, 1], got {intensity}")
        return ceil(intensity * self.max_queue_len)


def encode_snapshot(s: TrafficSnapshot, spec: IntersectionSpec) -> np.ndarray:
    """Pack queues into a (P, 2, L) int array, zero-padded at the back."""
    spec.validate_snapshot(s)
    out = np.zeros((spec.num_paths, 2, spec.max_queue_len), dtype=np.int64)
    for i, q in enumerate(s.queues):
        for j, v in enumerate(q):
            out[i, 0, j] = v.priority
            out[i, 1, j] = v.wait
    return out


def decode_snapshot(
    array: np.ndarray, spec: IntersectionSpec, tick: int = 0
) -> TrafficSnapshot:
    """Rebuild a snapshot from its (P, 2, L) array form.

    Rejects arrays whose zero padding is broken: a zero-priority slot in
    front of a nonzero one, a wait on an empty slot, or negative entries.
    """
    array = np.asarray(array)
    expected = (spec.num_paths, 2, spec.max_queue_len)
    if array.shape != expected:
        raise DimensionError(f"expected array shape {expected}, got {array.shape}")
    if (array < 0).any():
        raise MalformedArrayError("negative entries in queue array")
    queues = []
    for i in range(spec.num_paths):
        pri = array[i, 0]
        wait = array[i, 1]
        n = int(np.count_nonzero(pri))
        if (pri[:n] == 0).any():
            raise MalformedArrayError(f"queue {i}: empty slot before an occupied one")
        if (wait[n:] != 0).any():
            raise MalformedArrayError(f"queue {i}: wait recorded on an empty slot")
        queues.append(
            tuple(
                VehicleRecord(priority=int(pri[j]), wait=int(wait[j]))
                for j in range(n)
            )
        )
    return TrafficSnapshot(tick=tick, queues=tuple(queues))
