"""JSON instance and snapshot files, plus the wait-log CSV writer.

Instance files describe a junction: arms, movements, queue capacity,
driving side, merge policy, and optionally an explicit conflict matrix
overriding the geometric one. Snapshot files carry queue contents either
as nested [priority, wait] pairs or as the flat (P, 2, L) array form.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FileFormatError, InvalidSpecError
from .model import (
    ConflictMatrix,
    DrivingSide,
    IntersectionSpec,
    Movement,
    TrafficSnapshot,
    Turn,
    VehicleRecord,
    build_conflict_matrix,
    decode_snapshot,
    encode_snapshot,
)
from .simulator import WaitLogEntry

WAIT_LOG_HEADER = "seed,policy,path,priority,enter_tick,exit_tick,wait_ticks"


def _load_json(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"{p}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _require(data: dict, key: str, path: str | Path):
    if key not in data:
        raise FileFormatError(f"{path}: missing required key '{key}'")
    return data[key]


def _as_int(value, what: str, path: str | Path) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FileFormatError(f"{path}: {what} must be an integer")
    return value


def load_instance(path: str | Path) -> IntersectionSpec:
    """Read and validate a junction description."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise FileFormatError(f"{path}: instance must be a JSON object")
    arms = _as_int(_require(data, "arms", path), "arms", path)
    raw_paths = _require(data, "paths", path)
    if not isinstance(raw_paths, list) or not raw_paths:
        raise FileFormatError(f"{path}: paths must be a nonempty list")
    movements = []
    for idx, item in enumerate(raw_paths):
        if not isinstance(item, dict):
            raise FileFormatError(f"{path}: path {idx} must be an object")
        entry = _as_int(_require(item, "entry", path), f"path {idx} entry", path)
        turn_token = _require(item, "turn", path)
        try:
            turn = Turn(turn_token)
        except ValueError:
            raise FileFormatError(
                f"{path}: path {idx} turn must be one of L, S, R"
            ) from None
        movements.append(Movement(entry, turn))
    max_queue_len = _as_int(
        _require(data, "max_queue_len", path), "max_queue_len", path
    )
    try:
        side = DrivingSide(data.get("driving_side", "left"))
    except ValueError:
        raise FileFormatError(f"{path}: driving_side must be 'left' or 'right'") from None
    merge = data.get("merge_conflicts", False)
    if not isinstance(merge, bool):
        raise FileFormatError(f"{path}: merge_conflicts must be a boolean")

    conflicts = None
    raw_matrix = data.get("conflict_matrix")
    if raw_matrix is not None:
        try:
            arr = np.asarray(raw_matrix)
        except ValueError:
            raise FileFormatError(
                f"{path}: conflict_matrix rows must all have the same length"
            ) from None
        if arr.dtype == object or arr.ndim != 2:
            raise FileFormatError(f"{path}: conflict_matrix must be a square 0/1 array")
        if not np.isin(arr, (0, 1)).all():
            raise FileFormatError(f"{path}: conflict_matrix entries must be 0 or 1")
        conflicts = ConflictMatrix(arr.astype(bool))

    return IntersectionSpec(
        arms=arms,
        paths=tuple(movements),
        max_queue_len=max_queue_len,
        driving_side=side,
        merge_conflicts=merge,
        conflicts=conflicts,
    )


def save_instance(spec: IntersectionSpec, path: str | Path) -> None:
    """Write a junction description; the conflict matrix is emitted only
    when it differs from the one its geometry would derive."""
    doc: dict = {
        "arms": spec.arms,
        "paths": [{"entry": m.entry_arm, "turn": m.turn.value} for m in spec.paths],
        "max_queue_len": spec.max_queue_len,
        "driving_side": spec.driving_side.value,
        "merge_conflicts": spec.merge_conflicts,
    }
    derived = build_conflict_matrix(
        spec.arms, spec.paths, spec.driving_side, spec.merge_conflicts
    )
    if spec.conflicts != derived:
        doc["conflict_matrix"] = spec.conflicts.as_array().astype(int).tolist()
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_snapshot(path: str | Path, spec: IntersectionSpec) -> TrafficSnapshot:
    """Read a snapshot in either the queues form or the array form."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise FileFormatError(f"{path}: snapshot must be a JSON object")
    tick = data.get("tick", 0)
    tick = _as_int(tick, "tick", path)
    if tick < 0:
        raise FileFormatError(f"{path}: tick must be >= 0")
    has_queues = "queues" in data
    has_array = "array" in data
    if has_queues == has_array:
        raise FileFormatError(f"{path}: snapshot needs exactly one of 'queues' or 'array'")

    if has_array:
        try:
            arr = np.asarray(data["array"])
        except ValueError:
            raise FileFormatError(f"{path}: array form is ragged") from None
        if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
            raise FileFormatError(f"{path}: array form must hold integers")
        return decode_snapshot(arr, spec, tick=tick)

    raw = data["queues"]
    if not isinstance(raw, list):
        raise FileFormatError(f"{path}: queues must be a list")
    queues = []
    for i, rq in enumerate(raw):
        if not isinstance(rq, list):
            raise FileFormatError(f"{path}: queue {i} must be a list")
        records = []
        for j, pair in enumerate(rq):
            if not isinstance(pair, list) or len(pair) != 2:
                raise FileFormatError(
                    f"{path}: queue {i} vehicle {j} must be a [priority, wait] pair"
                )
            pri = _as_int(pair[0], f"queue {i} vehicle {j} priority", path)
            wait = _as_int(pair[1], f"queue {i} vehicle {j} wait", path)
            records.append(VehicleRecord(priority=pri, wait=wait))
        queues.append(tuple(records))
    snap = TrafficSnapshot(tick=tick, queues=tuple(queues))
    spec.validate_snapshot(snap)
    return snap


def save_snapshot(
    s: TrafficSnapshot,
    path: str | Path,
    spec: IntersectionSpec | None = None,
    form: str = "queues",
) -> None:
    """Write a snapshot; the array form needs the spec for its capacity."""
    if form == "queues":
        doc = {
            "tick": s.tick,
            "queues": [[[v.priority, v.wait] for v in q] for q in s.queues],
        }
    elif form == "array":
        if spec is None:
            raise InvalidSpecError("array form needs the intersection spec")
        doc = {"tick": s.tick, "array": encode_snapshot(s, spec).tolist()}
    else:
        raise InvalidSpecError(f"unknown snapshot form {form!r}")
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def format_wait_log(entries: tuple[WaitLogEntry, ...] | list[WaitLogEntry]) -> str:
    """Render wait-log rows as CSV text with a trailing newline."""
    lines = [WAIT_LOG_HEADER]
    for e in entries:
        lines.append(
            f"{e.seed},{e.policy},{e.path},{e.priority},"
            f"{e.enter_tick},{e.exit_tick},{e.wait_ticks}"
        )
    return "\n".join(lines) + "\n"


def write_wait_log(
    entries: tuple[WaitLogEntry, ...] | list[WaitLogEntry], path: str | Path
) -> None:
    """Write the per-vehicle wait log as a CSV file."""
    Path(path).write_text(format_wait_log(entries), encoding="utf-8")
