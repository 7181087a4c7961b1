"""Command-line surface: optimize, simulate, sweep, phases, validate.

Exit codes: 0 on success, 2 for unparseable or invalid inputs (JSON
errors are reported with line and column), 3 when no feasible schedule
exists for an optimization request.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .dynamics import DynamicsConfig
from .errors import (
    ConstraintViolationError,
    GreenlightError,
    NoFeasibleScheduleError,
)
from .fileio import _load_json, load_instance, load_snapshot, write_wait_log
from .model import MIN_ARMS, Turn, enumerate_feasible_phases
from .policies import PolicyKind
from .simulator import SimConfig, SimMode, run_episode
from .solver import SolverConfig, optimize_schedule

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3

SWEEP_HEADER = (
    "intensity,policy,seed,mean_wait_ticks,mean_wait_seconds,"
    "std_wait_ticks,max_wait_ticks,throughput,terminated"
)

DEFAULT_INTENSITIES = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass(frozen=True)
class SweepSpec:
    """One sweep request: the intensity grid, seeds, and policy set."""

    intensities: tuple[float, ...] = DEFAULT_INTENSITIES
    runs: int = 20
    policies: tuple[PolicyKind, ...] = (PolicyKind.HORIZON, PolicyKind.F1, PolicyKind.F2)
    base_seed: int = 0

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise GreenlightError("runs must be >= 1")
        if not self.intensities:
            raise GreenlightError("at least one intensity required")
        for x in self.intensities:
            if not 0.0 <= x <= 1.0:
                raise GreenlightError(f"intensity {x} outside [0, 1]")
        if not self.policies:
            raise GreenlightError("at least one policy required")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty intensity list")
    return values


def _policy_list(text: str) -> tuple[PolicyKind, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(PolicyKind(tok))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"unknown policy {tok!r}; expected horizon, f1, f2"
            ) from None
    if not out:
        raise argparse.ArgumentTypeError("empty policy list")
    return tuple(out)


def _add_dynamics_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phase-ticks", type=int, default=4, help="ticks each phase is held")
    p.add_argument("--slow-start", type=int, default=1, help="departure-free ticks after a path turns green")
    p.add_argument("--tick-seconds", type=float, default=5.0, help="seconds per tick, reporting only")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--horizon", type=int, default=3, help="number of phases planned jointly")
    p.add_argument("--wmax", type=int, default=60, help="starvation threshold in ticks; 0 disables the guard")
    p.add_argument(
        "--maximal",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="restrict candidates to maximal feasible phases",
    )


def _dynamics_from(args: argparse.Namespace) -> DynamicsConfig:
    return DynamicsConfig(
        phase_ticks=args.phase_ticks,
        slow_start=args.slow_start,
        tick_seconds=args.tick_seconds,
    )


def _solver_from(args: argparse.Namespace, dyn: DynamicsConfig) -> SolverConfig:
    wmax = args.wmax if args.wmax > 0 else None
    return SolverConfig(
        horizon=args.horizon,
        maximal_only=args.maximal,
        wmax=wmax,
        dynamics=dyn,
    )


def cmd_optimize(args: argparse.Namespace) -> int:
    spec = load_instance(args.instance)
    snap = load_snapshot(args.snapshot, spec)
    cfg = _solver_from(args, _dynamics_from(args))
    sol = optimize_schedule(spec, snap, spec.all_closed(), cfg)
    for idx, ph in enumerate(sol.schedule, 1):
        opened = " ".join(str(i) for i in ph.open_paths())
        print(f"phase {idx}: open {opened}")
    print(f"cost: {sol.cost}")
    print(f"nodes: {sol.nodes_explored}")
    print(f"elapsed_seconds: {sol.elapsed_seconds:.6f}")
    if args.out:
        report = {
            "schedule": [list(ph.open_paths()) for ph in sol.schedule],
            "cost": sol.cost,
            "nodes_explored": sol.nodes_explored,
            "elapsed_seconds": sol.elapsed_seconds,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = load_instance(args.instance)
    dyn = _dynamics_from(args)
    solver_cfg = _solver_from(args, dyn)
    cfg = SimConfig(
        spec=spec,
        intensity=args.intensity,
        seed=args.seed,
        mode=SimMode(args.mode),
        dynamics=dyn,
    )
    stats, log = run_episode(cfg, PolicyKind(args.policy), solver_cfg)
    print(f"mean_wait_ticks: {stats.mean_wait:.6f}")
    print(f"mean_wait_seconds: {stats.mean_wait_seconds:.6f}")
    print(f"std_wait_ticks: {stats.std_wait:.6f}")
    print(f"max_wait_ticks: {stats.max_wait}")
    print(f"throughput: {stats.throughput}")
    print(f"rejected_arrivals: {stats.rejected_arrivals}")
    print(f"starvation_events: {stats.starvation_events}")
    print(f"terminated: {str(stats.terminated).lower()}")
    print(f"ticks: {stats.ticks}")
    if args.out:
        write_wait_log(log, args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = load_instance(args.instance)
    dyn = _dynamics_from(args)
    solver_cfg = _solver_from(args, dyn)
    sweep = SweepSpec(
        intensities=args.intensity,
        runs=args.runs,
        policies=args.policy,
        base_seed=args.seed,
    )
    mode = SimMode(args.mode)

    lines = [SWEEP_HEADER]
    aggregates = []
    for intensity in sweep.intensities:
        for policy in sweep.policies:
            means = []
            stds = []
            stuck = 0
            for run in range(sweep.runs):
                seed = sweep.base_seed + run
                cfg = SimConfig(
                    spec=spec,
                    intensity=intensity,
                    seed=seed,
                    mode=mode,
                    dynamics=dyn,
                )
                stats, _ = run_episode(cfg, policy, solver_cfg)
                lines.append(
                    f"{intensity:.6f},{policy.value},{seed},"
                    f"{stats.mean_wait:.6f},{stats.mean_wait_seconds:.6f},"
                    f"{stats.std_wait:.6f},{stats.max_wait},"
                    f"{stats.throughput},{str(stats.terminated).lower()}"
                )
                means.append(stats.mean_wait)
                stds.append(stats.std_wait)
                if not stats.terminated:
                    stuck += 1
            aggregates.append((intensity, policy.value, means, stds, stuck))

    csv_text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        summary_stream = sys.stdout
    else:
        sys.stdout.write(csv_text)
        summary_stream = sys.stderr

    for intensity, policy, means, stds, stuck in aggregates:
        mean = sum(means) / len(means)
        std = sum(stds) / len(stds)
        line = (
            f"intensity {intensity:.2f} {policy}: "
            f"mean_wait_ticks={mean:.6f} std_wait_ticks={std:.6f}"
        )
        if stuck:
            line += f" non_terminated={stuck}"
        print(line, file=summary_stream)
    return EXIT_OK


def cmd_phases(args: argparse.Namespace) -> int:
    spec = load_instance(args.instance)
    phases = enumerate_feasible_phases(spec.conflicts, maximal_only=args.maximal)
    for ph in phases:
        print(ph)
    print(f"count: {len(phases)}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    data = _load_json(args.instance)
    problems: list[str] = []
    if not isinstance(data, dict):
        print(f"{args.instance}: instance must be a JSON object")
        return EXIT_INVALID

    arms = data.get("arms")
    if isinstance(arms, bool) or not isinstance(arms, int):
        problems.append("arms must be an integer")
        arms = None
    elif arms < MIN_ARMS:
        problems.append(f"arms must be >= {MIN_ARMS}, got {arms}")

    raw_paths = data.get("paths")
    n_paths = 0
    if not isinstance(raw_paths, list) or not raw_paths:
        problems.append("paths must be a nonempty list")
    else:
        n_paths = len(raw_paths)
        seen = {}
        turn_tokens = {t.value for t in Turn}
        for idx, item in enumerate(raw_paths):
            if not isinstance(item, dict):
                problems.append(f"path {idx} must be an object")
                continue
            entry = item.get("entry")
            turn = item.get("turn")
            if isinstance(entry, bool) or not isinstance(entry, int):
                problems.append(f"path {idx} entry must be an integer")
                continue
            if arms is not None and not 0 <= entry < arms:
                problems.append(f"path {idx} entry {entry} outside [0, {arms})")
            if turn not in turn_tokens:
                problems.append(f"path {idx} turn must be one of L, S, R")
                continue
            key = (entry, turn)
            if key in seen:
                problems.append(f"duplicate path at index {idx} (same as {seen[key]})")
            else:
                seen[key] = idx

    mql = data.get("max_queue_len")
    if isinstance(mql, bool) or not isinstance(mql, int):
        problems.append("max_queue_len must be an integer")
    elif mql < 1:
        problems.append("max_queue_len must be >= 1")

    side = data.get("driving_side", "left")
    if side not in ("left", "right"):
        problems.append("driving_side must be 'left' or 'right'")
    if not isinstance(data.get("merge_conflicts", False), bool):
        problems.append("merge_conflicts must be a boolean")

    matrix = data.get("conflict_matrix")
    if matrix is not None:
        if not isinstance(matrix, list):
            problems.append("conflict_matrix must be a list of rows")
        else:
            rows = len(matrix)
            if n_paths and rows != n_paths:
                problems.append(
                    f"conflict_matrix has {rows} rows, instance has {n_paths} paths"
                )
            for i, row in enumerate(matrix):
                if not isinstance(row, list) or len(row) != rows:
                    problems.append(f"matrix row {i} is not length {rows}")
                    continue
                for j, x in enumerate(row):
                    if x not in (0, 1):
                        problems.append(f"matrix entry ({i},{j}) must be 0 or 1")
            ok_shape = all(
                isinstance(r, list) and len(r) == rows for r in matrix
            )
            if ok_shape:
                for i in range(rows):
                    if matrix[i][i]:
                        problems.append(f"diagonal nonzero at ({i},{i})")
                    for j in range(i + 1, rows):
                        if matrix[i][j] != matrix[j][i]:
                            problems.append(f"asymmetric at ({i},{j})")

    if problems:
        for line in problems:
            print(line)
        return EXIT_INVALID

    spec = load_instance(args.instance)
    pairs = spec.conflicts.pairs()
    print("ok")
    print(f"conflict pairs: {len(pairs)}")
    for i, j in pairs:
        print(f"{i} {j}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenlight",
        description="Constraint-based traffic signal scheduling at a single junction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="plan a k-phase schedule for one snapshot")
    p_opt.add_argument("--instance", required=True, help="junction JSON file")
    p_opt.add_argument("--snapshot", required=True, help="queue snapshot JSON file")
    _add_dynamics_flags(p_opt)
    _add_solver_flags(p_opt)
    p_opt.add_argument("--out", help="write a JSON report here")
    p_opt.set_defaults(fn=cmd_optimize)

    p_sim = sub.add_parser("simulate", help="run one seeded episode")
    p_sim.add_argument("--instance", required=True, help="junction JSON file")
    p_sim.add_argument("--policy", default="horizon", choices=[p.value for p in PolicyKind])
    p_sim.add_argument("--mode", default="drain", choices=[m.value for m in SimMode])
    p_sim.add_argument("--intensity", type=float, required=True, help="load level in [0, 1]")
    p_sim.add_argument("--seed", type=int, default=0)
    _add_dynamics_flags(p_sim)
    _add_solver_flags(p_sim)
    p_sim.add_argument("--out", help="write the per-vehicle wait log CSV here")
    p_sim.set_defaults(fn=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="compare policies across load levels")
    p_sweep.add_argument("--instance", required=True, help="junction JSON file")
    p_sweep.add_argument(
        "--intensity",
        type=_float_list,
        default=DEFAULT_INTENSITIES,
        help="comma-separated load levels (default 0.1..1.0)",
    )
    p_sweep.add_argument("--runs", type=int, default=20, help="episodes per (intensity, policy)")
    p_sweep.add_argument("--seed", type=int, default=0, help="base seed; episode seed = base + run")
    p_sweep.add_argument(
        "--policy",
        type=_policy_list,
        default=(PolicyKind.HORIZON, PolicyKind.F1, PolicyKind.F2),
        help="comma-separated subset of horizon,f1,f2",
    )
    p_sweep.add_argument("--mode", default="drain", choices=[m.value for m in SimMode])
    _add_dynamics_flags(p_sweep)
    _add_solver_flags(p_sweep)
    p_sweep.add_argument("--out", help="write the CSV here instead of stdout")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_ph = sub.add_parser("phases", help="list feasible phases of an instance")
    p_ph.add_argument("--instance", required=True, help="junction JSON file")
    p_ph.add_argument("--maximal", action="store_true", help="list only maximal phases")
    p_ph.set_defaults(fn=cmd_phases)

    p_val = sub.add_parser("validate", help="check an instance file and list conflicts")
    p_val.add_argument("--instance", required=True, help="junction JSON file")
    p_val.set_defaults(fn=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (NoFeasibleScheduleError, ConstraintViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except GreenlightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
