"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 validation failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional, Sequence

import numpy as np

from .clarke import RobotGeometry, clarke_to_joints, constraint_residual, joints_to_clarke
from .config import FrameworkConfig, OutputSettings, geometry_from_dict, load_config
from .errors import ClarkeFrameError, ConfigError
from .orchestrator import external_injection, run_episode
from .output import fmt, joint_columns, write_experiment, write_rows
from .sampler import sample_clarke
from .trajectory import plan_clarke_trajectory, sample_times

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 1, 2

# residual accepted on --joints input; the encoder projects anything smaller away
JOINT_INPUT_TOL = 1e-6


class UsageError(ClarkeFrameError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _pair(text: str, name: str) -> np.ndarray:
    values = _floats(text)
    if len(values) != 2:
        raise UsageError(f"{name} needs exactly two values 're,im', got {text!r}")
    return np.array(values)


def _load(args) -> tuple[FrameworkConfig, OutputSettings]:
    if args.config:
        cfg, out = load_config(args.config)
    else:
        cfg, out = FrameworkConfig(), OutputSettings()
    if args.n is not None:
        g = cfg.geometry
        cfg = FrameworkConfig(
            geometry=RobotGeometry(n=args.n, l=g.l, d=g.d), bounds=cfg.bounds, limits=cfg.limits,
            gains=cfg.gains, plant=cfg.plant, segments=cfg.segments, settle_time=cfg.settle_time,
            clamp_commands=cfg.clamp_commands,
        )
    return cfg, out


def _load_geometry(path: str) -> RobotGeometry:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ConfigError("geometry file must hold a JSON object")
    if "geometry" in doc:
        doc = doc["geometry"]
    unknown = set(doc) - {"n", "l", "d", "psi"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", path="geometry")
    return geometry_from_dict(doc)


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _emit(args, header, rows):
    fh, close = _open_out(args.output)
    try:
        write_rows(fh, header, rows)
    finally:
        if close:
            fh.close()


def cmd_transform(args) -> int:
    cfg, _ = _load(args)
    scale = 1e-3 if args.mm else 1.0
    if args.joints is not None:
        rho = np.array(_floats(args.joints)) * scale
        if rho.size != cfg.geometry.n:
            raise UsageError(f"--joints has {rho.size} values, geometry has n = {cfg.geometry.n}")
        residual = float(constraint_residual(rho))
        if abs(residual) > JOINT_INPUT_TOL:
            print(f"error: displacement constraint violated, residual {fmt(residual / scale)}", file=sys.stderr)
            print(f"residual,{fmt(residual / scale)}")
            return EXIT_INVALID
        if args.to_geometry:
            target = _load_geometry(args.to_geometry)
            out = clarke_to_joints(joints_to_clarke(rho, cfg.geometry, check=False), target)
            _emit(args, joint_columns("rho_", target.n), [out / scale])
        else:
            c = joints_to_clarke(rho, cfg.geometry, check=False)
            _emit(args, ["rho_re", "rho_im"], [c / scale])
    else:
        c = _pair(args.clarke, "--clarke") * scale
        geometry = _load_geometry(args.to_geometry) if args.to_geometry else cfg.geometry
        _emit(args, joint_columns("rho_", geometry.n), [clarke_to_joints(c, geometry) / scale])
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg, _ = _load(args)
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    seed = cfg.plant.rng_seed if args.seed is None else args.seed
    scale = 1e3 if args.mm else 1.0
    samples = sample_clarke(cfg.bounds, cfg.geometry, seed, args.count)
    joints = clarke_to_joints(samples, cfg.geometry)
    header = ["index", "rho_re", "rho_im"] + joint_columns("rho_", cfg.geometry.n)
    _emit(args, header, ([i, *(samples[i] * scale), *(joints[i] * scale)] for i in range(args.count)))
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg, _ = _load(args)
    scale = 1e-3 if args.mm else 1.0
    start = _pair(args.start, "--start") * scale
    goal = _pair(args.goal, "--goal") * scale
    dt = cfg.plant.sample_time if args.dt is None else args.dt
    if not dt > 0:
        raise UsageError(f"--dt must be > 0, got {dt}")
    plan = plan_clarke_trajectory(start, goal, cfg.geometry.n, cfg.limits)
    t = sample_times(plan.duration, dt)
    pos, vel, acc = plan.evaluate(t)
    joints = clarke_to_joints(pos, cfg.geometry)
    header = ["t", "re", "im", "re_dot", "im_dot", "re_ddot", "im_ddot"] + joint_columns("rho_", cfg.geometry.n)
    out = 1.0 / scale
    rows = ([t[k], *(pos[k] * out), *(vel[k] * out), *(acc[k] * out), *(joints[k] * out)] for k in range(len(t)))
    _emit(args, header, rows)
    if args.figure:
        if not args.output or args.output == "-":
            raise UsageError("--figure needs --output so the plot can be rendered from the CSV")
        from .report import plot_plan
        plot_plan(args.output, args.figure)
    return EXIT_OK


def _read_goals(path: str, segments: int):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "goals" not in doc:
        raise ConfigError("goals file must be a JSON object with a 'goals' list", path="goals")
    unknown = set(doc) - {"goals", "starts"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", path="goals")
    out = []
    for key in ("starts", "goals"):
        values = doc.get(key)
        if values is not None:
            arr = np.asarray(values, dtype=float)
            if arr.shape != (segments, 2):
                raise ConfigError(f"expected {segments} pairs [re, im], got shape {arr.shape}", path=key)
        out.append(values)
    return out


def _read_external(path: str, width: int):
    """Long-format CSV ``t,segment,rho_1..rho_m`` -> (times, [array per segment])."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        rows = [r for r in reader if r]
    expected = ["t", "segment"] + joint_columns("rho_", width)
    if header != expected:
        raise ConfigError(f"external stream header must be {','.join(expected)}", path="external")
    if not rows:
        return None, []
    try:
        data = np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise ConfigError(str(exc), path="external") from exc
    ids = sorted(set(data[:, 1].astype(int)))
    streams, times = [], None
    for seg in ids:
        block = data[data[:, 1].astype(int) == seg]
        if times is None:
            times = block[:, 0]
        elif len(block) != len(times) or np.any(block[:, 0] != times):
            raise ConfigError("all segments need the same timestamps", path="external")
        streams.append(block[:, 2:])
    return times, streams


def cmd_run(args) -> int:
    cfg, out = _load(args)
    directory = args.output_dir or out.directory
    stride = args.backbone_stride or out.backbone_stride

    if args.external:
        if not args.external_geometry:
            raise UsageError("--external needs --external-geometry")
        source = _load_geometry(args.external_geometry)
        times, streams = _read_external(args.external, source.n)

        def run(mode):
            return external_injection(cfg, streams, source, times=times, seed=args.seed, mode=mode,
                                      workers=args.workers)
    else:
        starts = goals = None
        if args.goals:
            starts, goals = _read_goals(args.goals, cfg.segments)

        def run(mode):
            return run_episode(cfg, starts=starts, goals=goals, seed=args.seed, mode=mode, workers=args.workers)

    log = run("closed")
    paths = write_experiment(log, directory, cfg.geometry, stride, out.backbone_samples)
    if args.figures:
        open_log = run("open")
        write_experiment(open_log, directory, cfg.geometry, stride, out.backbone_samples, suffix="_open")
        if log.segments:
            from .report import render_run
            paths += render_run(directory)
    print(f"synchronized duration {fmt(log.t_star)} s, {len(log.segments)} segment(s)")
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import render_run
    for p in render_run(args.directory):
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clarkeframe", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (missing keys take default values)")
    common.add_argument("--n", type=int, help="override joint count (equally spaced joints)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="joint values <-> Clarke coordinates")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--joints", help="comma-separated joint displacements")
    group.add_argument("--clarke", help="Clarke coordinates 're,im'")
    p.add_argument("--to-geometry", help="geometry JSON of a target robot (encoder-decoder transfer)")
    p.add_argument("--mm", action="store_true", help="inputs and outputs in millimeters")
    p.add_argument("--output", "-o", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("sample", parents=[common], help="draw feasible Clarke coordinates")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, help="RNG seed (default: plant.rng_seed of the config)")
    p.add_argument("--mm", action="store_true", help="write lengths in millimeters")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("plan", parents=[common], help="point-to-point trajectory on the manifold")
    p.add_argument("--start", required=True, help="'re,im'")
    p.add_argument("--goal", required=True, help="'re,im'")
    p.add_argument("--dt", type=float, help="sampling step in seconds (default: plant sample time)")
    p.add_argument("--mm", action="store_true", help="inputs and outputs in millimeters")
    p.add_argument("--output", "-o")
    p.add_argument("--figure", help="also render the plan to this image file (needs matplotlib)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("run", parents=[common], help="simulate a closed-loop episode")
    p.add_argument("--seed", type=int, help="master seed (default: plant.rng_seed of the config)")
    p.add_argument("--goals", help="JSON file {'goals': [[re, im], ...], 'starts': [...]}")
    p.add_argument("--external", help="CSV stream t,segment,rho_1..rho_m replacing the planner")
    p.add_argument("--external-geometry", help="geometry JSON of the external stream")
    p.add_argument("--output-dir", help="directory for CSV/JSON outputs")
    p.add_argument("--backbone-stride", type=int, help="ticks between backbone frames")
    p.add_argument("--workers", type=int, default=1, help="threads across segments")
    p.add_argument("--figures", action="store_true",
                   help="also run open loop and render PNG figures next to the CSVs (needs matplotlib)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="render figures from an existing run directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ClarkeFrameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
