"""Closed-loop episodes: one planner/trajectory/controller/plant instance per segment.

Segment ``i`` uses seed ``master_seed + i`` for both its sampler draws and
its measurement noise (the two streams are kept apart, see
:data:`clarkeframe.plant.NOISE_STREAM`). Segments never interact, so they may
be simulated on separate threads with bit-identical results.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .clarke import RobotGeometry, clarke_to_joints, joints_to_clarke
from .config import FrameworkConfig
from .control import ClarkeController, clamp_modulus
from .errors import DimensionError
from .plant import Plant
from .sampler import sample_clarke
from .trajectory import TrajectoryPlan, TrajectorySample, plan_clarke_trajectory

MODES = ("closed", "open")


@dataclass
class SegmentLog:
    """Per-tick record of one segment. Row ``k`` is the state at ``t[k]``
    together with the command issued at that tick."""

    index: int
    seed: int
    t: np.ndarray
    desired_pos: np.ndarray
    desired_vel: np.ndarray
    desired_acc: np.ndarray
    measured_c: np.ndarray
    true_c: np.ndarray
    command_c: np.ndarray
    command_joints: np.ndarray
    true_joints: np.ndarray
    measured_joints: np.ndarray
    plan: Optional[TrajectoryPlan] = None
    own_duration: float = 0.0

    @property
    def ticks(self) -> np.ndarray:
        return np.arange(len(self.t))

    @property
    def tracking_error(self) -> np.ndarray:
        """Desired minus true Clarke coordinates, shape (ticks, 2)."""
        return self.desired_pos - self.true_c


@dataclass
class ExperimentLog:
    segments: list[SegmentLog]
    t_star: float
    durations: list[float]
    seeds: list[int]
    master_seed: int
    mode: str
    config: dict = field(default_factory=dict)

    def manifest(self) -> dict:
        return {
            "config": self.config,
            "mode": self.mode,
            "master_seed": self.master_seed,
            "segment_seeds": self.seeds,
            "segment_durations": self.durations,
            "synchronized_duration": self.t_star,
            "ticks": int(len(self.segments[0].t)) if self.segments else 0,
        }


def itae(log: SegmentLog) -> float:
    """Integral of time-weighted absolute tracking error (Clarke norm), rectangle rule."""
    if len(log.t) < 2:
        return 0.0
    dt = log.t[1] - log.t[0]
    return float(np.sum(log.t * np.linalg.norm(log.tracking_error, axis=1)) * dt)


def _simulate_segment(index: int, seed: int, cfg: FrameworkConfig, t: np.ndarray,
                      ref_pos: np.ndarray, ref_vel: np.ndarray, ref_acc: np.ndarray,
                      initial_c: np.ndarray, mode: str) -> SegmentLog:
    geometry = cfg.geometry
    n, m = geometry.n, len(t)
    plant = Plant(replace(cfg.plant, rng_seed=seed), clarke_to_joints(initial_c, geometry), geometry)
    controller = ClarkeController(cfg.gains, geometry, cfg.plant.sample_time, cfg.max_modulus)

    measured_c = np.zeros((m, 2))
    true_c = np.zeros((m, 2))
    command_c = np.zeros((m, 2))
    command_joints = np.zeros((m, n))
    true_joints = np.zeros((m, n))
    measured_joints = np.zeros((m, n))

    for k in range(m):
        x = plant.state.actuator_positions
        rho_m, c_m = plant.measure()
        desired = TrajectorySample(t=t[k], position=ref_pos[k], velocity=ref_vel[k], acceleration=ref_acc[k])
        if mode == "closed":
            cmd = controller.command(desired, c_m)
        else:
            cmd = clamp_modulus(ref_pos[k], cfg.max_modulus)
        u = clarke_to_joints(cmd, geometry)

        true_joints[k] = x
        true_c[k] = joints_to_clarke(x, geometry, check=False)
        measured_joints[k] = rho_m
        measured_c[k] = c_m
        command_c[k] = cmd
        command_joints[k] = u
        plant.step(u)

    return SegmentLog(
        index=index, seed=seed, t=t, desired_pos=ref_pos, desired_vel=ref_vel, desired_acc=ref_acc,
        measured_c=measured_c, true_c=true_c, command_c=command_c, command_joints=command_joints,
        true_joints=true_joints, measured_joints=measured_joints,
    )


def _run_all(jobs, workers: Optional[int]):
    if workers is None or workers <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def episode_endpoints(cfg: FrameworkConfig, master_seed: int, starts=None, goals=None):
    """Start and goal Clarke coordinates per segment; missing ones are sampled."""
    out_starts, out_goals = [], []
    for i in range(cfg.segments):
        draws = None
        if starts is None or goals is None:
            draws = sample_clarke(cfg.bounds, cfg.geometry, master_seed + i, 2)
        if starts is not None:
            s = np.asarray(starts[i], dtype=float).reshape(2)
        elif goals is not None:
            s = np.zeros(2)
        else:
            s = draws[0]
        g = np.asarray(goals[i], dtype=float).reshape(2) if goals is not None else draws[1]
        out_starts.append(s)
        out_goals.append(g)
    return out_starts, out_goals


def synchronize(plans: Sequence[TrajectoryPlan], n: int, limits) -> tuple[list[TrajectoryPlan], float]:
    """Replan every segment with ``t_user`` raised to the longest duration."""
    t_star = max(p.duration for p in plans)
    synced = replace(limits, t_user=max(limits.t_user, t_star))
    return [plan_clarke_trajectory(p.start, p.goal, n, synced) for p in plans], t_star


def run_episode(cfg: FrameworkConfig, starts=None, goals=None, seed: Optional[int] = None,
                mode: str = "closed", workers: Optional[int] = None) -> ExperimentLog:
    """Plan, synchronize and simulate all segments.

    Parameters
    ----------
    starts, goals : sequence of (re, im) per segment, optional
        Missing goals are drawn from the sampler; missing starts are drawn
        too when goals are also missing, and are the straight pose otherwise.
    seed : int, optional
        Master seed; defaults to ``cfg.plant.rng_seed``.
    mode : {"closed", "open"}
        ``"open"`` sends the decoded reference straight to the plant.
    workers : int, optional
        Thread count; results do not depend on it.
    """
    _check_mode(mode)
    for name, seq in (("starts", starts), ("goals", goals)):
        if seq is not None and len(seq) != cfg.segments:
            raise DimensionError(f"{name} has {len(seq)} entries, config has {cfg.segments} segments")
    master = cfg.plant.rng_seed if seed is None else int(seed)
    seeds = [master + i for i in range(cfg.segments)]
    s_list, g_list = episode_endpoints(cfg, master, starts, goals)

    n = cfg.geometry.n
    own = [plan_clarke_trajectory(s, g, n, cfg.limits) for s, g in zip(s_list, g_list)]
    plans, t_star = synchronize(own, n, cfg.limits)

    dt = cfg.plant.sample_time
    ticks = int(round((t_star + cfg.settle_time) / dt)) + 1
    t = np.arange(ticks) * dt

    def job(i):
        def run():
            pos, vel, acc = plans[i].evaluate(t)
            log = _simulate_segment(i, seeds[i], cfg, t, pos, vel, acc, plans[i].start, mode)
            log.plan = plans[i]
            log.own_duration = own[i].duration
            return log
        return run

    logs = _run_all([job(i) for i in range(cfg.segments)], workers)
    return ExperimentLog(
        segments=logs, t_star=t_star, durations=[p.duration for p in own], seeds=seeds,
        master_seed=master, mode=mode, config=cfg.to_dict(),
    )


def external_injection(cfg: FrameworkConfig, stream, source_geometry: RobotGeometry,
                       times=None, seed: Optional[int] = None, mode: str = "closed",
                       workers: Optional[int] = None) -> ExperimentLog:
    """Drive the loop with joint-space references from an external source.

    ``stream`` holds one ``(ticks, source_geometry.n)`` array per segment.
    Each reference row is encoded with ``source_geometry``; commands are
    decoded for ``cfg.geometry``. Desired velocity and acceleration are the
    finite-difference derivatives of the encoded references.
    """
    _check_mode(mode)
    master = cfg.plant.rng_seed if seed is None else int(seed)
    arrays = [np.asarray(s, dtype=float) for s in stream]
    dt = cfg.plant.sample_time
    if not arrays or all(a.size == 0 for a in arrays):
        return ExperimentLog(segments=[], t_star=0.0, durations=[], seeds=[], master_seed=master,
                             mode=mode, config=cfg.to_dict())
    ticks = len(arrays[0])
    for i, a in enumerate(arrays):
        if a.ndim != 2 or a.shape[1] != source_geometry.n:
            raise DimensionError(
                f"external stream {i} has width {a.shape[-1] if a.ndim else 0}, "
                f"source geometry has n = {source_geometry.n}"
            )
        if len(a) != ticks:
            raise DimensionError("all external streams must have the same number of ticks")
    t = np.arange(ticks) * dt
    if times is not None:
        times = np.asarray(times, dtype=float)
        if times.shape != t.shape or np.any(np.abs(times - t) > 1e-9 + 1e-9 * np.abs(t)):
            raise ValueError("external stream timestamps are not on the sample-time grid")

    seeds = [master + i for i in range(len(arrays))]

    def job(i):
        def run():
            ref = joints_to_clarke(arrays[i], source_geometry)
            if ticks > 1:
                vel = np.gradient(ref, dt, axis=0)
                acc = np.gradient(vel, dt, axis=0)
            else:
                vel = np.zeros_like(ref)
                acc = np.zeros_like(ref)
            return _simulate_segment(i, seeds[i], cfg, t, ref, vel, acc, ref[0], mode)
        return run

    logs = _run_all([job(i) for i in range(len(arrays))], workers)
    duration = float(t[-1])
    return ExperimentLog(
        segments=logs, t_star=duration, durations=[duration] * len(logs), seeds=seeds,
        master_seed=master, mode=mode, config=cfg.to_dict(),
    )
