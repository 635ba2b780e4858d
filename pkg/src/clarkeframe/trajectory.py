"""Point-to-point trajectories in joint space and on the Clarke manifold.

Both generators scale a straight-line move with the same C^3 polynomial
path primitive ``s(tau)``, ``tau = t / T``. The duration ``T`` is the
smallest one that keeps the peak velocity and acceleration within limits
(or a user-requested longer one). Velocities and accelerations are always
evaluated from the closed-form derivatives of ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .clarke import check_displacement_constraint
from .errors import DimensionError

# peak values of s'(tau) and s''(tau) on [0, 1]
S_PRIME_MAX = 35.0 / 16.0
S_DDOT_MAX = 84.0 / (5.0 * np.sqrt(5.0))


def path_primitive(tau):
    """Return ``(s, s', s'')`` at ``tau`` (clipped to [0, 1]).

    ``s = -20 tau^7 + 70 tau^6 - 84 tau^5 + 35 tau^4``; derivatives are
    with respect to ``tau``.
    """
    tau = np.clip(np.asarray(tau, dtype=float), 0.0, 1.0)
    t2 = tau * tau
    t3 = t2 * tau
    t4 = t3 * tau
    s = t4 * (35.0 + tau * (-84.0 + tau * (70.0 - 20.0 * tau)))
    ds = t3 * (140.0 + tau * (-420.0 + tau * (420.0 - 140.0 * tau)))
    dds = t2 * (420.0 + tau * (-1680.0 + tau * (2100.0 - 840.0 * tau)))
    return s, ds, dds


@dataclass(frozen=True)
class KinematicLimits:
    v_max: float
    a_max: float
    t_user: float = 0.0

    def __post_init__(self):
        if not self.v_max > 0:
            raise ValueError(f"v_max must be > 0, got {self.v_max!r}")
        if not self.a_max > 0:
            raise ValueError(f"a_max must be > 0, got {self.a_max!r}")
        if not self.t_user >= 0:
            raise ValueError(f"t_user must be >= 0, got {self.t_user!r}")


def compute_duration(delta: float, limits: KinematicLimits) -> float:
    """Shortest duration moving ``delta`` within the limits, or ``t_user`` if longer."""
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta!r}")
    t_vel = S_PRIME_MAX * (delta / limits.v_max)
    t_acc = np.sqrt(S_DDOT_MAX * (delta / limits.a_max))
    return float(max(t_vel, t_acc, limits.t_user))


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray


@dataclass(frozen=True)
class LinearPlan:
    """Straight-line move from ``start`` to ``goal`` timed by the path primitive."""

    start: np.ndarray
    goal: np.ndarray
    duration: float

    def evaluate(self, t):
        """Positions, velocities and accelerations at times ``t``.

        For array ``t`` of shape ``(m,)`` each output has shape ``(m, dim)``.
        """
        t = np.asarray(t, dtype=float)
        delta = self.goal - self.start
        if self.duration == 0.0:
            pos = np.broadcast_to(self.start, t.shape + self.start.shape).copy()
            zero = np.zeros_like(pos)
            return pos, zero, zero.copy()
        s, ds, dds = path_primitive(t / self.duration)
        s, ds, dds = s[..., None], ds[..., None], dds[..., None]
        # convex form so both end points are reproduced bit-exactly
        pos = (1.0 - s) * self.start + s * self.goal
        vel = delta * (ds / self.duration)
        acc = delta * (dds / self.duration**2)
        return pos, vel, acc

    def sample(self, t: float) -> TrajectorySample:
        pos, vel, acc = self.evaluate(float(t))
        return TrajectorySample(t=float(t), position=pos, velocity=vel, acceleration=acc)


@dataclass(frozen=True)
class JointPlan(LinearPlan):
    limits: KinematicLimits = None

    @property
    def delta(self) -> float:
        return float(np.max(np.abs(self.goal - self.start)))


@dataclass(frozen=True)
class TrajectoryPlan(LinearPlan):
    """Plan on the Clarke manifold; ``limits_used`` holds the manifold-side limits."""

    limits_used: KinematicLimits = None

    @property
    def delta(self) -> float:
        return float(np.max(np.abs(self.goal - self.start)))


def plan_joint_trajectory(start, goal, limits: KinematicLimits) -> JointPlan:
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    if start.shape != goal.shape or start.ndim != 1:
        raise DimensionError(f"start {start.shape} and goal {goal.shape} must be equal-length vectors")
    check_displacement_constraint(start)
    check_displacement_constraint(goal)
    delta = float(np.max(np.abs(goal - start)))
    return JointPlan(start=start, goal=goal, duration=compute_duration(delta, limits), limits=limits)


def map_limits_to_manifold(start_c, goal_c, n: int, limits: KinematicLimits) -> KinematicLimits:
    """Manifold-side velocity/acceleration limits that keep every joint within ``limits``.

    Both limits are scaled by ``sqrt(2/n) * |dc|_inf / |dc|_2`` where ``dc``
    is the Clarke-coordinate displacement. A zero displacement returns the
    limits unchanged.
    """
    dc = np.asarray(goal_c, dtype=float) - np.asarray(start_c, dtype=float)
    norm2 = float(np.hypot(dc[0], dc[1]))
    if norm2 == 0.0:
        return limits
    ratio = np.sqrt(2.0 / n) * float(np.max(np.abs(dc))) / norm2
    return replace(limits, v_max=ratio * limits.v_max, a_max=ratio * limits.a_max)


def plan_clarke_trajectory(start_c, goal_c, n: int, limits: KinematicLimits) -> TrajectoryPlan:
    start_c = np.asarray(start_c, dtype=float).reshape(2)
    goal_c = np.asarray(goal_c, dtype=float).reshape(2)
    mapped = map_limits_to_manifold(start_c, goal_c, n, limits)
    delta = float(np.max(np.abs(goal_c - start_c)))
    return TrajectoryPlan(
        start=start_c, goal=goal_c, duration=compute_duration(delta, mapped), limits_used=mapped
    )


def sample_times(duration: float, dt: float) -> np.ndarray:
    """Grid ``0, dt, 2dt, ...`` strictly before ``duration``, then ``duration`` itself.

    Always has at least two entries, so a zero-length plan yields ``[0, 0]``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    count = int(np.ceil(duration / dt - 1e-9)) if duration > 0 else 1
    grid = np.arange(max(count, 1)) * dt
    return np.append(grid, duration)
