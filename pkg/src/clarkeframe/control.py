"""Feedback controllers acting on Clarke coordinates.

The plant takes displacement commands, so pre-compensation is a position
feedforward: ``command = desired + K_P e (+ K_D de/dt)`` with
``e = desired - measured``. The command is decoded to joint values, which
always satisfy the displacement constraint.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .clarke import RobotGeometry, clarke_to_joints
from .trajectory import TrajectorySample


@dataclass(frozen=True)
class ControllerGains:
    """Scalar gains ``k_p``, ``k_d``; full 2x2 matrices override them when given."""

    k_p: float = 10.0
    k_d: float = 0.0
    K_P: Optional[np.ndarray] = field(default=None, compare=False)
    K_D: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if self.K_P is None and not self.k_p > 0:
            raise ValueError(f"k_p must be > 0, got {self.k_p!r}")
        if self.K_D is None and not self.k_d >= 0:
            raise ValueError(f"k_d must be >= 0, got {self.k_d!r}")
        for name in ("K_P", "K_D"):
            m = getattr(self, name)
            if m is not None:
                m = np.asarray(m, dtype=float)
                if m.shape != (2, 2):
                    raise ValueError(f"{name} must be 2x2, got shape {m.shape}")
                object.__setattr__(self, name, m)

    @property
    def kp_matrix(self) -> np.ndarray:
        return self.K_P if self.K_P is not None else self.k_p * np.eye(2)

    @property
    def kd_matrix(self) -> np.ndarray:
        return self.K_D if self.K_D is not None else self.k_d * np.eye(2)

    def to_dict(self) -> dict:
        out = {"k_p": self.k_p, "k_d": self.k_d}
        if self.K_P is not None:
            out["K_P"] = self.K_P.tolist()
        if self.K_D is not None:
            out["K_D"] = self.K_D.tolist()
        return out


def p_precomp_step(desired: TrajectorySample, measured_c, gains: ControllerGains) -> np.ndarray:
    ref = np.asarray(desired.position, dtype=float)
    error = ref - np.asarray(measured_c, dtype=float)
    return ref + gains.kp_matrix @ error


def pd_step(desired: TrajectorySample, measured_c, measured_c_prev, dt: float,
            gains: ControllerGains) -> np.ndarray:
    """PD law with the error rate from a backward difference of the measurement.

    ``de/dt ~ desired_velocity - (measured - measured_prev) / dt``; the
    measured velocity itself is never used.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    ref = np.asarray(desired.position, dtype=float)
    measured_c = np.asarray(measured_c, dtype=float)
    error = ref - measured_c
    error_rate = np.asarray(desired.velocity, dtype=float) - (measured_c - np.asarray(measured_c_prev)) / dt
    return ref + gains.kp_matrix @ error + gains.kd_matrix @ error_rate


def decode_command(command_c, geometry: RobotGeometry) -> np.ndarray:
    return clarke_to_joints(command_c, geometry)


def clamp_modulus(c, max_modulus: Optional[float]) -> np.ndarray:
    """Scale ``c`` back onto the disk of radius ``max_modulus`` if it lies outside."""
    c = np.asarray(c, dtype=float)
    if max_modulus is None:
        return c
    r = float(np.hypot(c[0], c[1]))
    if r > max_modulus:
        return c * (max_modulus / r)
    return c


class ClarkeController:
    """Stateful wrapper around :func:`pd_step` holding the previous measurement.

    With ``k_d = 0`` (and no ``K_D``) it reduces to :func:`p_precomp_step`.
    Commands are clamped to ``max_modulus`` before decoding.
    """

    def __init__(self, gains: ControllerGains, geometry: RobotGeometry, dt: float,
                 max_modulus: Optional[float] = None):
        self.gains = gains
        self.geometry = geometry
        self.dt = dt
        self.max_modulus = max_modulus
        self._prev: Optional[np.ndarray] = None

    def reset(self):
        self._prev = None

    def command(self, desired: TrajectorySample, measured_c) -> np.ndarray:
        """Clamped Clarke-coordinate command for this tick."""
        measured_c = np.asarray(measured_c, dtype=float)
        # first tick has no history: the D term sees only the desired velocity
        prev = measured_c if self._prev is None else self._prev
        if self.gains.K_D is None and self.gains.k_d == 0.0:
            cmd = p_precomp_step(desired, measured_c, self.gains)
        else:
            cmd = pd_step(desired, measured_c, prev, self.dt, self.gains)
        self._prev = measured_c
        return clamp_modulus(cmd, self.max_modulus)

    def step(self, desired: TrajectorySample, measured_c) -> np.ndarray:
        """Joint-space command for this tick."""
        return decode_command(self.command(desired, measured_c), self.geometry)
