"""Constant-curvature backbone poses and a numeric parallel-curve check.

Bending convention: at ``theta = 0`` the segment bends in the x-z plane
toward +x; a pose at arc fraction ``s`` has orientation
``Rz(theta) @ Ry(s*phi) @ Rz(-theta)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clarke import RobotGeometry, clarke_to_arc
from .errors import RegularityError


@dataclass(frozen=True)
class Pose:
    position: np.ndarray
    orientation: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        """Homogeneous 4x4 transform."""
        T = np.eye(4)
        T[:3, :3] = self.orientation
        T[:3, 3] = self.position
        return T

    @classmethod
    def from_matrix(cls, T: np.ndarray) -> "Pose":
        return cls(position=T[:3, 3].copy(), orientation=T[:3, :3].copy())


def _rot_z(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_y(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def cc_forward_kinematics(c, geometry: RobotGeometry, samples: int = 2) -> list[Pose]:
    """Poses along one constant-curvature segment at evenly spaced arc fractions.

    ``c`` is the Clarke coordinate pair of the segment. The first pose is
    always the identity, the last is the tip.
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    arc = clarke_to_arc(np.asarray(c, dtype=float), geometry)
    phi, theta = float(arc.phi), float(arc.theta)
    Rz, Rz_inv = _rot_z(theta), _rot_z(-theta)

    poses = []
    for s in np.linspace(0.0, 1.0, samples):
        length = s * geometry.l
        angle = s * phi
        # (1 - cos a)/a and sin(a)/a written with sinc so that a -> 0 is exact
        x = length * (angle / 2.0) * np.sinc(angle / (2.0 * np.pi)) ** 2
        z = length * np.sinc(angle / np.pi)
        position = Rz @ np.array([x, 0.0, z])
        orientation = Rz @ _rot_y(angle) @ Rz_inv
        poses.append(Pose(position=position, orientation=orientation))
    return poses


def chain_segments(per_segment_poses: Sequence[Sequence[Pose]]) -> list[Pose]:
    """Express each segment's poses in the base frame of the whole robot."""
    out: list[Pose] = []
    base = np.eye(4)
    for poses in per_segment_poses:
        for pose in poses:
            out.append(Pose.from_matrix(base @ pose.matrix))
        if len(poses):
            base = base @ poses[-1].matrix
    return out


def bending_angle_from_orientation(R: np.ndarray) -> float:
    """Recover ``phi`` in ``[0, pi]`` from a constant-curvature tip rotation."""
    return float(np.arccos(np.clip(R[2, 2], -1.0, 1.0)))


def polyline_length(points: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def curve_normals(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit tangents and left normals from second-order finite differences."""
    tangents = np.gradient(points, axis=0, edge_order=2)
    tangents /= np.linalg.norm(tangents, axis=1, keepdims=True)
    normals = np.column_stack([-tangents[:, 1], tangents[:, 0]])
    return tangents, normals


def offset_curve(points, d: float) -> np.ndarray:
    """Parallel curve at signed distance ``d`` along the left normal."""
    points = np.asarray(points, dtype=float)
    _, normals = curve_normals(points)
    return points + d * normals


def parallel_curve_displacement(curve, d: float) -> tuple[float, float]:
    """Arc-length displacement between the two parallel curves of a planar curve.

    Returns ``(delta_length, total_turning)`` where ``delta_length`` is half the
    difference of the offset lengths at ``-d`` and ``+d`` and
    ``total_turning`` is the signed sum of tangent-angle increments. For a
    regular smooth curve ``delta_length == d * total_turning`` up to O(h^2).

    Raises
    ------
    RegularityError
        If ``|d|`` reaches the local radius of curvature anywhere, so that an
        offset curve folds back on itself.
    """
    points = np.asarray(curve, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2 or len(points) < 3:
        raise ValueError("curve must be an (m, 2) array with m >= 3")
    steps = np.diff(points, axis=0)
    if np.any(np.linalg.norm(steps, axis=1) == 0.0):
        raise ValueError("consecutive curve points must be distinct")

    tangents, normals = curve_normals(points)
    heading = np.arctan2(tangents[:, 1], tangents[:, 0])
    turning = np.diff(heading)
    turning = (turning + np.pi) % (2.0 * np.pi) - np.pi

    inner = points + d * normals
    outer = points - d * normals
    for off in (inner, outer):
        # an offset segment pointing against the original one means a fold
        if np.any(np.sum(np.diff(off, axis=0) * steps, axis=1) <= 0.0):
            raise RegularityError(f"offset distance {d} reaches the local radius of curvature")
    curvature = np.abs(turning) / np.linalg.norm(steps, axis=1)
    if abs(d) * curvature.max() >= 1.0:
        raise RegularityError(f"offset distance {d} reaches the local radius of curvature")

    delta_length = 0.5 * (polyline_length(outer) - polyline_length(inner))
    return delta_length, float(np.sum(turning))
