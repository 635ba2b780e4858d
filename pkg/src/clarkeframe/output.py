"""Deterministic CSV and JSON writers.

Floats are written with ``repr`` (shortest round-trip form), columns in a
fixed order, LF line endings, so repeated seeded runs are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import os
import platform
from typing import Iterable, Sequence, TextIO

import numpy as np

from .clarke import RobotGeometry
from .geometry import cc_forward_kinematics, chain_segments
from .orchestrator import ExperimentLog, SegmentLog


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    v = float(x)
    if v == 0.0:
        v = 0.0  # drop the sign of negative zero
    return repr(v)


def write_rows(fh: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def joint_columns(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def segment_header(n: int) -> list[str]:
    return (
        ["tick", "t", "re_d", "im_d", "re_dot_d", "im_dot_d", "re_ddot_d", "im_ddot_d",
         "re_m", "im_m", "re_true", "im_true", "re_cmd", "im_cmd"]
        + joint_columns("cmd_rho_", n) + joint_columns("x_", n) + joint_columns("meas_rho_", n)
    )


def segment_rows(log: SegmentLog):
    for k in range(len(log.t)):
        yield [k, log.t[k], *log.desired_pos[k], *log.desired_vel[k], *log.desired_acc[k],
               *log.measured_c[k], *log.true_c[k], *log.command_c[k],
               *log.command_joints[k], *log.true_joints[k], *log.measured_joints[k]]


BACKBONE_HEADER = ["frame", "t", "segment", "s", "x", "y", "z",
                   "r00", "r01", "r02", "r10", "r11", "r12", "r20", "r21", "r22"]


def backbone_rows(log: ExperimentLog, geometry: RobotGeometry, stride: int = 10, samples: int = 11):
    """Chained constant-curvature poses of the true robot state every ``stride`` ticks.

    ``s`` is the arc fraction within the segment.
    """
    if not log.segments:
        return
    ticks = len(log.segments[0].t)
    fractions = np.linspace(0.0, 1.0, samples)
    for frame, k in enumerate(range(0, ticks, stride)):
        per_segment = [cc_forward_kinematics(seg.true_c[k], geometry, samples) for seg in log.segments]
        poses = chain_segments(per_segment)
        t = log.segments[0].t[k]
        for j, pose in enumerate(poses):
            seg, i = divmod(j, samples)
            yield [frame, t, seg, fractions[i], *pose.position, *pose.orientation.ravel()]


def _versions() -> dict:
    from . import __version__
    return {"clarkeframe": __version__, "numpy": np.__version__, "python": platform.python_version()}


def write_experiment(log: ExperimentLog, directory, geometry: RobotGeometry,
                     backbone_stride: int = 10, backbone_samples: int = 11, suffix: str = "") -> list[str]:
    """Write ``segment_<i><suffix>.csv``, ``backbone<suffix>.csv`` and ``manifest<suffix>.json``.

    Returns the written paths.
    """
    os.makedirs(directory, exist_ok=True)
    paths = []
    for seg in log.segments:
        path = os.path.join(directory, f"segment_{seg.index}{suffix}.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_rows(fh, segment_header(geometry.n), segment_rows(seg))
        paths.append(path)
    path = os.path.join(directory, f"backbone{suffix}.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_rows(fh, BACKBONE_HEADER, backbone_rows(log, geometry, backbone_stride, backbone_samples))
    paths.append(path)

    manifest = log.manifest()
    manifest["backbone"] = {"stride": backbone_stride, "samples": backbone_samples}
    manifest["files"] = [os.path.basename(p) for p in paths]
    manifest["versions"] = _versions()
    path = os.path.join(directory, f"manifest{suffix}.json")
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(path)
    return paths


def rows_to_string(header, rows) -> str:
    buf = io.StringIO()
    write_rows(buf, header, rows)
    return buf.getvalue()
