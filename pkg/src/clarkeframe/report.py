"""Figures rendered from the CSV files of a run directory.

Needs matplotlib (``pip install clarkeframe[plot]``). Everything is read back
from disk, so these recipes work on any directory written by ``clarkeframe run``.
"""
from __future__ import annotations

import glob
import json
import os
import re

import numpy as np

MM = 1e3


def _mpl():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def read_csv(path: str) -> np.ndarray:
    return np.genfromtxt(path, delimiter=",", names=True)


def _segment_files(directory: str, suffix: str = "") -> list[str]:
    pattern = re.compile(rf"segment_(\d+){re.escape(suffix)}\.csv$")
    found = []
    for path in glob.glob(os.path.join(directory, "segment_*.csv")):
        m = pattern.search(os.path.basename(path))
        if m:
            found.append((int(m.group(1)), path))
    return [p for _, p in sorted(found)]


def plot_tracking(directory: str, out_path: str, v_max=None, a_max=None) -> str:
    """Per-segment grid: [open loop,] closed loop, desired velocity, desired acceleration.

    The open-loop column appears when ``segment_<i>_open.csv`` files exist.
    Plotted in millimeters; dashed lines mark the manifest's joint limits.
    """
    plt = _mpl()
    closed = _segment_files(directory)
    open_ = _segment_files(directory, "_open")
    if not closed:
        raise FileNotFoundError(f"no segment CSV files in {directory}")
    if v_max is None or a_max is None:
        manifest = os.path.join(directory, "manifest.json")
        if os.path.exists(manifest):
            with open(manifest) as fh:
                limits = json.load(fh)["config"]["limits"]
            v_max, a_max = limits["v_max"], limits["a_max"]

    cols = 4 if len(open_) == len(closed) else 3
    fig, axes = plt.subplots(len(closed), cols, figsize=(3.2 * cols, 2.2 * len(closed)),
                             sharex=True, squeeze=False)
    for i, path in enumerate(closed):
        data = read_csv(path)
        t = data["t"]
        panels = []
        if cols == 4:
            panels.append(("open loop", read_csv(open_[i])))
        panels.append(("closed loop", data))
        for j, (title, run) in enumerate(panels):
            ax = axes[i, j]
            for key, color in (("re", "C0"), ("im", "C1")):
                ax.plot(t, run[f"{key}_m"] * MM, color=color, lw=0.6, alpha=0.6)
                ax.plot(t, run[f"{key}_d"] * MM, color=color, ls="--", lw=1.0, label=key)
            ax.set_title(f"segment {i + 1}: {title}", fontsize=8)
            ax.set_ylabel("mm")
        ax_v, ax_a = axes[i, cols - 2], axes[i, cols - 1]
        ax_v.plot(t, data["re_dot_d"] * MM, t, data["im_dot_d"] * MM)
        ax_a.plot(t, data["re_ddot_d"] * MM, t, data["im_ddot_d"] * MM)
        ax_v.set_ylabel("mm/s")
        ax_a.set_ylabel("mm/s$^2$")
        for ax, lim in ((ax_v, v_max), (ax_a, a_max)):
            if lim is not None:
                ax.axhline(lim * MM, color="k", ls=":", lw=0.8)
                ax.axhline(-lim * MM, color="k", ls=":", lw=0.8)
    axes[0, 0].legend(fontsize=7)
    for ax in axes[-1]:
        ax.set_xlabel("t / s")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_plan(csv_path: str, out_path: str) -> str:
    """Clarke coordinates and their derivatives from a ``plan`` CSV."""
    plt = _mpl()
    data = read_csv(csv_path)
    t = data["t"]
    fig, axes = plt.subplots(3, 1, figsize=(5, 6), sharex=True)
    for ax, (suffix, unit) in zip(axes, (("", "mm"), ("_dot", "mm/s"), ("_ddot", "mm/s$^2$"))):
        ax.plot(t, data[f"re{suffix}"] * MM, label="re")
        ax.plot(t, data[f"im{suffix}"] * MM, label="im")
        ax.set_ylabel(unit)
    axes[0].legend(fontsize=7)
    axes[-1].set_xlabel("t / s")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_backbone(csv_path: str, out_path: str, frames: int = 6) -> str:
    """Side view (x-z) of evenly chosen backbone frames."""
    plt = _mpl()
    data = read_csv(csv_path)
    ids = np.unique(data["frame"]).astype(int)
    chosen = ids[np.linspace(0, len(ids) - 1, min(frames, len(ids))).astype(int)]
    fig, ax = plt.subplots(figsize=(4, 4))
    for f in chosen:
        rows = data[data["frame"] == f]
        ax.plot(rows["x"] * MM, rows["z"] * MM, lw=1.0, label=f"t = {rows['t'][0]:.2f} s")
    ax.set_aspect("equal")
    ax.set_xlabel("x / mm")
    ax.set_ylabel("z / mm")
    ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_run(directory: str) -> list[str]:
    """Render every figure a run directory supports; returns the image paths."""
    out = [plot_tracking(directory, os.path.join(directory, "tracking.png"))]
    backbone = os.path.join(directory, "backbone.csv")
    if os.path.exists(backbone) and os.path.getsize(backbone) > 0:
        out.append(plot_backbone(backbone, os.path.join(directory, "backbone.png")))
    return out
