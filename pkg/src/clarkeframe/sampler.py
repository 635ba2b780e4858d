"""Rejection-free sampling of feasible Clarke coordinates.

Modulus and argument are drawn independently::

    |rho| = phi_max * d * U[0, 1)
    arg   = theta_max * U[-1, 1)

Note the modulus is uniform in *radius*, not uniform over the disk area.
Random numbers come from numpy's PCG64 generator (``numpy.random.default_rng``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clarke import RobotGeometry


@dataclass(frozen=True)
class SampleBounds:
    phi_max: float = 2.0 * np.pi / 3.0
    theta_max: float = np.pi

    def __post_init__(self):
        if not self.phi_max > 0:
            raise ValueError(f"phi_max must be > 0, got {self.phi_max!r}")
        if not 0 < self.theta_max <= np.pi:
            raise ValueError(f"theta_max must lie in (0, pi], got {self.theta_max!r}")


def sample_polar(bounds: SampleBounds, geometry: RobotGeometry, rng_seed, count: int):
    """Draw ``count`` (modulus, argument) pairs; returns two arrays."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(rng_seed)
    u = rng.random((count, 2))
    modulus = bounds.phi_max * geometry.d * u[:, 0]
    argument = bounds.theta_max * (2.0 * u[:, 1] - 1.0)
    return modulus, argument


def sample_clarke(bounds: SampleBounds, geometry: RobotGeometry, rng_seed, count: int) -> np.ndarray:
    """Feasible Clarke coordinates, shape ``(count, 2)``. Deterministic per seed."""
    modulus, argument = sample_polar(bounds, geometry, rng_seed, count)
    return np.column_stack([modulus * np.cos(argument), modulus * np.sin(argument)])
