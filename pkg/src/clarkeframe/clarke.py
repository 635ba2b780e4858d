"""Clarke transform for displacement-actuated continuum robots.

Joint displacements ``rho`` (length ``n``, summing to zero) and Clarke
coordinates ``(rho_re, rho_im)`` are two views of the same 2-DOF manifold.
All functions here are closed form and accept stacked inputs: a joint array
of shape ``(..., n)`` maps to Clarke coordinates of shape ``(..., 2)`` and
back.

Lengths are meters, angles radians.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import ConstraintError, DimensionError, GeometryError

VALIDATION_TOL = 1e-9


def equal_spacing(n: int) -> tuple[float, ...]:
    """Joint angles ``2*pi*i/n`` for ``i = 0..n-1``."""
    return tuple(2.0 * np.pi * i / n for i in range(n))


def symmetry_residuals(psi: Sequence[float]) -> dict[str, float]:
    """Residuals of the five sums that make the Clarke matrix right-invertible."""
    psi = np.asarray(psi, dtype=float)
    n = psi.size
    c, s = np.cos(psi), np.sin(psi)
    return {
        "sum(cos psi) = 0": abs(c.sum()),
        "sum(sin psi) = 0": abs(s.sum()),
        "sum(cos psi * sin psi) = 0": abs((c * s).sum()),
        "sum(cos^2 psi) = n/2": abs((c * c).sum() - n / 2),
        "sum(sin^2 psi) = n/2": abs((s * s).sum() - n / 2),
    }


@dataclass(frozen=True)
class RobotGeometry:
    """Kinematic design parameters of one segment.

    ``psi`` defaults to equal spacing. Arbitrary angle lists are accepted as
    long as they are symmetric in the sense of :func:`symmetry_residuals`.
    """

    n: int
    l: float
    d: float
    psi: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise GeometryError(f"n must be an integer >= 3, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not self.l > 0:
            raise GeometryError(f"segment length l must be > 0, got {self.l!r}")
        if not self.d > 0:
            raise GeometryError(f"joint distance d must be > 0, got {self.d!r}")
        object.__setattr__(self, "l", float(self.l))
        object.__setattr__(self, "d", float(self.d))
        if self.psi is None:
            object.__setattr__(self, "psi", equal_spacing(self.n))
        else:
            object.__setattr__(self, "psi", tuple(float(p) for p in self.psi))
        if len(self.psi) != self.n:
            raise GeometryError(f"psi has {len(self.psi)} angles, expected n = {self.n}")
        for name, residual in symmetry_residuals(self.psi).items():
            if residual > VALIDATION_TOL:
                raise GeometryError(
                    f"joint angles are not symmetric: {name} violated (residual {residual:.3e})"
                )

    @cached_property
    def clarke_matrix(self) -> np.ndarray:
        """Encoder ``M_P`` (2 x n)."""
        psi = np.asarray(self.psi)
        return (2.0 / self.n) * np.vstack([np.cos(psi), np.sin(psi)])

    @cached_property
    def inverse_clarke_matrix(self) -> np.ndarray:
        """Decoder, the right-inverse of ``M_P`` (n x 2)."""
        psi = np.asarray(self.psi)
        return np.column_stack([np.cos(psi), np.sin(psi)])

    def to_dict(self) -> dict:
        return {"n": self.n, "l": self.l, "d": self.d, "psi": list(self.psi)}


@dataclass(frozen=True)
class ArcParameters:
    """Constant-curvature arc parameters of a segment of length ``l``."""

    kappa: float
    theta: float
    l: float

    @property
    def phi(self):
        """Bending angle, equal to the tip orientation."""
        return self.l * self.kappa

    @classmethod
    def from_bending_angle(cls, phi, theta, l: float) -> "ArcParameters":
        return cls(kappa=np.asarray(phi) / l, theta=theta, l=l)


def make_clarke_matrix(geometry: RobotGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(M_P, M_P_inv)`` for the geometry, shapes (2, n) and (n, 2)."""
    return geometry.clarke_matrix.copy(), geometry.inverse_clarke_matrix.copy()


def constraint_residual(rho) -> np.ndarray:
    """Sum of joint displacements along the last axis."""
    return np.sum(np.asarray(rho, dtype=float), axis=-1)


def check_displacement_constraint(rho, tol: float = VALIDATION_TOL) -> None:
    residual = constraint_residual(rho)
    worst = float(np.max(np.abs(residual))) if np.size(residual) else 0.0
    if worst > tol:
        raise ConstraintError(
            f"displacement constraint violated: |sum(rho)| = {worst:.3e} m > {tol:.1e} m",
            residual=worst,
        )


def _as_joints(rho, geometry: RobotGeometry) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if rho.ndim == 0 or rho.shape[-1] != geometry.n:
        raise DimensionError(
            f"joint vector has length {rho.shape[-1] if rho.ndim else 0}, geometry has n = {geometry.n}"
        )
    return rho


def _as_clarke(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim == 0 or c.shape[-1] != 2:
        raise DimensionError(f"Clarke coordinates must have a trailing axis of length 2, got shape {c.shape}")
    return c


def joints_to_clarke(rho, geometry: RobotGeometry, check: bool = True) -> np.ndarray:
    """Encode joint displacements to Clarke coordinates, ``M_P @ rho``.

    With ``check=False`` the displacement constraint is not validated; this
    is what a noisy measurement needs, since the encoder projects the
    constraint-violating part away.
    """
    rho = _as_joints(rho, geometry)
    if check:
        check_displacement_constraint(rho)
    return rho @ geometry.clarke_matrix.T


def clarke_to_joints(c, geometry: RobotGeometry) -> np.ndarray:
    """Decode Clarke coordinates: ``rho_i = re*cos(psi_i) + im*sin(psi_i)``."""
    return _as_clarke(c) @ geometry.inverse_clarke_matrix.T


def clarke_modulus_argument(c):
    """Modulus and argument of Clarke coordinates.

    The argument lies in ``[-pi, pi)``; the zero vector has argument 0.
    """
    c = _as_clarke(c)
    re, im = c[..., 0], c[..., 1]
    modulus = np.hypot(re, im)
    argument = np.arctan2(im, re)
    argument = np.where(argument >= np.pi, -np.pi, argument)
    if c.ndim == 1:
        return float(modulus), float(argument)
    return modulus, argument


def arc_to_clarke(arc: ArcParameters, geometry: RobotGeometry) -> np.ndarray:
    """``(re, im) = d*l*kappa*(cos theta, sin theta)``."""
    scale = geometry.d * geometry.l * np.asarray(arc.kappa, dtype=float)
    theta = np.asarray(arc.theta, dtype=float)
    return np.stack([scale * np.cos(theta), scale * np.sin(theta)], axis=-1)


def clarke_to_arc(c, geometry: RobotGeometry) -> ArcParameters:
    modulus, argument = clarke_modulus_argument(c)
    kappa = modulus / (geometry.d * geometry.l)
    return ArcParameters(kappa=kappa, theta=argument, l=geometry.l)


def interop_transfer(rho_a, geom_a: RobotGeometry, geom_b: RobotGeometry) -> np.ndarray:
    """Map joint values of robot A to robot B through the shared Clarke coordinates."""
    return clarke_to_joints(joints_to_clarke(rho_a, geom_a), geom_b)
