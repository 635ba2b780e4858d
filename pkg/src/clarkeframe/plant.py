"""Simulated displacement-actuated segment: one first-order lag (PT1) per actuator.

Each actuator follows ``tau * x' + x = u`` discretized exactly under a
zero-order hold, ``x+ = alpha x + (1 - alpha) u`` with
``alpha = exp(-Ts / tau)``. Actuators share the decoded command but have no
cross-coupled dynamics. Measurements add uniform noise on ``[-a, a]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clarke import RobotGeometry, joints_to_clarke
from .errors import DimensionError

# entropy tag keeping the noise stream apart from a sampler seeded with the same integer
NOISE_STREAM = 1


@dataclass(frozen=True)
class PlantConfig:
    sample_time: float = 0.01
    time_constant: float = 0.2
    noise_amplitude: float = 1e-4
    rng_seed: int = 0

    def __post_init__(self):
        if not self.sample_time > 0:
            raise ValueError(f"sample_time must be > 0, got {self.sample_time!r}")
        if not self.time_constant > 0:
            raise ValueError(f"time_constant must be > 0, got {self.time_constant!r}")
        if not self.noise_amplitude >= 0:
            raise ValueError(f"noise_amplitude must be >= 0, got {self.noise_amplitude!r}")

    @property
    def alpha(self) -> float:
        return float(np.exp(-self.sample_time / self.time_constant))


@dataclass(frozen=True)
class PlantState:
    actuator_positions: np.ndarray
    tick: int = 0


def plant_step(state: PlantState, command, cfg: PlantConfig) -> PlantState:
    command = np.asarray(command, dtype=float)
    x = state.actuator_positions
    if command.shape != x.shape:
        raise DimensionError(f"command has shape {command.shape}, plant has {x.shape}")
    alpha = cfg.alpha
    return PlantState(actuator_positions=alpha * x + (1.0 - alpha) * command, tick=state.tick + 1)


def noise_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, NOISE_STREAM])


def measure(state: PlantState, cfg: PlantConfig, geometry: RobotGeometry,
            rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Noisy joint measurement and its Clarke encoding.

    The encoding skips the displacement-constraint check: noise breaks
    ``sum(rho) = 0`` and the encoder projects that component away.
    """
    x = state.actuator_positions
    a = cfg.noise_amplitude
    measured = x + rng.uniform(-a, a, size=x.shape) if a > 0 else x.copy()
    return measured, joints_to_clarke(measured, geometry, check=False)


class Plant:
    """Plant state plus its own noise generator."""

    def __init__(self, cfg: PlantConfig, initial_positions, geometry: RobotGeometry):
        self.cfg = cfg
        self.geometry = geometry
        self.state = PlantState(actuator_positions=np.array(initial_positions, dtype=float))
        self.rng = noise_rng(cfg.rng_seed)

    def measure(self) -> tuple[np.ndarray, np.ndarray]:
        return measure(self.state, self.cfg, self.geometry, self.rng)

    def step(self, command) -> PlantState:
        self.state = plant_step(self.state, command, self.cfg)
        return self.state
