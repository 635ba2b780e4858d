"""Framework configuration and its JSON document form."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Mapping

import jsonschema

from .clarke import RobotGeometry
from .control import ControllerGains
from .errors import ClarkeFrameError, ConfigError
from .plant import PlantConfig
from .sampler import SampleBounds
from .trajectory import KinematicLimits


def load_schema() -> dict:
    return json.loads(resources.files("clarkeframe").joinpath("config.schema.json").read_text())


def default_geometry() -> RobotGeometry:
    return RobotGeometry(n=5, l=0.07, d=0.01)


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "run"
    backbone_stride: int = 10
    backbone_samples: int = 11


@dataclass(frozen=True)
class FrameworkConfig:
    """Parameters shared by every per-segment framework instance.

    Defaults are the demonstration values: n = 5, l = 70 mm, d = 10 mm,
    phi_max = 2 pi / 3, theta_max = pi, v_max = 10 mm/s, a_max = 10 mm/s^2,
    k_p = 10, 10 ms sampling, 200 ms time constant, 0.1 mm noise.
    """

    geometry: RobotGeometry = field(default_factory=default_geometry)
    bounds: SampleBounds = field(default_factory=SampleBounds)
    limits: KinematicLimits = field(default_factory=lambda: KinematicLimits(v_max=0.01, a_max=0.01))
    gains: ControllerGains = field(default_factory=ControllerGains)
    plant: PlantConfig = field(default_factory=PlantConfig)
    segments: int = 4
    settle_time: float = 1.0
    clamp_commands: bool = True

    def __post_init__(self):
        if self.segments < 1:
            raise ValueError(f"segments must be >= 1, got {self.segments}")
        if self.settle_time < 0:
            raise ValueError(f"settle_time must be >= 0, got {self.settle_time}")

    @property
    def max_modulus(self):
        return self.bounds.phi_max * self.geometry.d if self.clamp_commands else None

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry.to_dict(),
            "bounds": {"phi_max": self.bounds.phi_max, "theta_max": self.bounds.theta_max},
            "limits": {"v_max": self.limits.v_max, "a_max": self.limits.a_max, "t_user": self.limits.t_user},
            "gains": self.gains.to_dict(),
            "plant": {
                "sample_time": self.plant.sample_time,
                "time_constant": self.plant.time_constant,
                "noise_amplitude": self.plant.noise_amplitude,
                "rng_seed": self.plant.rng_seed,
            },
            "segments": self.segments,
            "settle_time": self.settle_time,
            "clamp_commands": self.clamp_commands,
        }


def _build(section: str, factory, values: Mapping[str, Any]):
    try:
        return factory(**values)
    except ClarkeFrameError as exc:
        raise ConfigError(str(exc), path=section) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), path=section) from exc


def geometry_from_dict(doc: Mapping[str, Any]) -> RobotGeometry:
    g = {"n": 5, "l": 0.07, "d": 0.01, "psi": None}
    g.update(doc)
    return _build("geometry", RobotGeometry, g)


def parse_config(doc: Mapping[str, Any]) -> tuple[FrameworkConfig, OutputSettings]:
    """Validate a config document and fill in defaults.

    Raises ConfigError with a dotted field path on unknown keys, wrong types
    or out-of-range values.
    """
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = ".".join(str(p) for p in err.absolute_path)
        raise ConfigError(err.message, path=path)

    default = FrameworkConfig()
    geometry = geometry_from_dict(doc.get("geometry", {}))
    bounds = _build("bounds", SampleBounds, {**vars(default.bounds), **doc.get("bounds", {})})
    limits = _build("limits", KinematicLimits, {**vars(default.limits), **doc.get("limits", {})})
    gains = _build("gains", ControllerGains, {"k_p": 10.0, "k_d": 0.0, **doc.get("gains", {})})
    plant = _build("plant", PlantConfig, {**vars(default.plant), **doc.get("plant", {})})
    cfg = _build("", FrameworkConfig, dict(
        geometry=geometry, bounds=bounds, limits=limits, gains=gains, plant=plant,
        segments=doc.get("segments", default.segments),
        settle_time=doc.get("settle_time", default.settle_time),
        clamp_commands=doc.get("clamp_commands", default.clamp_commands),
    ))
    output = OutputSettings(**doc.get("output", {}))
    return cfg, output


def load_config(path) -> tuple[FrameworkConfig, OutputSettings]:
    """Read and validate a JSON config file. OSError and JSON errors propagate."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ConfigError("top-level JSON value must be an object")
    return parse_config(doc)
