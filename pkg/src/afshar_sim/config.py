"""Flat ``key = value`` scenario configuration.

Example::

    # lens and geometry
    wavelength = 532e-9
    amplitude_b = 0.5+0.5j
    amplitude_ratios = 1, 2, 4, 10
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .analytic import (FOCAL_VALIDITY_LIMIT, LENS_EQUATION_TOLERANCE, OpticalConfig)
from .errors import ConfigurationError
from .field import GridSpec

SCENARIOS = (
    "focal_fringes",
    "prelens_fringes",
    "image_spots",
    "wire_grid_double",
    "wire_grid_single",
    "point_scatterer",
    "duality_sweep",
    "sinusoidal_screen",
    "photon_sampling",
)

#: scenarios whose observation plane must satisfy the lens equation
IMAGING_SCENARIOS = frozenset(SCENARIOS) - {"focal_fringes", "prelens_fringes"}

_POSITIVE = (
    "wavelength", "pinhole_separation", "lens_sigma", "focal_length", "lens_to_pinholes",
    "lens_to_observation", "prelens_distance", "pinhole_waist", "aperture_extent",
    "prelens_extent", "lens_extent", "focal_extent", "image_extent", "object_extent",
    "fit_half_window", "sinusoid_period", "screen_hole_radius",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Every tunable of a run. Lengths in meters.

    Each optical plane has its own square grid of ``grid_points`` samples
    and the listed extent; the pitches differ by orders of magnitude between
    the pinhole plane and the lens.
    """

    scenario: str = "focal_fringes"
    wavelength: float = 532e-9
    pinhole_separation: float = 200e-6
    amplitude_a: complex = complex(1 / math.sqrt(2))
    amplitude_b: complex = complex(1 / math.sqrt(2))
    lens_sigma: float = 2e-3
    focal_length: float = 0.1
    lens_to_pinholes: float = 0.2
    lens_to_observation: float = 0.2
    prelens_distance: float = 0.15
    pinhole_waist: float = 1e-6
    grid_points: int = 2048
    aperture_extent: float = 512e-6
    prelens_extent: float = 4.096e-3
    lens_extent: float = 12.8e-3
    focal_extent: float = 6.144e-3
    image_extent: float = 512e-6
    object_extent: float = 4.096e-3
    fit_half_window: float = 1e-3
    wire_fill_factor: float = 0.06
    sinusoid_period: float = 40e-6
    sinusoid_window: float = 0.0
    screen_hole_radius: float = 200e-6
    scatterer_polarizability: complex = complex(0.05)
    amplitude_ratios: tuple = (1.0, 2.0, 4.0, 10.0)
    photons: int = 100_000
    seed: int = 12345
    output_dir: str = "results"
    figures: bool = True

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(f"scenario: unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        for name in _POSITIVE:
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ConfigurationError(f"{name} must be a positive finite number, got {v!r}")
        if not (isinstance(self.grid_points, int) and self.grid_points >= 16):
            raise ConfigurationError(f"grid_points must be an integer >= 16, got {self.grid_points!r}")
        if not 0 < self.wire_fill_factor < 1:
            raise ConfigurationError("wire_fill_factor must lie in (0, 1)")
        if self.sinusoid_window < 0:
            raise ConfigurationError("sinusoid_window must be >= 0 (0 selects the default)")
        if not self.amplitude_ratios or any(not r > 0 for r in self.amplitude_ratios):
            raise ConfigurationError("amplitude_ratios must be a non-empty list of positive numbers")
        if not (isinstance(self.photons, int) and self.photons >= 1):
            raise ConfigurationError("photons must be a positive integer")
        if abs(self.amplitude_a) == 0 and abs(self.amplitude_b) == 0:
            raise ConfigurationError("amplitude_a and amplitude_b cannot both be zero")
        self.optical()

    def optical(self) -> OpticalConfig:
        return OpticalConfig(
            wavelength=self.wavelength, pinhole_separation=self.pinhole_separation,
            amplitude_a=self.amplitude_a, amplitude_b=self.amplitude_b,
            lens_sigma=self.lens_sigma, focal_length=self.focal_length,
            lens_to_pinholes=self.lens_to_pinholes, lens_to_observation=self.lens_to_observation,
            prelens_distance=self.prelens_distance, pinhole_waist=self.pinhole_waist)

    def grid(self, plane: str) -> GridSpec:
        return GridSpec.square(self.grid_points, getattr(self, f"{plane}_extent"))

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def validity_flags(self, scenario=None) -> dict:
        """Named validity conditions of the closed-form limits."""
        opt = self.optical()
        scenario = scenario or self.scenario
        flags = {
            "focal_limit": opt.focal_valid,
            "spots_separated": opt.separation_ratio >= 5,
        }
        if scenario in IMAGING_SCENARIOS:
            flags["lens_equation"] = opt.is_imaging
        return flags

    def validity_values(self) -> dict:
        opt = self.optical()
        return {
            "focal_validity_ratio": opt.focal_validity_ratio,
            "focal_validity_limit": FOCAL_VALIDITY_LIMIT,
            "separation_ratio": opt.separation_ratio,
            "lens_equation_residual": opt.lens_equation_residual,
            "lens_equation_tolerance": LENS_EQUATION_TOLERANCE,
        }


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_complex(text):
    return complex(text.replace(" ", ""))


def _parse_ratios(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}
_PARSERS = {
    "str": str.strip,
    "float": float,
    "int": int,
    "complex": _parse_complex,
    "bool": _parse_bool,
    "tuple": _parse_ratios,
}

CONFIG_KEYS = tuple(_FIELD_TYPES)


def parse_value(key: str, text: str):
    """Convert the text of one config entry to the type of ``key``."""
    if key not in _FIELD_TYPES:
        raise ConfigurationError(f"unknown key {key!r}")
    return _PARSERS[_FIELD_TYPES[key]](text.strip())


def parse_config(text: str, source: str = "<string>", scenario: str | None = None) -> ScenarioConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = parse_value(key, value)
        except ValueError as exc:
            raise ConfigurationError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
    if scenario is not None:
        values["scenario"] = scenario
    cfg = ScenarioConfig(**values)
    check_scenario_geometry(cfg)
    return cfg


def check_scenario_geometry(cfg: ScenarioConfig, scenario: str | None = None):
    """Raise when an image-plane scenario's observation plane misses the lens equation."""
    scenario = scenario or cfg.scenario
    opt = cfg.optical()
    if scenario in IMAGING_SCENARIOS and not opt.is_imaging:
        raise ConfigurationError(
            f"lens_to_observation: scenario {scenario} needs the image plane, but "
            f"|1/P + 1/P' - 1/f| f = {opt.lens_equation_residual:.3g} exceeds {LENS_EQUATION_TOLERANCE:g}")


def load_config(path, scenario: str | None = None) -> ScenarioConfig:
    """Read and validate a config file; missing keys take their defaults.

    Parameters
    ----------
    scenario : str, optional
        Overrides the file's ``scenario`` key before validation.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path), scenario)


def dump_config(cfg: ScenarioConfig) -> str:
    """Render a config in the file format (round-trips through :func:`parse_config`)."""
    lines = []
    for name in CONFIG_KEYS:
        v = getattr(cfg, name)
        if isinstance(v, tuple):
            v = ", ".join(repr(x) for x in v)
        elif isinstance(v, complex):
            v = repr(v).strip("()")
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{name} = {v}")
    return "\n".join(lines) + "\n"
