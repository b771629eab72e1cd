"""Source fields and thin-element transmission masks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytic import OpticalConfig, fringe_minima
from .errors import ConfigurationError, SamplingError
from .field import ComplexField, GridSpec, normalize_power, quadratic_phase_step


@dataclass(frozen=True, eq=False)
class TransmissionMask:
    """Complex amplitude transmission of a passive thin element (``|t| <= 1``)."""

    grid: GridSpec
    values: np.ndarray
    name: str = "mask"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ValueError(f"mask shape {vals.shape} does not match grid {self.grid.shape}")
        if np.any(np.abs(vals) > 1 + 1e-12):
            raise ValueError("transmission modulus exceeds 1; masks must be passive")
        vals = np.array(vals, copy=True)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __mul__(self, other: "TransmissionMask") -> "TransmissionMask":
        if other.grid != self.grid:
            raise ValueError("masks live on different grids")
        return TransmissionMask(self.grid, self.values * other.values, f"{self.name}*{other.name}")

    @classmethod
    def identity(cls, grid):
        return cls(grid, np.ones(grid.shape, dtype=complex), "identity")


@dataclass(frozen=True)
class WireGridSpec:
    """Absorbing wires parallel to the y axis.

    Parameters
    ----------
    centers : tuple of float
        x coordinate of each wire axis (m).
    width : float
        Full wire width (m).
    """

    centers: tuple = field(default_factory=tuple)
    width: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(sorted(float(c) for c in self.centers)))
        if not self.width > 0:
            raise ConfigurationError("wire width must be positive")
        gaps = np.diff(self.centers)
        if gaps.size and np.min(gaps) <= self.width:
            raise ConfigurationError("wires overlap: center spacing must exceed the wire width")

    @property
    def fill_factor_over(self):
        """Fraction of ``[min, max]`` covered, for evenly spaced wires."""
        if len(self.centers) < 2:
            return float("nan")
        return self.width / float(np.mean(np.diff(self.centers)))


def wires_at_minima(config: OpticalConfig, grid: GridSpec, fill_factor: float) -> WireGridSpec:
    """One wire on every focal-plane fringe minimum inside the grid.

    The width is ``fill_factor`` times the fringe period ``lambda f / d``.
    """
    if not 0 < fill_factor < 1:
        raise ConfigurationError("fill_factor must lie in (0, 1)")
    x = grid.x
    centers = fringe_minima(config, x[0], x[-1])
    return WireGridSpec(tuple(centers), fill_factor * config.focal_period)


def double_pinhole_field(config: OpticalConfig, grid: GridSpec) -> ComplexField:
    """Two Gaussian sub-sources ``exp(-|x - x_j|^2 / w0^2)`` weighted by A and B, unit power.

    Raises
    ------
    SamplingError
        If the waist is not small against ``d`` (``w0 < d/10``) or not
        resolved by the grid (``w0 > 3 max(dx, dy)``).
    """
    w0 = config.pinhole_waist
    if not w0 < config.pinhole_separation / 10:
        raise SamplingError(f"pinhole waist {w0:g} m must be below d/10 = {config.pinhole_separation / 10:g} m")
    if not w0 > 3 * max(grid.dx, grid.dy):
        raise SamplingError(f"pinhole waist {w0:g} m must exceed 3 grid pitches ({3 * max(grid.dx, grid.dy):g} m)")
    X, Y = grid.mesh()
    vals = np.zeros(grid.shape, dtype=complex)
    for amp, (xc, yc) in ((config.amplitude_a, config.x_a), (config.amplitude_b, config.x_b)):
        if amp != 0:
            vals += amp * np.exp(-((X - xc) ** 2 + (Y - yc) ** 2) / w0 ** 2)
    return normalize_power(ComplexField(grid, vals, config.wavelength, "aperture"))


def lens_net_curvature(config: OpticalConfig, incident_curvature: float = 0.0,
                       downstream_distance: float | None = None) -> float:
    """Quadratic-phase curvature (1/m) that has to be resolved on the lens grid.

    A one-step Fresnel hop of length ``z`` following the lens multiplies the
    field by ``exp(i k r^2 / 2z)`` before its Fourier sum, so the sampled
    integrand carries ``incident_curvature - 1/f + 1/z``.
    """
    f = config.focal_length
    net = incident_curvature - (0.0 if np.isinf(f) else 1 / f)
    if downstream_distance is not None:
        net += 1 / downstream_distance
    return net


def gaussian_lens_mask(config: OpticalConfig, grid: GridSpec, incident_curvature: float = 0.0,
                       downstream_distance: float | None = None,
                       check: bool = True) -> TransmissionMask:
    """Gaussian apodizer times an ideal thin-lens phase.

    ``t(r) = exp(-r^2 / 2 sigma^2) exp(-i k r^2 / 2f)``

    Parameters
    ----------
    incident_curvature : float
        Curvature (1/m) of the wavefront arriving at the lens, e.g. ``1/P`` for
        a point source at distance ``P``.
    downstream_distance : float, optional
        Length of the Fresnel hop that follows the lens, if any.
    check : bool
        Raise :class:`SamplingError` when the net quadratic phase from
        :func:`lens_net_curvature` changes by more than pi per sample at the
        grid edge. With the defaults this is the bare lens phase.
    """
    f = config.focal_length
    net = lens_net_curvature(config, incident_curvature, downstream_distance)
    if check and net != 0:
        step = quadratic_phase_step(grid, config.wavelength, 1 / net)
        if step >= np.pi:
            raise SamplingError(
                f"lens phase undersampled at grid edge: {step:.3g} rad per sample (limit pi)")
    X, Y = grid.mesh()
    r2 = X ** 2 + Y ** 2
    t = np.exp(-r2 / (2 * config.lens_sigma ** 2))
    if not np.isinf(f):
        t = t * np.exp(-1j * config.k * r2 / (2 * f))
    return TransmissionMask(grid, t, "lens")


def wire_grid_mask(spec: WireGridSpec, grid: GridSpec) -> TransmissionMask:
    """Binary mask: zero within ``width/2`` of any wire axis, one elsewhere."""
    if spec.centers and spec.width < 3 * grid.dx:
        raise SamplingError(f"wire width {spec.width:g} m spans fewer than 3 samples (dx = {grid.dx:g} m)")
    x = grid.x
    row = np.ones(grid.nx)
    for c in spec.centers:
        row[np.abs(x - c) < spec.width / 2] = 0.0
    return TransmissionMask(grid, np.broadcast_to(row, grid.shape).astype(complex), "wire_grid")


def two_hole_screen_mask(centers, hole_radius: float, grid: GridSpec) -> TransmissionMask:
    """Opaque screen pierced by two circular holes."""
    (x1, y1), (x2, y2) = centers
    if not hole_radius > 0:
        raise ConfigurationError("hole radius must be positive")
    if np.hypot(x2 - x1, y2 - y1) <= 2 * hole_radius:
        raise ConfigurationError("screen holes overlap")
    if hole_radius < 3 * max(grid.dx, grid.dy):
        raise SamplingError(f"hole radius {hole_radius:g} m spans fewer than 3 samples")
    X, Y = grid.mesh()
    inside = ((X - x1) ** 2 + (Y - y1) ** 2 < hole_radius ** 2) | ((X - x2) ** 2 + (Y - y2) ** 2 < hole_radius ** 2)
    return TransmissionMask(grid, inside.astype(complex), "two_hole_screen")


def sinusoidal_object_field(period: float, grid: GridSpec, wavelength: float,
                            window: float | None = None) -> ComplexField:
    """``cos(2 pi x / period)`` under a broad Gaussian window, unit power.

    Parameters
    ----------
    window : float, optional
        1/e amplitude radius of the Gaussian window; defaults to one sixth of
        the grid's x extent.
    """
    if window is None:
        window = grid.extent[0] / 6
    if period < 8 * grid.dx:
        raise SamplingError(f"period {period:g} m spans fewer than 8 samples")
    if 2 * window / period < 10:
        raise SamplingError("fewer than 10 periods inside the window")
    X, Y = grid.mesh()
    cx, cy = grid.center
    vals = np.cos(2 * np.pi * (X - cx) / period) * np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / window ** 2)
    return normalize_power(ComplexField(grid, vals, wavelength, "object"))
