"""Sampled complex fields on uniform 2-D grids.

Arrays are stored numpy-style as ``values[iy, ix]`` with shape ``(ny, nx)``.
Sample ``(ix, iy)`` sits at ``center + ((ix - nx//2) dx, (iy - ny//2) dy)`` so the
grid center is an exact sample and FFT frequency mapping is unambiguous.
All lengths are SI meters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DegenerateFieldError

PLANES = ("aperture", "pre_lens", "lens", "post_lens", "focal", "image", "object")


def _check_plane(label: str) -> str:
    if label in PLANES or label.startswith("custom"):
        return label
    raise ValueError(f"unknown plane label {label!r}; use one of {PLANES} or 'custom(...)'")


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridSpec:
    """Uniform sampling geometry.

    Parameters
    ----------
    nx, ny : int
        Point counts along x and y (at least 2).
    dx, dy : float
        Sample pitch in meters.
    center : tuple of float
        Physical coordinates of sample ``(nx//2, ny//2)``.
    """

    nx: int
    ny: int
    dx: float
    dy: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if int(self.nx) < 2 or int(self.ny) < 2:
            raise ValueError("grid needs nx >= 2 and ny >= 2")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("grid pitch must be positive")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "dy", float(self.dy))
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @classmethod
    def square(cls, n: int, extent: float, center=(0.0, 0.0)) -> "GridSpec":
        """``n x n`` grid covering ``extent`` meters per side."""
        return cls(n, n, extent / n, extent / n, center)

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def extent(self):
        return (self.nx * self.dx, self.ny * self.dy)

    @property
    def x(self) -> np.ndarray:
        return self.center[0] + (np.arange(self.nx) - self.nx // 2) * self.dx

    @property
    def y(self) -> np.ndarray:
        return self.center[1] + (np.arange(self.ny) - self.ny // 2) * self.dy

    def mesh(self):
        """``(X, Y)`` coordinate arrays of shape ``(ny, nx)``."""
        return np.meshgrid(self.x, self.y)

    def coordinate(self, ix, iy):
        return (self.center[0] + (np.asarray(ix) - self.nx // 2) * self.dx,
                self.center[1] + (np.asarray(iy) - self.ny // 2) * self.dy)

    def index(self, x, y):
        """Nearest sample indices of physical coordinates (inverse of :meth:`coordinate`)."""
        ix = np.rint((np.asarray(x) - self.center[0]) / self.dx).astype(int) + self.nx // 2
        iy = np.rint((np.asarray(y) - self.center[1]) / self.dy).astype(int) + self.ny // 2
        return ix, iy

    @property
    def cell_area(self):
        return self.dx * self.dy

    def max_radius(self):
        """Largest |x| and |y| reached by the grid, measured from the optical axis."""
        return (float(np.max(np.abs(self.x))), float(np.max(np.abs(self.y))))


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex scalar amplitude sampled on a grid.

    ``|values|**2 * dx * dy`` sums to power, so values carry units of
    sqrt(power)/meter.
    """

    grid: GridSpec
    values: np.ndarray
    wavelength: float
    plane: str = "custom"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} does not match grid {self.grid.shape}")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite samples")
        object.__setattr__(self, "values", _frozen(vals))
        object.__setattr__(self, "plane", _check_plane(self.plane))

    @property
    def k(self):
        return 2 * np.pi / self.wavelength

    def replace(self, values=None, plane=None, grid=None) -> "ComplexField":
        return ComplexField(grid if grid is not None else self.grid,
                            self.values if values is None else values,
                            self.wavelength,
                            self.plane if plane is None else plane)

    def __mul__(self, scalar):
        return self.replace(values=self.values * scalar)

    __rmul__ = __mul__

    def __add__(self, other: "ComplexField"):
        if other.grid != self.grid or other.wavelength != self.wavelength:
            raise ValueError("fields must share grid and wavelength to be added")
        return self.replace(values=self.values + other.values)

    def cut(self, axis="x"):
        """Complex values along the y=0 (``axis='x'``) or x=0 line through the grid center."""
        if axis == "x":
            return self.values[self.grid.ny // 2, :]
        return self.values[:, self.grid.nx // 2]


@dataclass(frozen=True, eq=False)
class IntensityMap:
    """Non-negative power density (power per square meter) on a grid."""

    grid: GridSpec
    values: np.ndarray
    plane: str = "custom"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} does not match grid {self.grid.shape}")
        if np.any(vals < 0):
            raise ValueError("intensity must be non-negative")
        object.__setattr__(self, "values", _frozen(vals))
        object.__setattr__(self, "plane", _check_plane(self.plane))

    def total(self):
        return float(np.sum(self.values) * self.grid.cell_area)

    def cut(self, axis="x"):
        if axis == "x":
            return self.values[self.grid.ny // 2, :]
        return self.values[:, self.grid.nx // 2]


def intensity_of(field: ComplexField) -> IntensityMap:
    """Squared modulus of a field, on the same grid."""
    v = field.values
    return IntensityMap(field.grid, v.real ** 2 + v.imag ** 2, field.plane)


def total_power(field: ComplexField) -> float:
    v = field.values
    return float(np.sum(v.real ** 2 + v.imag ** 2) * field.grid.cell_area)


def normalize_power(field: ComplexField) -> ComplexField:
    """Rescale a field to unit total power.

    Raises
    ------
    DegenerateFieldError
        If the field carries no power.
    """
    p = total_power(field)
    if not p > 0:
        raise DegenerateFieldError("cannot normalize a field with zero power")
    return field.replace(values=field.values / np.sqrt(p))


class SamplingReport(NamedTuple):
    passed: bool
    worst_phase_step: float
    lens_phase_step: float
    propagation_phase_step: float

    def describe(self):
        state = "ok" if self.passed else "UNDERSAMPLED"
        return (f"{state}: worst quadratic-phase step {self.worst_phase_step:.3g} rad/sample "
                f"(lens {self.lens_phase_step:.3g}, propagation {self.propagation_phase_step:.3g}; limit pi)")


def quadratic_phase_step(grid: GridSpec, wavelength: float, radius_of_curvature: float) -> float:
    """Phase change per sample of ``exp(i k r^2 / 2R)`` at the grid edge, ``k |x|max dx / R``."""
    if not np.isfinite(radius_of_curvature) or radius_of_curvature == 0:
        return 0.0 if not np.isfinite(radius_of_curvature) else np.inf
    k = 2 * np.pi / wavelength
    xmax, ymax = grid.max_radius()
    return float(k * max(xmax * grid.dx, ymax * grid.dy) / abs(radius_of_curvature))


def sampling_check(grid: GridSpec, wavelength: float, max_distance: float,
                   max_curvature_focal_length: float) -> SamplingReport:
    """Check that quadratic phases stay below pi per sample at the grid edge.

    Covers both the lens phase ``k r^2 / 2f`` and the Fresnel chirp of a
    free-space hop of length ``max_distance``. Either may be ``inf`` to skip it.
    """
    lens = quadratic_phase_step(grid, wavelength, max_curvature_focal_length)
    prop = quadratic_phase_step(grid, wavelength, max_distance)
    worst = max(lens, prop)
    return SamplingReport(worst < np.pi, worst, lens, prop)
