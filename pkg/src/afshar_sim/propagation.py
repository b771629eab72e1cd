"""Numerical scalar diffraction, independent of the closed-form model.

Two propagators carry fields between planes:

* :func:`angular_spectrum` -- band-limited transfer-function propagation on a
  fixed grid. Exact scalar diffraction; best for short hops.
* :func:`fresnel_scaled` -- one-step Fresnel integral evaluated by separable
  matrix Fourier transforms, so the output grid pitch and extent are free.
  Needed to go from micron-scale pinholes to a centimeter lens and back down
  to micron image spots.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .elements import TransmissionMask
from .errors import (AfsharSimError, ChainError, GridMismatchError, PropagationError,
                     SamplingError)
from .field import PLANES, ComplexField, GridSpec, quadratic_phase_step, total_power

#: relative power gain tolerated before a step is flagged in the audit
GAIN_TOLERANCE = 1e-9


def angular_spectrum(field: ComplexField, distance: float, pad: int = 2,
                     band_limit: bool = True) -> ComplexField:
    """Propagate with the free-space transfer function ``exp(i z sqrt(k^2 - kx^2 - ky^2))``.

    The field is zero-padded ``pad`` times per axis to suppress wrap-around,
    evanescent components are dropped, and with ``band_limit`` the transfer
    function is truncated to the alias-free cone of Matsushima & Shimobaba.
    Power is conserved whenever nothing is truncated and the beam stays inside
    the (unpadded) window.
    """
    if distance < 0:
        raise PropagationError("negative propagation distance (back-propagation is not supported)")
    if distance == 0:
        return field.replace(values=field.values)
    grid = field.grid
    ny, nx = grid.shape
    Ny, Nx = pad * ny, pad * nx
    oy, ox = Ny // 2 - ny // 2, Nx // 2 - nx // 2
    buf = np.zeros((Ny, Nx), dtype=complex)
    buf[oy:oy + ny, ox:ox + nx] = field.values

    spectrum = np.fft.fft2(np.fft.ifftshift(buf), norm="ortho")
    fx = np.fft.fftfreq(Nx, grid.dx)
    fy = np.fft.fftfreq(Ny, grid.dy)
    k = field.k
    kz2 = k ** 2 - (2 * np.pi * fy[:, None]) ** 2 - (2 * np.pi * fx[None, :]) ** 2
    propagating = kz2 > 0
    H = np.zeros_like(spectrum)
    H[propagating] = np.exp(1j * distance * np.sqrt(kz2[propagating]))
    if band_limit:
        lam = field.wavelength
        ux = 1 / (lam * np.sqrt((2 * distance / (Nx * grid.dx)) ** 2 + 1))
        uy = 1 / (lam * np.sqrt((2 * distance / (Ny * grid.dy)) ** 2 + 1))
        H *= (np.abs(fy)[:, None] < uy) & (np.abs(fx)[None, :] < ux)
    out = np.fft.fftshift(np.fft.ifft2(spectrum * H, norm="ortho"))
    return field.replace(values=out[oy:oy + ny, ox:ox + nx])


def fresnel_aliasing_period(input_grid: GridSpec, wavelength: float, distance: float):
    """Output-plane period ``lambda z / dx`` of the discretized Fresnel integral, per axis."""
    return (wavelength * distance / input_grid.dx, wavelength * distance / input_grid.dy)


def fresnel_hop_problem(input_grid: GridSpec, output_grid: GridSpec, wavelength: float,
                        distance: float):
    """Describe why a :func:`fresnel_scaled` hop would be undersampled, or return None."""
    step = quadratic_phase_step(output_grid, wavelength, distance)
    if step >= np.pi:
        return f"output grid undersamples the Fresnel chirp: {step:.3g} rad per sample"
    px, py = fresnel_aliasing_period(input_grid, wavelength, distance)
    ex, ey = output_grid.extent
    if ex > px or ey > py:
        return (f"output extent {ex:.3g} x {ey:.3g} m exceeds the alias period "
                f"{px:.3g} x {py:.3g} m of the input sampling")
    return None


def fresnel_number(field: ComplexField, distance: float) -> float:
    """``a^2 / (lambda z)`` with ``a`` the half-width of the input grid."""
    a = 0.5 * max(field.grid.extent)
    return a ** 2 / (field.wavelength * distance)


def fresnel_scaled(field: ComplexField, distance: float,
                   output_grid: Optional[GridSpec] = None) -> ComplexField:
    """Single-step Fresnel propagation onto an arbitrary output grid.

    ``U2(X) = e^{ikz}/(i lambda z) e^{ik X^2/2z} sum U1(x) e^{ik x^2/2z} e^{-ik x.X/z} dx dy``

    The sum is evaluated exactly at the output sample points with two dense
    matrix products (the kernel is separable in x and y).

    Raises
    ------
    SamplingError
        If the output chirp ``exp(ik X^2/2z)`` steps by more than pi per
        output sample, or the output grid is wider than the alias period
        ``lambda z / dx`` of the input sampling.
    """
    if not distance > 0:
        raise PropagationError("Fresnel propagation needs a positive distance")
    og = field.grid if output_grid is None else output_grid
    lam, k = field.wavelength, field.k
    problem = fresnel_hop_problem(field.grid, og, lam, distance)
    if problem:
        raise SamplingError(problem)

    xi, yi, xo, yo = field.grid.x, field.grid.y, og.x, og.y
    q = k / (2 * distance)
    u = field.values * np.exp(1j * q * yi ** 2)[:, None] * np.exp(1j * q * xi ** 2)[None, :]
    Kx = np.exp((-1j * k / distance) * np.outer(xo, xi))
    Ky = np.exp((-1j * k / distance) * np.outer(yo, yi))
    out = Ky @ u @ Kx.T
    prefactor = np.exp(1j * k * distance) / (1j * lam * distance) * field.grid.cell_area
    out *= prefactor * np.exp(1j * q * yo ** 2)[:, None] * np.exp(1j * q * xo ** 2)[None, :]
    return ComplexField(og, out, lam, field.plane)


def apply_mask(field: ComplexField, mask: TransmissionMask) -> ComplexField:
    """Pointwise product of a field with a thin-element transmission."""
    if mask.grid != field.grid:
        raise GridMismatchError(f"mask grid {mask.grid} differs from field grid {field.grid}")
    return field.replace(values=field.values * mask.values)


# -- declarative optical bench ---------------------------------------------

@dataclass(frozen=True)
class Propagate:
    """Free-space hop.

    ``method`` is ``"fresnel"`` (output grid may differ) or
    ``"angular_spectrum"`` (same grid). ``rationale`` is copied to the audit.
    """

    distance: float
    output_grid: Optional[GridSpec] = None
    method: str = "fresnel"
    rationale: str = ""


@dataclass(frozen=True)
class Element:
    mask: TransmissionMask


@dataclass(frozen=True)
class Record:
    label: str
    plane: Optional[str] = None


class AuditEntry(NamedTuple):
    step: int
    kind: str
    detail: str
    power_before: float
    power_after: float
    cause: str

    @property
    def change(self):
        return self.power_after - self.power_before


@dataclass
class ChainResult:
    """Recorded fields (in plan order) plus a per-step power audit."""

    recorded: list
    labels: list
    audit: list

    def __getitem__(self, label) -> ComplexField:
        try:
            return self.recorded[self.labels.index(label)]
        except ValueError:
            raise KeyError(label) from None

    def __len__(self):
        return len(self.recorded)

    def __iter__(self):
        return iter(self.recorded)

    @property
    def power_gains(self):
        """Audit entries whose power rose by more than :data:`GAIN_TOLERANCE` (should be empty)."""
        return [a for a in self.audit if a.power_after > a.power_before * (1 + GAIN_TOLERANCE)]


def _plane_for(step: Record):
    if step.plane is not None:
        return step.plane
    return step.label if step.label in PLANES else f"custom({step.label})"


def run_chain(field: ComplexField, plan) -> ChainResult:
    """Execute an ordered plan of :class:`Propagate`, :class:`Element` and :class:`Record` steps.

    Every failure (sampling, grid mismatch, bad distance) aborts with a
    :class:`ChainError` carrying the failing step index.
    """
    recorded, labels, audit = [], [], []
    current = field
    for i, step in enumerate(plan):
        try:
            if isinstance(step, Record):
                recorded.append(current.replace(plane=_plane_for(step)))
                labels.append(step.label)
                continue
            before = total_power(current)
            if isinstance(step, Element):
                current = apply_mask(current, step.mask)
                kind, detail, cause = "element", step.mask.name, f"absorbed by {step.mask.name}"
            elif isinstance(step, Propagate):
                if step.method == "fresnel":
                    current = fresnel_scaled(current, step.distance, step.output_grid)
                    cause = "outside output window"
                elif step.method == "angular_spectrum":
                    if step.output_grid is not None and step.output_grid != current.grid:
                        raise GridMismatchError("angular_spectrum cannot change the grid")
                    current = angular_spectrum(current, step.distance)
                    cause = "band limit / window truncation"
                else:
                    raise PropagationError(f"unknown propagation method {step.method!r}")
                kind = "propagate"
                detail = f"{step.method} z={step.distance:g} m" + (f" ({step.rationale})" if step.rationale else "")
            else:
                raise TypeError(f"unknown plan step {step!r}")
            after = total_power(current)
            if after > before * (1 + GAIN_TOLERANCE):
                cause = "numerical gain"
            elif after == before:
                cause = "none"
            audit.append(AuditEntry(i, kind, detail, before, after, cause))
        except (AfsharSimError, TypeError) as exc:
            if isinstance(exc, ChainError):
                raise
            raise ChainError(i, str(exc)) from exc
    return ChainResult(recorded, labels, audit)
