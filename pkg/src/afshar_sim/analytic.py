"""Closed-form double-pinhole optics behind a Gaussian-apodized thin lens.

Conventions: pinhole A sits at ``x = -d/2`` and pinhole B at ``x = +d/2``;
fields carry the ``exp(-i omega t)`` time dependence so free propagation over
``z`` adds ``exp(+i k r^2 / 2z)`` and the lens multiplies by ``exp(-i k r^2 / 2f)``.

Two symbol clashes are resolved by name: :func:`fresnel_alpha` is the complex
Gaussian width parameter of the post-lens field, ``polarizability`` is the
scatterer strength. ``focal_to_image_distance`` is ``P' - f``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DegenerateFieldError, GeometryError

#: ``P / (k sigma^2)`` must stay below this for the focal-plane limit to hold.
FOCAL_VALIDITY_LIMIT = 0.05
#: ``|epsilon| f`` below this counts as satisfying the lens equation.
LENS_EQUATION_TOLERANCE = 1e-6


@dataclass(frozen=True)
class OpticalConfig:
    """Geometry and wave parameters of the idealized experiment.

    Parameters
    ----------
    wavelength : float
        Vacuum wavelength (m).
    pinhole_separation : float
        Center-to-center pinhole distance ``d`` (m).
    amplitude_a, amplitude_b : complex
        Complex weights of pinholes A (at -d/2) and B (at +d/2).
    lens_sigma : float
        Width of the Gaussian lens transmission ``exp(-(x/sigma)^2 / 2)`` (m).
    focal_length : float
        Lens focal length ``f`` (m); ``inf`` gives a pure apodizer.
    lens_to_pinholes : float
        Distance ``P`` from the pinhole plane to the lens (m).
    lens_to_observation : float
        Distance ``P'`` from the lens to the observation plane (m).
    prelens_distance : float
        Distance ``p`` from the pinholes to the pre-lens observation plane (m).
    pinhole_waist : float
        Gaussian waist of each numerical pinhole (m); unused by the closed forms.
    """

    wavelength: float = 532e-9
    pinhole_separation: float = 200e-6
    amplitude_a: complex = 1 / math.sqrt(2)
    amplitude_b: complex = 1 / math.sqrt(2)
    lens_sigma: float = 2e-3
    focal_length: float = 0.1
    lens_to_pinholes: float = 0.2
    lens_to_observation: float = 0.2
    prelens_distance: float = 0.15
    pinhole_waist: float = 1e-6

    def __post_init__(self):
        for name in ("wavelength", "pinhole_separation", "lens_sigma", "focal_length",
                     "lens_to_pinholes", "lens_to_observation", "prelens_distance",
                     "pinhole_waist"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0 and not math.isnan(value)):
                raise ConfigurationError(f"{name} must be a positive number, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("amplitude_a", "amplitude_b"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.amplitude_a) ** 2 + abs(self.amplitude_b) ** 2 == 0:
            raise ConfigurationError("amplitude_a and amplitude_b cannot both be zero")

    @property
    def k(self):
        return 2 * math.pi / self.wavelength

    @property
    def x_a(self):
        return (-self.pinhole_separation / 2, 0.0)

    @property
    def x_b(self):
        return (self.pinhole_separation / 2, 0.0)

    def epsilon(self, observation_distance=None):
        """``1/P + 1/P' - 1/f`` for the given (default: configured) observation distance."""
        pp = self.lens_to_observation if observation_distance is None else observation_distance
        return 1 / self.lens_to_pinholes + 1 / pp - 1 / self.focal_length

    @property
    def focal_validity_ratio(self):
        """``P / (k sigma^2)``; the focal-plane fringe formula needs this small."""
        return self.lens_to_pinholes / (self.k * self.lens_sigma ** 2)

    @property
    def focal_valid(self):
        return self.focal_validity_ratio < FOCAL_VALIDITY_LIMIT

    @property
    def lens_equation_residual(self):
        return abs(self.epsilon()) * self.focal_length

    @property
    def is_imaging(self):
        return self.lens_equation_residual < LENS_EQUATION_TOLERANCE

    @property
    def separation_ratio(self):
        """``k sigma d / P``: image-spot spacing over spot width (up to magnification)."""
        return self.k * self.lens_sigma * self.pinhole_separation / self.lens_to_pinholes

    @property
    def magnification(self):
        return -self.lens_to_observation / self.lens_to_pinholes

    @property
    def focal_to_image_distance(self):
        return self.lens_to_observation - self.focal_length

    @property
    def focal_period(self):
        return self.wavelength * self.focal_length / self.pinhole_separation

    @property
    def prelens_period(self):
        return self.wavelength * self.prelens_distance / self.pinhole_separation

    def with_amplitudes(self, a, b) -> "OpticalConfig":
        from dataclasses import replace
        return replace(self, amplitude_a=a, amplitude_b=b)


class FresnelAlpha(NamedTuple):
    epsilon: float
    alpha: complex


class DualityReport(NamedTuple):
    distinguishability: float
    visibility: float
    phase: float
    duality_sum: float


class MisuseReport(NamedTuple):
    d_prime: float
    visibility: float
    total: float
    cross_ensemble: bool
    note: str


def _weights(a, b):
    pa, pb = abs(a) ** 2, abs(b) ** 2
    if pa + pb == 0:
        raise DegenerateFieldError("both path amplitudes are zero")
    return pa, pb


def distinguishability(a: complex, b: complex) -> float:
    """Which-path distinguishability ``||A|^2 - |B|^2| / (|A|^2 + |B|^2)``."""
    pa, pb = _weights(a, b)
    return abs(pa - pb) / (pa + pb)


def _wrap(phase):
    # into (-pi, pi]
    phase = math.remainder(phase, 2 * math.pi)
    return math.pi if phase <= -math.pi else phase


def visibility_phase(a: complex, b: complex):
    """Fringe visibility ``2|A||B| / (|A|^2 + |B|^2)`` and phase ``arg A - arg B``.

    The phase is wrapped into (-pi, pi]; it is 0 when either amplitude vanishes.
    """
    pa, pb = _weights(a, b)
    vis = 2 * abs(a) * abs(b) / (pa + pb)
    if a == 0 or b == 0:
        return vis, 0.0
    return vis, _wrap(cmath.phase(a) - cmath.phase(b))


def duality_check(a: complex, b: complex) -> DualityReport:
    d = distinguishability(a, b)
    v, phi = visibility_phase(a, b)
    return DualityReport(d, v, phi, d * d + v * v)


def duality_misuse_demo(a: complex, b: complex) -> MisuseReport:
    """Combine a post-selected ``D' = 1`` with the full-ensemble visibility.

    Conditioning on detection in one image spot makes the which-path label
    certain for that sub-ensemble, while the visibility comes from every
    photon. Adding their squares mixes two ensembles, so the result may reach
    2 without contradicting ``D^2 + V^2 = 1``.
    """
    v, _ = visibility_phase(a, b)
    degenerate = a == 0 or b == 0
    total = 1.0 + v * v
    if degenerate:
        note = "single path open: the sub-ensemble is the full ensemble, so D'^2+V^2 is the true duality sum"
    else:
        note = ("D' is computed on the photons detected in one image spot, V on all photons; "
                "the sum mixes two different ensembles and is not the duality relation")
    return MisuseReport(1.0, v, total, not degenerate, note)


def fresnel_alpha(config: OpticalConfig, observation_distance=None) -> FresnelAlpha:
    """Complex width parameter ``alpha = 1 / (2 (1/sigma^2 - i k epsilon))``."""
    eps = config.epsilon(observation_distance)
    inv = 2 * (1 / config.lens_sigma ** 2 - 1j * config.k * eps)
    return FresnelAlpha(eps, 1 / inv)


def _offsets(config, x, y, observation_distance):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    P = config.lens_to_pinholes
    uxa = x / observation_distance + config.x_a[0] / P
    uxb = x / observation_distance + config.x_b[0] / P
    uy = y / observation_distance
    return uxa ** 2 + uy ** 2, uxb ** 2 + uy ** 2


def post_lens_power(config: OpticalConfig, observation_distance=None) -> float:
    """Exact plane integral of ``|A e^{-k^2 alpha u_A^2} + B e^{-k^2 alpha u_B^2}|^2``."""
    pp = config.lens_to_observation if observation_distance is None else observation_distance
    a = config.k ** 2 * fresnel_alpha(config, pp).alpha
    b = 2 * a.real
    p = np.array(config.x_a) / config.lens_to_pinholes
    q = np.array(config.x_b) / config.lens_to_pinholes
    c = a * p + a.conjugate() * q
    cross = np.exp(np.dot(c, c) / b - a * np.dot(p, p) - a.conjugate() * np.dot(q, q))
    A, B = config.amplitude_a, config.amplitude_b
    scale = pp ** 2 * math.pi / b
    return float(scale * (abs(A) ** 2 + abs(B) ** 2 + 2 * (A * B.conjugate() * cross).real))


def post_lens_field(config: OpticalConfig, x, y=0.0, observation_distance=None,
                    normalize="power"):
    """Field a distance ``P'`` behind the lens, up to the dropped common phase.

    Parameters
    ----------
    x, y : array_like
        Observation coordinates (m), broadcast together.
    observation_distance : float, optional
        Lens-to-plane distance; defaults to ``config.lens_to_observation``.
    normalize : {"power", "amplitude"}
        ``"power"`` scales the field to unit integral of ``|psi|^2`` over the
        whole plane (units 1/m). ``"amplitude"`` divides by
        ``sqrt(|A|^2 + |B|^2)`` only, leaving a dimensionless field.
    """
    pp = config.lens_to_observation if observation_distance is None else observation_distance
    alpha = fresnel_alpha(config, pp).alpha
    ka = config.k ** 2 * alpha
    ua2, ub2 = _offsets(config, x, y, pp)
    psi = config.amplitude_a * np.exp(-ka * ua2) + config.amplitude_b * np.exp(-ka * ub2)
    if normalize == "power":
        return psi / math.sqrt(post_lens_power(config, pp))
    if normalize == "amplitude":
        return psi / math.sqrt(abs(config.amplitude_a) ** 2 + abs(config.amplitude_b) ** 2)
    raise ValueError(f"unknown normalization {normalize!r}")


def focal_field(config: OpticalConfig, x, y=0.0):
    """Large-lens focal-plane field, scaled so that the mean intensity is 1.

    Valid when ``P / (k sigma^2)`` is small; see ``config.focal_valid``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    k, f, P = config.k, config.focal_length, config.lens_to_pinholes
    norm = math.sqrt(abs(config.amplitude_a) ** 2 + abs(config.amplitude_b) ** 2)

    def term(amp, xj):
        u2 = (x / f + xj / P) ** 2 + (y / f) ** 2
        return amp * np.exp(-0.5j * k * P * u2)

    return (term(config.amplitude_a, config.x_a[0]) + term(config.amplitude_b, config.x_b[0])) / norm


def _fringe(config, x, length):
    v, phi = visibility_phase(config.amplitude_a, config.amplitude_b)
    return 1 + v * np.cos(config.k * config.pinhole_separation * np.asarray(x, dtype=float) / length + phi)


def focal_fringe_intensity(config: OpticalConfig, x):
    """``1 + V cos(k d x / f + phi)`` along the y = 0 cut of the focal plane."""
    return _fringe(config, x, config.focal_length)


def prelens_fringe_intensity(config: OpticalConfig, x):
    """``1 + V cos(k d x / p + phi)`` a distance ``p`` behind the pinholes."""
    return _fringe(config, x, config.prelens_distance)


def fringe_minima(config: OpticalConfig, lo: float, hi: float, length=None):
    """Positions of the zeros of ``1 + cos(k d x / L + phi)`` inside ``[lo, hi]``.

    ``L`` defaults to the focal length.
    """
    length = config.focal_length if length is None else length
    _, phi = visibility_phase(config.amplitude_a, config.amplitude_b)
    scale = length / (config.k * config.pinhole_separation)
    n_lo = math.ceil((lo / scale - math.pi + phi) / (2 * math.pi))
    n_hi = math.floor((hi / scale - math.pi + phi) / (2 * math.pi))
    n = np.arange(n_lo, n_hi + 1)
    return scale * (math.pi - phi + 2 * math.pi * n)


def _require_imaging(config):
    if not config.is_imaging:
        raise ConfigurationError(
            f"lens equation violated: |1/P + 1/P' - 1/f| f = {config.lens_equation_residual:.3g} "
            f"(tolerance {LENS_EQUATION_TOLERANCE:g})")


def image_intensity(config: OpticalConfig, x, y=0.0):
    """Incoherent sum of the two Gaussian image spots, unit power over the plane.

    Spot centers sit at ``-(P'/P) x_{A,B}`` with 1/e intensity radius ``P'/(k sigma)``.
    Raises :class:`ConfigurationError` when the observation plane is not the image plane.
    """
    _require_imaging(config)
    k, s, P, pp = config.k, config.lens_sigma, config.lens_to_pinholes, config.lens_to_observation
    ua2, ub2 = _offsets(config, x, y, pp)
    pa, pb = abs(config.amplitude_a) ** 2, abs(config.amplitude_b) ** 2
    spot_area = math.pi * pp ** 2 / (k * s) ** 2
    return (pa * np.exp(-(k * s) ** 2 * ua2) + pb * np.exp(-(k * s) ** 2 * ub2)) / ((pa + pb) * spot_area)


def image_spot_centers(config: OpticalConfig):
    """Geometric images ``(A', B')`` of the pinholes."""
    m = config.magnification
    return ((m * config.x_a[0], 0.0), (m * config.x_b[0], 0.0))


def image_spot_radius(config: OpticalConfig):
    """1/e intensity radius ``P' / (k sigma)`` of each image spot."""
    return config.lens_to_observation / (config.k * config.lens_sigma)


def scattered_image_intensity(config: OpticalConfig, x0, polarizability: complex, x, y=0.0):
    """Image-plane intensity with a point scatterer in the focal plane.

    The scatterer at focal-plane point ``x0`` re-radiates
    ``polarizability * psi(x0) * exp(i k |x0 - X|^2 / 2R)`` with
    ``R = P' - f``. The returned intensity is the expansion
    ``|s|^2 + |S|^2 + 2 Re(conj(S) s)`` of ``|S + s|^2``, where ``S`` is the
    unperturbed image field. Both fields use the amplitude normalization
    (dimensionless), so ``polarizability`` is dimensionless too.

    Parameters
    ----------
    x0 : tuple of float
        Scatterer position in the focal plane (m).
    """
    R = config.focal_to_image_distance
    if R == 0:
        raise GeometryError("focal and observation planes coincide (P' - f = 0)")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    S = post_lens_field(config, x, y, normalize="amplitude")
    psi0 = complex(focal_field(config, x0[0], x0[1]))
    s = polarizability * psi0 * np.exp(1j * config.k * ((x0[0] - x) ** 2 + (x0[1] - y) ** 2) / (2 * R))
    return np.abs(s) ** 2 + np.abs(S) ** 2 + 2 * (np.conj(S) * s).real
