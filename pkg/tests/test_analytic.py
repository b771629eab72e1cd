import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import trapezoid

from afshar_sim import analytic as an
from afshar_sim.analytic import OpticalConfig
from afshar_sim.errors import ConfigurationError, DegenerateFieldError, GeometryError

finite = st.floats(-1e3, 1e3, allow_nan=False)
amplitudes = st.builds(complex, finite, finite).filter(lambda z: abs(z) > 1e-6)


def lens_integral(cfg, X, pp):
    """Brute-force 1-D diffraction integral through the lens along y = 0.

    Paraxial point sources at the pinholes, Gaussian lens, free space to P'.
    The y integral is common to both pinholes and drops out of normalized cuts.
    """
    k, P, f, s = cfg.k, cfg.lens_to_pinholes, cfg.focal_length, cfg.lens_sigma
    x = np.linspace(-9 * s, 9 * s, 400_001)
    lens = np.exp(-x ** 2 / (2 * s ** 2) - 1j * k * x ** 2 / (2 * f))
    out = []
    for Xi in np.atleast_1d(X):
        total = 0
        for amp, (xj, _) in ((cfg.amplitude_a, cfg.x_a), (cfg.amplitude_b, cfg.x_b)):
            total = total + amp * trapezoid(np.exp(1j * k * (x - xj) ** 2 / (2 * P)) * lens
                                           * np.exp(1j * k * (Xi - x) ** 2 / (2 * pp)), x)
        out.append(total)
    return np.array(out)


@pytest.mark.parametrize("pp", [0.1, 0.15, 0.2])
def test_post_lens_field_matches_quadrature(pp):
    cfg = OpticalConfig(amplitude_b=0.4 * cmath.exp(0.7j), lens_to_observation=pp)
    X = np.linspace(-300e-6, 300e-6, 21)
    num = np.abs(lens_integral(cfg, X, pp)) ** 2
    ref = np.abs(an.post_lens_field(cfg, X, 0.0, pp)) ** 2
    num, ref = num / num.max(), ref / ref.max()
    assert np.max(np.abs(num - ref)) < 1e-6


@pytest.mark.parametrize("pp", [0.1, 0.13, 0.2, 0.5])
def test_post_lens_power_normalization(pp):
    cfg = OpticalConfig(amplitude_b=0.5j, lens_to_observation=pp)
    alpha = an.fresnel_alpha(cfg, pp).alpha
    width = pp / (cfg.k * math.sqrt((2 * (cfg.k ** 2 * alpha).real) / cfg.k ** 2))
    half = 8 * width + 2 * cfg.pinhole_separation * pp / cfg.lens_to_pinholes
    x = np.linspace(-half, half, 1501)
    X, Y = np.meshgrid(x, x)
    psi = an.post_lens_field(cfg, X, Y, pp)
    assert trapezoid(trapezoid(np.abs(psi) ** 2, x), x) == pytest.approx(1.0, rel=1e-6)


def test_focal_field_is_unit_mean_fringe():
    cfg = OpticalConfig(amplitude_a=0.3, amplitude_b=0.8 * cmath.exp(-2.1j))
    x = np.linspace(-2e-3, 2e-3, 1001)
    inten = np.abs(an.focal_field(cfg, x)) ** 2
    assert np.allclose(inten, an.focal_fringe_intensity(cfg, x), atol=1e-12)
    period = cfg.focal_period
    assert period == pytest.approx(266e-6)
    assert np.allclose(an.focal_fringe_intensity(cfg, x + period), an.focal_fringe_intensity(cfg, x), atol=1e-9)


def test_focal_field_is_large_lens_limit():
    # With sigma large the post-lens field at P' = f loses its envelope
    big = OpticalConfig(lens_sigma=0.2, lens_to_observation=0.1)
    assert big.focal_validity_ratio < 1e-5
    x = np.linspace(-1e-3, 1e-3, 201)
    exact = np.abs(an.post_lens_field(big, x, normalize="amplitude")) ** 2
    limit = np.abs(an.focal_field(big, x)) ** 2
    assert np.allclose(exact / exact.mean(), limit / limit.mean(), atol=1e-3)


def test_fringe_minima_are_zeros_for_balanced_pinholes():
    cfg = OpticalConfig(amplitude_b=cmath.exp(0.9j) / math.sqrt(2))
    xs = an.fringe_minima(cfg, -1e-3, 1e-3)
    assert np.all((xs >= -1e-3) & (xs <= 1e-3))
    assert np.allclose(np.diff(xs), cfg.focal_period)
    assert np.max(np.abs(an.focal_field(cfg, xs))) < 1e-12
    pre = an.fringe_minima(cfg, -1e-3, 1e-3, length=cfg.prelens_distance)
    assert np.max(an.prelens_fringe_intensity(cfg, pre)) < 1e-12


def test_default_periods():
    cfg = OpticalConfig()
    assert cfg.focal_period == pytest.approx(266e-6)
    assert cfg.prelens_period == pytest.approx(399e-6)
    assert cfg.separation_ratio == pytest.approx(23.6, abs=0.05)
    assert cfg.is_imaging and cfg.magnification == -1.0


def test_image_intensity_spots():
    cfg = OpticalConfig(amplitude_a=0.9, amplitude_b=0.3)
    (ax, _), (bx, _) = an.image_spot_centers(cfg)
    assert ax == pytest.approx(100e-6) and bx == pytest.approx(-100e-6)
    r = an.image_spot_radius(cfg)
    peak = an.image_intensity(cfg, ax)
    assert an.image_intensity(cfg, ax + r) / peak == pytest.approx(math.exp(-1), rel=1e-6)
    x = np.linspace(-250e-6, 250e-6, 2001)
    X, Y = np.meshgrid(x, x)
    assert trapezoid(trapezoid(an.image_intensity(cfg, X, Y), x), x) == pytest.approx(1.0, rel=1e-6)
    right = trapezoid(trapezoid(np.where(X > 0, an.image_intensity(cfg, X, Y), 0), x), x)
    assert right == pytest.approx(0.81 / 0.9, rel=1e-6)


def test_image_intensity_is_post_lens_field_at_image_plane():
    cfg = OpticalConfig(amplitude_b=0.6j)
    x = np.linspace(-200e-6, 200e-6, 801)
    exact = np.abs(an.post_lens_field(cfg, x)) ** 2
    assert np.max(np.abs(exact - an.image_intensity(cfg, x))) < 1e-9 * exact.max()


def test_image_intensity_needs_lens_equation():
    with pytest.raises(ConfigurationError, match="lens equation"):
        an.image_intensity(OpticalConfig(lens_to_observation=0.25), 0.0)


def test_config_errors_name_the_field():
    with pytest.raises(ConfigurationError, match="wavelength"):
        OpticalConfig(wavelength=-1)
    with pytest.raises(ConfigurationError, match="lens_sigma"):
        OpticalConfig(lens_sigma=0)
    with pytest.raises(ConfigurationError):
        OpticalConfig(amplitude_a=0, amplitude_b=0)


@given(amplitudes, amplitudes)
def test_duality_relation(a, b):
    rep = an.duality_check(a, b)
    assert abs(rep.duality_sum - 1) <= 1e-12
    assert 0 <= rep.distinguishability <= 1 and 0 <= rep.visibility <= 1
    assert -math.pi < rep.phase <= math.pi


def test_duality_single_path():
    assert an.duality_check(1, 0) == (1.0, 0.0, 0.0, 1.0)
    with pytest.raises(DegenerateFieldError):
        an.duality_check(0, 0)


def test_visibility_phase_convention():
    v, phi = an.visibility_phase(1, cmath.exp(-3j))
    assert v == pytest.approx(1.0)
    assert phi == pytest.approx(3.0)
    # wraps into (-pi, pi]
    assert an.visibility_phase(cmath.exp(2j), cmath.exp(-2j))[1] == pytest.approx(4 - 2 * math.pi)
    assert an.visibility_phase(-1, 1)[1] == math.pi


def test_misuse_demo():
    r = an.duality_misuse_demo(1 / math.sqrt(2), 1 / math.sqrt(2))
    assert r.total == 2.0
    assert r.d_prime == 1.0 and r.cross_ensemble
    single = an.duality_misuse_demo(1, 0)
    assert single.total == 1.0 and not single.cross_ensemble


def test_scatterer_at_minimum_is_invisible_with_both_pinholes():
    cfg = OpticalConfig()
    x0 = (float(an.fringe_minima(cfg, 0, 3e-4)[0]), 0.0)
    x = np.linspace(-200e-6, 200e-6, 401)
    base = an.scattered_image_intensity(cfg, x0, 0.0, x)
    pert = an.scattered_image_intensity(cfg, x0, 0.3, x)
    assert np.max(np.abs(pert - base)) <= 1e-12 * base.max()


def test_scatterer_background_with_one_pinhole():
    cfg = OpticalConfig(amplitude_b=0)
    x0 = (float(an.fringe_minima(OpticalConfig(), 0, 3e-4)[0]), 0.0)
    pol = 0.05
    x = np.linspace(-250e-6, -150e-6, 101)  # far from the lone A' spot at +100 um
    extra = an.scattered_image_intensity(cfg, x0, pol, x) - an.scattered_image_intensity(cfg, x0, 0, x)
    expected = abs(pol * complex(an.focal_field(cfg, *x0))) ** 2
    assert expected == pytest.approx(pol ** 2)  # one open path: |psi| = 1 everywhere
    assert np.allclose(extra, expected, rtol=1e-9)


def test_scatterer_needs_separate_planes():
    with pytest.raises(GeometryError):
        an.scattered_image_intensity(OpticalConfig(lens_to_observation=0.1), (0, 0), 0.1, 0.0)
