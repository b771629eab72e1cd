import numpy as np
import pytest
from hypothesis import given, strategies as st

from afshar_sim.errors import DegenerateFieldError
from afshar_sim.field import (ComplexField, GridSpec, IntensityMap, intensity_of, normalize_power,
                              quadratic_phase_step, sampling_check, total_power)


def test_center_sample_is_exact():
    for n in (7, 8, 2048):
        g = GridSpec.square(n, 1.0)
        assert g.x[n // 2] == 0.0
        assert g.y[n // 2] == 0.0


def test_grid_shape_is_rows_by_columns():
    g = GridSpec(6, 4, 1e-6, 2e-6)
    assert g.shape == (4, 6)
    X, Y = g.mesh()
    assert X.shape == (4, 6)
    assert np.all(X[0] == g.x) and np.all(Y[:, 0] == g.y)
    assert g.extent == (6e-6, 8e-6)


@given(st.integers(0, 99), st.integers(0, 63))
def test_index_inverts_coordinate(ix, iy):
    g = GridSpec(100, 64, 3e-6, 5e-6, center=(1e-4, -2e-4))
    x, y = g.coordinate(ix, iy)
    assert g.index(x, y) == (ix, iy)


def test_bad_grids_rejected():
    with pytest.raises(ValueError):
        GridSpec(1, 4, 1.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(4, 4, 0.0, 1.0)


def test_field_values_are_read_only():
    g = GridSpec.square(4, 1.0)
    f = ComplexField(g, np.ones(g.shape), 1e-6)
    with pytest.raises(ValueError):
        f.values[0, 0] = 2


def test_field_validation():
    g = GridSpec.square(4, 1.0)
    with pytest.raises(ValueError):
        ComplexField(g, np.ones((3, 4)), 1e-6)
    with pytest.raises(ValueError):
        ComplexField(g, np.full(g.shape, np.nan), 1e-6)
    with pytest.raises(ValueError, match="plane"):
        ComplexField(g, np.ones(g.shape), 1e-6, "nowhere")
    assert ComplexField(g, np.ones(g.shape), 1e-6, "custom(screen)").plane == "custom(screen)"


def test_field_arithmetic_needs_matching_grids():
    a = ComplexField(GridSpec.square(4, 1.0), np.ones((4, 4)), 1e-6)
    b = ComplexField(GridSpec.square(4, 2.0), np.ones((4, 4)), 1e-6)
    with pytest.raises(ValueError):
        a + b
    assert np.all((a * 2j + a).values == 1 + 2j)


def test_power_and_normalization():
    g = GridSpec.square(8, 8e-3)
    f = ComplexField(g, np.full(g.shape, 3.0), 1e-6)
    assert total_power(f) == pytest.approx(9 * 64 * 1e-6)
    assert total_power(normalize_power(f)) == pytest.approx(1.0)
    with pytest.raises(DegenerateFieldError):
        normalize_power(f * 0)


def test_intensity_map():
    g = GridSpec.square(4, 1.0)
    with pytest.raises(ValueError):
        IntensityMap(g, -np.ones(g.shape))
    f = ComplexField(g, np.full(g.shape, 1 + 1j), 1e-6, "focal")
    im = intensity_of(f)
    assert im.plane == "focal"
    assert im.total() == pytest.approx(2.0)
    assert im.cut().shape == (4,)


def test_quadratic_phase_step_formula():
    g = GridSpec.square(100, 1e-3)
    k = 2 * np.pi / 500e-9
    xmax = 50 * g.dx
    assert quadratic_phase_step(g, 500e-9, 0.5) == pytest.approx(k * xmax * g.dx / 0.5)
    assert quadratic_phase_step(g, 500e-9, np.inf) == 0.0


def test_sampling_check_flags_short_distance():
    g = GridSpec.square(256, 5e-3)
    assert sampling_check(g, 532e-9, 10.0, np.inf).passed
    bad = sampling_check(g, 532e-9, 1e-3, np.inf)
    assert not bad.passed
    assert bad.worst_phase_step == bad.propagation_phase_step >= np.pi
    lens = sampling_check(g, 532e-9, np.inf, 1e-3)
    assert not lens.passed and lens.lens_phase_step >= np.pi
