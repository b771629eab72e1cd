import numpy as np
import pytest

from afshar_sim.config import ScenarioConfig
from afshar_sim.field import ComplexField, GridSpec


@pytest.fixture(scope="session")
def small_cfg():
    """A 512-point bench: every scenario's sampling checks pass and a run takes under a second."""
    return ScenarioConfig(grid_points=512, pinhole_waist=4e-6, lens_sigma=1e-3, lens_extent=6.4e-3,
                          focal_extent=4.096e-3, wire_fill_factor=0.1, sinusoid_period=80e-6,
                          photons=20_000, figures=False)


@pytest.fixture
def gaussian_beam():
    def make(w0=20e-6, n=256, extent=1e-3, wavelength=532e-9, center=(0.0, 0.0)):
        g = GridSpec.square(n, extent)
        X, Y = g.mesh()
        vals = np.exp(-((X - center[0]) ** 2 + (Y - center[1]) ** 2) / w0 ** 2)
        return ComplexField(g, vals, wavelength, "aperture")
    return make


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
