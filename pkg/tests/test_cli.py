import subprocess
import sys

import pytest

from afshar_sim.cli import main
from afshar_sim.config import dump_config


@pytest.fixture
def small_file(small_cfg, tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text(dump_config(small_cfg))
    return p


def test_run_writes_outputs(small_file, tmp_path):
    out = tmp_path / "out"
    assert main(["-q", "run", "image_spots", "--config", str(small_file), "--out", str(out), "--seed", "5"]) == 0
    files = {p.name for p in (out / "image_spots").iterdir()}
    assert {"summary.csv", "report.json", "image.pgm", "image_profile.csv"} <= files


def test_agreement_failure_exits_2(small_file, tmp_path):
    # the coarse bench misses the 1% pre-lens agreement bound
    assert main(["-q", "run", "prelens_fringes", "--config", str(small_file), "--out", str(tmp_path)]) == 2


def test_validation_failure_exits_1(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("wavelength = -5\n")
    assert main(["-q", "validate", "--config", str(bad)]) == 1
    assert main(["-q", "run", "focal_fringes", "--config", str(bad)]) == 1
    geo = tmp_path / "geo.cfg"
    geo.write_text("lens_to_observation = 0.3\n")
    assert main(["-q", "validate", "--config", str(geo), "--scenario", "image_spots"]) == 1
    assert main(["-q", "validate", "--config", str(geo)]) == 0


def test_sampling_problem_exits_1(tmp_path):
    cfg = tmp_path / "coarse.cfg"
    cfg.write_text("grid_points = 256\n")
    assert main(["-q", "validate", "--config", str(cfg)]) == 1
    assert main(["-q", "run", "focal_fringes", "--config", str(cfg), "--out", str(tmp_path)]) == 1


def test_sweep(small_file, tmp_path):
    code = main(["-q", "sweep", "--param", "wire_fill_factor", "--values", "0.1,0.12",
                 "--scenario", "wire_grid_single", "--config", str(small_file), "--out", str(tmp_path)])
    assert code == 0
    root = tmp_path / "sweep_wire_grid_single_wire_fill_factor"
    lines = (root / "summary.csv").read_text().splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("wire_grid_single[wire_fill_factor=0.1]")
    assert main(["-q", "sweep", "--param", "bogus", "--values", "1"]) == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "afshar_sim", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "validate" in out.stdout
