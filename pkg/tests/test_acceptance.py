"""Acceptance criteria at the default 2048 x 2048 bench.

Each test records one ``[n] PASS/FAIL`` line, printed in the terminal summary,
before asserting. Full-size runs are shared through a session cache.
"""
import itertools
import math
import threading
import time

import numpy as np
import pytest

from afshar_sim import analytic as an
from afshar_sim.analysis import EventLedger
from afshar_sim.config import ScenarioConfig
from afshar_sim.errors import ComplementarityViolation
from afshar_sim.field import GridSpec
from afshar_sim.propagation import angular_spectrum, fresnel_scaled
from afshar_sim.scenarios import _focal_basis, run_scenario
from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow

DEFAULTS = ScenarioConfig(figures=False)
_cache = {}


def result(name):
    if name not in _cache:
        _cache[name] = run_scenario(DEFAULTS, name)
    return _cache[name]


def verdict(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
    assert ok, detail


def test_1_duality_relation():
    rng = np.random.default_rng(2024)
    z = rng.normal(size=(10_000, 4))
    worst = max(abs(an.duality_check(complex(a, b), complex(c, d)).duality_sum - 1) for a, b, c, d in z)
    _focal_basis.cache_clear()
    start = time.perf_counter()
    rep = result("duality_sweep").report
    elapsed = time.perf_counter() - start
    sums = [row["duality_sum"] for row in rep.summary_rows()]
    ok = worst <= 1e-12 and all(abs(s - 1) <= 0.02 for s in sums) and elapsed < 120
    verdict(1, "duality relation", ok,
            f"closed form worst |D^2+V^2-1| = {worst:.2e} over 1e4 pairs; numerical sums "
            f"{', '.join(f'{s:.4f}' for s in sums)} for |A|/|B| = 1, 2, 4, 10; sweep took {elapsed:.0f} s")


def test_2_fringe_law():
    opt = DEFAULTS.optical()
    focal = result("focal_fringes").report.metrics.period
    pre = result("prelens_fringes").report.metrics.period
    ef, ep = abs(focal / opt.focal_period - 1), abs(pre / opt.prelens_period - 1)
    assert opt.focal_period == pytest.approx(266e-6) and opt.prelens_period == pytest.approx(399e-6)
    verdict(2, "fringe law", ef <= 5e-3 and ep <= 5e-3,
            f"focal period {focal * 1e6:.3f} um (error {ef:.1e}), pre-lens period {pre * 1e6:.3f} um "
            f"(error {ep:.1e}); tolerance 5e-3")


def test_3_imaging_law():
    checks = []
    for amps in ((1 / math.sqrt(2), 1 / math.sqrt(2)), (0.8, 0.6j), (0.3, 0.95)):
        rep = run_scenario(DEFAULTS.replace(amplitude_a=amps[0], amplitude_b=amps[1]), "image_spots").report
        by_name = {c.name: c for c in rep.checks}
        checks.append((by_name["centroid_A_prime"].value, by_name["centroid_B_prime"].value,
                       by_name["spot_mass_ratio"].value))
    pixel = DEFAULTS.grid("image").dx
    worst_c = max(max(a, b) for a, b, _ in checks)
    worst_m = max(m for _, _, m in checks)
    verdict(3, "imaging law", worst_c <= pixel and worst_m <= 0.02,
            f"worst centroid offset {worst_c * 1e9:.2f} nm (pixel {pixel * 1e9:.0f} nm); "
            f"worst mass-ratio error {worst_m:.1e} (tolerance 0.02) over three amplitude pairs")


def test_4_wire_grid_suppression():
    single = result("wire_grid_single").report.absorption
    rep = result("wire_grid_double").report
    double = rep.absorption
    oracle = rep.values["quadratic_prediction"]
    ok = abs(single - 0.06) <= 0.01 and double <= 0.005 and 0.5 <= double / oracle <= 2
    verdict(4, "wire-grid suppression", ok,
            f"R_single = {single:.4f}, R_double = {double:.2e}, quadratic prediction {oracle:.2e} "
            f"(ratio {double / oracle:.2f}), suppression x{single / double:.0f}")


def test_5_null_scatterer():
    v = result("point_scatterer").report.values
    rep = result("point_scatterer").report
    rel = {c.name: c.value for c in rep.checks}["double_relative_change"]
    diff, background = v["double_abs_difference"], v["single_background"]
    floor = v["single_background_far_from_spot"]
    ok = rel <= 1e-6 and background > 0 and background >= 1e3 * diff and floor == pytest.approx(background)
    verdict(5, "null scatterer", ok,
            f"double-pinhole change {rel:.1e} of peak; single-pinhole background {background:.2e} "
            f"(uniform floor {floor:.2e}) vs double difference {diff:.1e}")


def test_6_misuse_demonstration():
    r = an.duality_misuse_demo(1 / math.sqrt(2), 1 / math.sqrt(2))
    verdict(6, "misuse demonstration", r.total == 2.0 and r.cross_ensemble,
            f"D'^2 + V^2 = {r.total!r}, cross-ensemble flag {r.cross_ensemble}")


def test_7_sinusoidal_screen():
    rep = result("sinusoidal_screen").report
    ok = rep.absorption < 1e-3 and rep.metrics.visibility > 0.95
    verdict(7, "sinusoidal object behind a two-hole screen", ok,
            f"screen absorption {rep.absorption:.1e} (limit 1e-3), image visibility "
            f"{rep.metrics.visibility:.4f} (limit 0.95)")


def _exhaustive_ledger(n_max=6):
    attempts = fired = leaks = 0
    for n in range(1, n_max + 1):
        subsets = [s for r in range(n + 1) for s in itertools.combinations(range(n), r)]
        for first, second in itertools.product(subsets, repeat=2):
            ledger = EventLedger(range(n))
            ledger.consume(first, "image")
            if set(first) & set(second):
                attempts += 1
                try:
                    ledger.consume(second, "fringes")
                except ComplementarityViolation:
                    fired += 1
            else:
                ledger.consume(second, "fringes")
            owners = ledger.consumed_by
            leaks += sum(owners[i] != "image" for i in first)
    return attempts, fired, leaks


def _threaded_ledger(n=10_000, requests=3000, threads=8):
    ledger = EventLedger(range(n))
    rng = np.random.default_rng(99)
    reqs = [rng.choice(n, size=rng.integers(1, 30), replace=False) for _ in range(requests)]
    outcome = [None] * requests

    def work(idx):
        for i in idx:
            try:
                ledger.consume(reqs[i], f"s{i % 3}")
                outcome[i] = True
            except ComplementarityViolation:
                outcome[i] = False

    pool = [threading.Thread(target=work, args=(range(t, requests, threads),)) for t in range(threads)]
    for t in pool:
        t.start()
    for t in pool:
        t.join()
    accepted = [set(reqs[i].tolist()) for i in range(requests) if outcome[i]]
    union = set().union(*accepted)
    double_use = sum(len(s) for s in accepted) - len(union)
    # a rejected request must overlap what was accepted; an accepted one may not overlap another
    bogus = sum(1 for i in range(requests) if not outcome[i] and not set(reqs[i].tolist()) & union)
    return double_use, bogus, outcome.count(False)


def test_8_ledger_property():
    attempts, fired, leaks = _exhaustive_ledger()
    double_use, bogus, rejected = _threaded_ledger()
    ok = attempts > 0 and fired == attempts and leaks == 0 and double_use == 0 and bogus == 0 and rejected > 0
    verdict(8, "single-use ledger", ok,
            f"exhaustive: {fired}/{attempts} violations rejected, {leaks} leaks; threaded 1e4 events: "
            f"{double_use} double uses, {rejected} rejections, {bogus} spurious")


def _invariants():
    g = GridSpec.square(256, 1e-3)
    X, Y = g.mesh()
    from afshar_sim.field import ComplexField
    u = ComplexField(g, np.exp(-((X - 4e-5) ** 2 + Y ** 2) / (25e-6) ** 2), 532e-9)
    v = ComplexField(g, np.exp(-(X ** 2 + (Y + 3e-5) ** 2) / (15e-6) ** 2) * np.exp(2e4j * X), 532e-9)
    split = angular_spectrum(angular_spectrum(u, 2e-3, pad=1, band_limit=False), 3e-3, pad=1, band_limit=False)
    whole = angular_spectrum(u, 5e-3, pad=1, band_limit=False)
    semigroup = np.max(np.abs(split.values - whole.values)) / np.max(np.abs(whole.values))
    a, b = 0.7 - 0.2j, -1.1 + 0.4j
    out = GridSpec.square(256, 3e-3)
    worst_lin = 0.0
    for prop in (lambda w: angular_spectrum(w, 4e-3), lambda w: fresnel_scaled(w, 0.1, out)):
        lhs = prop(u * a + v * b).values
        rhs = a * prop(u).values + b * prop(v).values
        worst_lin = max(worst_lin, np.max(np.abs(lhs - rhs)) / np.max(np.abs(lhs)))
    return semigroup, worst_lin


def test_9_cross_engine_agreement():
    residuals = {}
    for name in ("focal_fringes", "image_spots", "duality_sweep"):
        residuals.update({f"{name}:{k}": v for k, v in result(name).report.residuals.items()})
    semigroup, linear = _invariants()
    worst = max(residuals.values())
    focal = result("focal_fringes").report.residuals["focal"]
    image = result("image_spots").report.residuals["image"]
    ok = worst < 0.01 and semigroup <= 1e-10 and linear <= 1e-10
    verdict(9, "cross-engine agreement", ok,
            f"focal residual {focal:.2e}, image residual {image:.2e}, worst of {len(residuals)} cuts "
            f"{worst:.2e} (limit 1e-2); semigroup {semigroup:.1e}, linearity {linear:.1e} (limit 1e-10)")
