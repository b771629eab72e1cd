"""Plain-text and binary result files.

Floats are written with ``repr`` so reruns with the same seed produce
byte-identical files.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .field import ComplexField, IntensityMap, intensity_of

SUMMARY_COLUMNS = ("scenario", "V", "phi_rad", "period_m", "D", "duality_sum", "R", "residual")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _as_intensity(data) -> IntensityMap:
    return intensity_of(data) if isinstance(data, ComplexField) else data


def write_profile_csv(path, data):
    """``x_m,intensity`` along the y = 0 cut."""
    im = _as_intensity(data)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x_m", "intensity"])
        for x, v in zip(im.grid.x, im.cut()):
            w.writerow([_fmt(x), _fmt(v)])


def write_summary_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in SUMMARY_COLUMNS])


def write_events_csv(path, batches):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["event_id", "plane", "x_m", "y_m"])
        for batch in batches:
            for ev in batch:
                w.writerow([ev.event_id, ev.plane, _fmt(ev.x), _fmt(ev.y)])


def to_pgm16(data) -> bytes:
    """16-bit binary PGM scaled to the map's maximum; the first row is the largest y."""
    vals = _as_intensity(data).values
    peak = vals.max()
    scaled = np.zeros(vals.shape) if peak <= 0 else vals / peak
    pix = np.rint(scaled[::-1] * 65535).astype(">u2")
    ny, nx = vals.shape
    return f"P5\n{nx} {ny}\n65535\n".encode("ascii") + pix.tobytes()


def read_pgm16(path) -> np.ndarray:
    """Inverse of :func:`to_pgm16` up to scale and row order (row 0 is the largest y)."""
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if parts[0] != b"P5" or parts[2] != b"65535":
        raise ValueError(f"{path} is not a 16-bit binary PGM")
    nx, ny = (int(t) for t in parts[1].split())
    return np.frombuffer(parts[3], dtype=">u2").reshape(ny, nx)


def write_pgm16(path, data):
    Path(path).write_bytes(to_pgm16(data))


def write_report_json(path, report_dict):
    Path(path).write_text(json.dumps(report_dict, indent=2, sort_keys=True, allow_nan=True) + "\n")


def export_result(result, out_dir, figures: bool = True) -> list:
    """Write every artifact of a :class:`~afshar_sim.scenarios.ScenarioResult`; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, data in result.planes.items():
        p_csv, p_pgm = out / f"{name}_profile.csv", out / f"{name}.pgm"
        write_profile_csv(p_csv, data)
        write_pgm16(p_pgm, data)
        written += [p_csv, p_pgm]
    summary = out / "summary.csv"
    write_summary_csv(summary, result.report.summary_rows())
    report = out / "report.json"
    write_report_json(report, result.report.to_dict())
    written += [summary, report]
    if result.events:
        ev = out / "events.csv"
        write_events_csv(ev, result.events)
        written.append(ev)
    if figures:
        from .plotting import plot_planes
        written += plot_planes(result.planes, out)
    return written
