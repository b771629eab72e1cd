"""PNG figures of recorded planes: intensity map above its y = 0 cut."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .field import ComplexField, intensity_of  # noqa: E402


def plot_plane(data, path, title=None):
    im = intensity_of(data) if isinstance(data, ComplexField) else data
    g = im.grid
    scale = 1e3 if max(g.extent) > 2e-3 else 1e6
    unit = "mm" if scale == 1e3 else "um"
    x0, x1 = g.x[0] * scale, g.x[-1] * scale
    y0, y1 = g.y[0] * scale, g.y[-1] * scale
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 7.5), height_ratios=(2, 1))
    top.imshow(im.values, origin="lower", extent=(x0, x1, y0, y1), cmap="inferno", aspect="auto")
    top.set_ylabel(f"y ({unit})")
    top.set_title(title or im.plane)
    bottom.plot(g.x * scale, im.cut(), lw=0.8)
    bottom.set_xlim(x0, x1)
    bottom.set_xlabel(f"x ({unit})")
    bottom.set_ylabel("intensity")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return Path(path)


def plot_planes(planes: dict, out_dir) -> list:
    out = Path(out_dir)
    return [plot_plane(data, out / f"{name}.png", name) for name, data in planes.items()]
