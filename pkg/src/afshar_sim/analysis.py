"""Fringe, spot and absorption metrics; photon sampling; the single-use event ledger."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import least_squares

from .errors import (AccountingError, ComplementarityViolation, DegenerateFieldError, FitError,
                     LedgerError, SpotOverlapError)
from .field import ComplexField, IntensityMap, total_power

#: fits whose r.m.s. residual exceeds this fraction of the peak are rejected
MAX_FIT_RESIDUAL = 0.10


class FringeMetrics(NamedTuple):
    visibility: float
    phase: float
    period: float
    residual: float


def _wrap(phase):
    return float(np.pi - np.mod(np.pi - phase, 2 * np.pi))


def measure_visibility(x, intensity, period_hint: float, envelope: bool = True) -> FringeMetrics:
    """Least-squares fit of ``E(x) (1 + V cos(2 pi x / period + phi))``.

    ``E(x) = exp(e0 + e1 s + e2 s^2)`` with ``s`` the window-normalized
    coordinate absorbs a smooth (e.g. Gaussian) illumination envelope; with
    ``envelope=False`` it is a constant. The phase refers to ``x = 0``.

    Parameters
    ----------
    x, intensity : array_like
        1-D profile samples; the whole profile is the fit window.
    period_hint : float
        Expected period. Periods within -30%/+40% of it are scanned for the
        starting point. The window must hold at least five hinted periods.

    Raises
    ------
    FitError
        Too few periods, negative or empty data, or a relative r.m.s.
        residual above :data:`MAX_FIT_RESIDUAL`.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(intensity, dtype=float)
    span = x[-1] - x[0]
    if span < 5 * period_hint:
        raise FitError(f"window spans {span / period_hint:.2f} periods; need at least 5")
    if np.any(y < 0) or not np.max(y) > 0:
        raise FitError("fringe profile must be non-negative with a positive maximum")
    peak = np.max(y)
    yn = y / peak
    xc = 0.5 * (x[0] + x[-1])
    s = (x - xc) / (0.5 * span)

    # linear start: the best of a scan of periods around the hint
    best = None
    for trial in period_hint * np.linspace(0.7, 1.4, 141):
        theta = 2 * np.pi * x / trial
        design = np.column_stack([np.ones_like(x), s, s * s, np.cos(theta), np.sin(theta)])
        coef, res, *_ = np.linalg.lstsq(design, yn, rcond=None)
        err = float(res[0]) if res.size else float(np.sum((design @ coef - yn) ** 2))
        if best is None or err < best[0]:
            best = (err, trial, coef)
    _, start_period, (a, _, _, b, c) = best
    a = max(a, 1e-300)
    v0 = float(np.hypot(b, c) / a)
    phi0 = float(np.arctan2(-c, b))

    def model(p):
        e0, e1, e2, v, period, phi = p
        env = np.exp(e0 + e1 * s + e2 * s * s) if envelope else np.exp(e0)
        return env * (1 + v * np.cos(2 * np.pi * x / period + phi))

    p0 = np.array([np.log(a), 0.0, 0.0, v0, start_period, phi0])
    scale = np.array([1.0, 1.0, 1.0, 1.0, period_hint, 1.0])
    try:
        sol = least_squares(lambda p: model(p) - yn, p0, x_scale=scale, method="lm",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=20000)
    except (ValueError, FloatingPointError) as exc:
        raise FitError(f"fringe fit failed: {exc}") from exc
    e0, e1, e2, v, period, phi = sol.x
    if v < 0:
        v, phi = -v, phi + np.pi
    residual = float(np.sqrt(np.mean((model(sol.x) - yn) ** 2)))
    if not np.isfinite(residual) or residual > MAX_FIT_RESIDUAL:
        raise FitError(f"unreliable fringe fit: r.m.s. residual {residual:.3g} of peak")
    return FringeMetrics(float(v), _wrap(phi), float(abs(period)), residual)


def extrema_visibility(intensity) -> float:
    """Raw ``(I_max - I_min) / (I_max + I_min)`` over the samples."""
    y = np.asarray(intensity, dtype=float)
    hi, lo = float(np.max(y)), float(np.min(y))
    if hi + lo == 0:
        raise FitError("empty profile")
    return (hi - lo) / (hi + lo)


class SpotMetrics(NamedTuple):
    mass_positive: float
    mass_negative: float
    centroid_positive: tuple
    centroid_negative: tuple

    @property
    def distinguishability(self):
        return abs(self.mass_positive - self.mass_negative) / (self.mass_positive + self.mass_negative)

    @property
    def mass_ratio(self):
        """``positive / negative`` half-plane mass."""
        return self.mass_positive / self.mass_negative


def spot_metrics(image: IntensityMap, split: float = 0.0, check_separation: bool = True) -> SpotMetrics:
    """Integrated mass and centroid of the intensity on each side of ``x = split``.

    The saddle between the two marginal peaks must stay below 10% of the
    smaller peak; a negligible second spot (below 1e-6 of the first) counts
    as a single spot and is not checked.
    """
    vals = image.values
    X, Y = image.grid.mesh()
    pos = X > split
    neg = ~pos
    area = image.grid.cell_area
    mp = float(np.sum(vals[pos]) * area)
    mn = float(np.sum(vals[neg]) * area)
    if mp + mn <= 0:
        raise DegenerateFieldError("image plane carries no intensity")
    if check_separation:
        marginal = vals.sum(axis=0)
        x = image.grid.x
        right, left = marginal[x > split], marginal[x <= split]
        pk_r, pk_l = right.max(initial=0.0), left.max(initial=0.0)
        small, big = min(pk_r, pk_l), max(pk_r, pk_l)
        if small > 1e-6 * big:
            i_l = np.flatnonzero(x <= split)[np.argmax(left)]
            i_r = np.flatnonzero(x > split)[np.argmax(right)]
            saddle = marginal[i_l:i_r + 1].min()
            if saddle >= 0.1 * small:
                raise SpotOverlapError(f"spots overlap: saddle {saddle / small:.2%} of the smaller peak")

    def centroid(sel):
        w = vals[sel]
        tot = w.sum()
        if tot <= 0:
            return (float("nan"), float("nan"))
        return (float(np.sum(w * X[sel]) / tot), float(np.sum(w * Y[sel]) / tot))

    return SpotMetrics(mp, mn, centroid(pos), centroid(neg))


def measure_distinguishability(image: IntensityMap, split: float = 0.0) -> float:
    """``|m_+ - m_-| / (m_+ + m_-)`` from the spot masses either side of ``x = split``."""
    return spot_metrics(image, split).distinguishability


def cross_engine_residual(numerical: IntensityMap, analytic) -> float:
    """R.m.s. difference of the y = 0 cuts over the numerical peak.

    Both maps are first scaled to unit power on the shared grid, which stands
    in for the unknown absolute normalization of the closed-form expressions.
    """
    a = np.broadcast_to(np.asarray(analytic, dtype=float), numerical.grid.shape)
    n = numerical.values
    area = numerical.grid.cell_area
    pn, pa = n.sum() * area, a.sum() * area
    if not (pn > 0 and pa > 0):
        raise DegenerateFieldError("cannot compare maps without power")
    row = numerical.grid.ny // 2
    cn, ca = n[row] / pn, a[row] / pa
    return float(np.sqrt(np.mean((cn - ca) ** 2)) / np.max(cn))


def absorption_fraction(before: ComplexField, after: ComplexField) -> float:
    """Fraction of power removed between two fields bracketing an absorber."""
    p0, p1 = total_power(before), total_power(after)
    if not p0 > 0:
        raise DegenerateFieldError("incident field carries no power")
    if p1 > p0 * (1 + 1e-12):
        raise AccountingError(f"power increased across a passive element ({p0:.6g} -> {p1:.6g})")
    return max(0.0, 1 - p1 / p0)


# -- photon events ----------------------------------------------------------

class PhotonEvent(NamedTuple):
    event_id: int
    x: float
    y: float
    plane: str


@dataclass(frozen=True, eq=False)
class PhotonEvents:
    """Struct-of-arrays batch of detection events; iterates as :class:`PhotonEvent`."""

    event_id: np.ndarray
    x: np.ndarray
    y: np.ndarray
    plane: str

    def __len__(self):
        return len(self.event_id)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i):
        if isinstance(i, (slice, np.ndarray)):
            return PhotonEvents(self.event_id[i], self.x[i], self.y[i], self.plane)
        return PhotonEvent(int(self.event_id[i]), float(self.x[i]), float(self.y[i]), self.plane)

    @property
    def ids(self):
        return self.event_id

    @classmethod
    def empty(cls, plane):
        return cls(np.zeros(0, dtype=np.int64), np.zeros(0), np.zeros(0), plane)


def sample_photons(intensity: IntensityMap, n: int, seed: int, first_id: int = 0,
                   plane: str | None = None) -> PhotonEvents:
    """Draw ``n`` detection positions from an intensity map used as a probability density.

    A cell is chosen with probability proportional to its intensity, then the
    position is jittered uniformly inside the cell. Uses numpy's PCG64
    generator, so a seed reproduces the same events within one numpy build.
    """
    if n < 1:
        raise ValueError("need at least one photon")
    w = np.asarray(intensity.values, dtype=float).ravel()
    total = w.sum()
    if not total > 0:
        raise DegenerateFieldError("cannot sample photons from a zero intensity map")
    rng = np.random.default_rng(seed)
    cells = rng.choice(w.size, size=n, p=w / total)
    g = intensity.grid
    iy, ix = np.unravel_index(cells, g.shape)
    x, y = g.coordinate(ix, iy)
    x = x + (rng.random(n) - 0.5) * g.dx
    y = y + (rng.random(n) - 0.5) * g.dy
    ids = np.arange(first_id, first_id + n, dtype=np.int64)
    return PhotonEvents(ids, x, y, plane or intensity.plane)


def partition_by_mask(events: PhotonEvents, mask) -> tuple:
    """Split events into (absorbed, transmitted) by the mask cell each one falls in.

    A cell with zero transmission absorbs every photon landing in it.
    """
    ix, iy = mask.grid.index(events.x, events.y)
    ix = np.clip(ix, 0, mask.grid.nx - 1)
    iy = np.clip(iy, 0, mask.grid.ny - 1)
    blocked = np.abs(mask.values[iy, ix]) == 0
    return events[blocked], events[~blocked]


class EventLedger:
    """Records which statistic each photon event was used for.

    An event can feed one statistic only: a photon cannot be absorbed twice,
    so it cannot contribute both to an image-spot histogram and to a fringe
    histogram. :meth:`consume` is atomic; concurrent callers either get all
    their events or none.
    """

    def __init__(self, event_ids=()):
        self._lock = threading.Lock()
        self._known = {int(i) for i in np.asarray(list(event_ids)).ravel()}
        self.consumed_by = {}

    @classmethod
    def from_events(cls, *batches):
        ids = [np.asarray(b.ids) for b in batches]
        all_ids = np.concatenate(ids) if ids else np.zeros(0, dtype=np.int64)
        if len(np.unique(all_ids)) != len(all_ids):
            raise LedgerError("event ids are not unique")
        return cls(all_ids)

    @property
    def events(self):
        return frozenset(self._known)

    def register(self, event_ids):
        with self._lock:
            new = [int(i) for i in event_ids]
            if len(set(new)) != len(new) or self._known.intersection(new):
                raise LedgerError("duplicate event id")
            self._known.update(new)

    def consume(self, event_ids, statistic_id: str) -> "EventLedger":
        """Attribute ``event_ids`` to ``statistic_id``.

        Raises
        ------
        ComplementarityViolation
            If any of the events was already consumed; nothing is recorded.
        LedgerError
            For unknown or repeated ids in the request.
        """
        ids = [int(i) for i in np.asarray(event_ids).ravel()]
        with self._lock:
            if len(set(ids)) != len(ids):
                raise LedgerError("the same event appears twice in one request")
            unknown = [i for i in ids if i not in self._known]
            if unknown:
                raise LedgerError(f"unknown event ids {unknown[:5]}")
            taken = [i for i in ids if i in self.consumed_by]
            if taken:
                raise ComplementarityViolation(taken, statistic_id,
                                               {i: self.consumed_by[i] for i in taken})
            for i in ids:
                self.consumed_by[i] = statistic_id
        return self

    def statistic_of(self, event_id):
        return self.consumed_by.get(int(event_id))

    def counts(self):
        out = {}
        for stat in self.consumed_by.values():
            out[stat] = out.get(stat, 0) + 1
        return out


def consume_events(ledger: EventLedger, event_ids, statistic_id: str) -> EventLedger:
    return ledger.consume(event_ids, statistic_id)


class SubensembleReport(NamedTuple):
    n_wire: int
    n_image: int
    wire_fraction: float
    image_fraction: float
    fringe_informed_events: int
    fringe_uninformed_events: int
    statement: str


def wire_subensemble_report(wire_events, image_events, ledger: EventLedger | None = None) -> SubensembleReport:
    """Account for which events carry fringe information.

    Only photons stopped by the wires (placed at fringe minima) say anything
    about the interference pattern, and only about its minima. The photons
    detected in the image plane inform the image statistics and nothing else.
    """
    w_ids = np.asarray(wire_events.ids if hasattr(wire_events, "ids") else wire_events)
    i_ids = np.asarray(image_events.ids if hasattr(image_events, "ids") else image_events)
    if np.intersect1d(w_ids, i_ids).size:
        raise LedgerError("the same event is listed at the wires and in the image plane")
    if ledger is not None:
        known = ledger.events
        for i in np.concatenate([w_ids, i_ids]):
            if int(i) not in known:
                raise LedgerError(f"event {int(i)} is not in the ledger")
        stats_w = {ledger.statistic_of(i) for i in w_ids} - {None}
        stats_i = {ledger.statistic_of(i) for i in i_ids} - {None}
        if stats_w & stats_i:
            raise LedgerError("wire and image events were pooled into one statistic")
    nw, ni = len(w_ids), len(i_ids)
    total = nw + ni
    fw = nw / total if total else 0.0
    statement = (f"{nw} of {total} events ({fw:.3%}) were absorbed at the wires and only sample the "
                 f"fringe minima; the {ni} image-plane events carry no fringe information")
    return SubensembleReport(nw, ni, fw, 1 - fw if total else 0.0, nw, ni, statement)
