"""Regularity diagnostics: spectral Sobolev index, Holder C^{1,beta} scans,
focus detection in (x, t) and the Duhamel smoothing gap.

A singularity on a finite grid is only ever a trend: quantities that stay
bounded for smooth data grow when the grid is refined near a singular point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientResolutionError, NotApplicable, ParameterError
from .spectral import Field, SpaceTimeField, derivative

MIN_BANDS = 4
TOP_EXCLUDE = 0.9
FIT_TOP = 0.5
SMOOTH_FLOOR = 1e-13
SMOOTH_INDEX = 12.0
TREND_TOL = 0.1
DEFAULT_BETA = 0.6
MAX_PAIRS = 10_000
PAIR_SEED = 20240607


@dataclass(frozen=True)
class RegularityEstimate:
    sobolev_index: float  # math.inf when smooth
    fit_band: Tuple[float, float]
    fit_residual: float
    refinement_trend: str
    band_centers: Tuple[float, ...] = ()
    band_amplitudes: Tuple[float, ...] = ()

    @property
    def smooth(self) -> bool:
        return math.isinf(self.sobolev_index)


def default_fit_band(field: Field, n_bands: int = MIN_BANDS) -> Tuple[float, float]:
    """``n_bands`` octaves below half the Nyquist frequency.

    The top octave is left out: sampling a kink or cusp aliases energy there
    and flattens the apparent decay.
    """
    hi = FIT_TOP * field.grid.nyquist
    return hi / 2 ** n_bands, hi


def _band_amplitudes(field: Field, band):
    lo, hi = band
    xi = np.abs(field.grid.frequencies)
    amp = np.abs(field.spectrum())
    n = int(round(math.log2(hi / lo)))
    centers, means = [], []
    for m in range(n):
        b_lo, b_hi = lo * 2 ** m, lo * 2 ** (m + 1)
        sel = (xi >= b_lo) & (xi < b_hi)
        if sel.sum() < 2:
            continue
        centers.append(math.sqrt(b_lo * b_hi))
        means.append(float(np.mean(amp[sel])))
    return np.array(centers), np.array(means), float(np.max(amp))


def _fit(field: Field, band):
    centers, means, peak = _band_amplitudes(field, band)
    if centers.size < MIN_BANDS:
        raise InsufficientResolutionError(
            f"only {centers.size} usable dyadic bands in {band}; need {MIN_BANDS}")
    if peak == 0 or means[-1] <= SMOOTH_FLOOR * peak:
        return math.inf, 0.0, centers, means
    logs = np.log(np.maximum(means, 1e-300))
    A = np.vstack([np.log(centers), np.ones_like(centers)]).T
    coef, *_ = np.linalg.lstsq(A, logs, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - logs) ** 2)))
    index = -coef[0] - 0.5
    if index > SMOOTH_INDEX:
        index = math.inf
    return float(index), resid, centers, means


def sobolev_index(f: Field, fit_band: Optional[Tuple[float, float]] = None,
                  n_bands: int = MIN_BANDS) -> RegularityEstimate:
    """Regularity index ``s*`` read from ``|f^(xi)| ~ |xi|^-(s* + 1/2)``.

    Least squares on the log of dyadic band means of ``|f^|``.  The trend
    compares against the same fit on every other grid point with the band
    moved down one octave.
    """
    band = default_fit_band(f, n_bands) if fit_band is None else tuple(fit_band)
    lo, hi = band
    if not 0 < lo < hi:
        raise ParameterError(f"invalid fit band {band}")
    if hi > TOP_EXCLUDE * f.grid.nyquist * (1 + 1e-12):
        raise ParameterError(f"fit band top {hi} enters the top 10% of frequencies")
    index, resid, centers, means = _fit(f, band)
    trend = "stable"
    coarse_grid = f.grid.__class__(f.grid.n_points // 2, f.grid.length)
    if coarse_grid.n_points >= 8:
        coarse = Field(coarse_grid, f.values[::2], f.tag)
        try:
            c_index, *_ = _fit(coarse, (lo / 2, hi / 2) if hi / 2 <= TOP_EXCLUDE * coarse_grid.nyquist
                               else default_fit_band(coarse, n_bands))
        except InsufficientResolutionError:
            c_index = index
        trend = _trend(c_index, index)
    return RegularityEstimate(index, band, resid, trend, tuple(centers), tuple(means))


def _trend(coarse, fine):
    if math.isinf(fine) and math.isinf(coarse):
        return "stable"
    if math.isinf(fine):
        return "diverging"
    if math.isinf(coarse):
        return "saturating"
    d = fine - coarse
    if d > TREND_TOL:
        return "diverging"
    if d < -TREND_TOL:
        return "saturating"
    return "stable"


# -- Holder scans -------------------------------------------------------------

@dataclass(frozen=True)
class HolderReport:
    order: int
    beta: float
    quotient_max: float
    location: float
    growth_ratio: float = float("nan")
    window: float = float("nan")


def _pairs(n_points, offsets, idx_pool, max_pairs, seed):
    """Index pairs ``(i, i + d)`` with both ends in ``idx_pool`` (sorted, contiguous)."""
    lo, hi = idx_pool[0], idx_pool[-1]
    firsts, seconds = [], []
    counts = [max(0, hi - lo + 1 - d) for d in offsets]
    total = sum(counts)
    rng = np.random.default_rng(seed)
    per = None if (max_pairs is None or total <= max_pairs) else max(1, max_pairs // len(offsets))
    for d, c in zip(offsets, counts):
        if c == 0:
            continue
        i = np.arange(lo, lo + c)
        if per is not None and c > per:
            i = np.sort(rng.choice(i, size=per, replace=False))
        firsts.append(i)
        seconds.append(i + d)
    if not firsts:
        return np.array([], int), np.array([], int)
    return np.concatenate(firsts), np.concatenate(seconds)


def holder_quotient(f: Field, beta: float, window: float, center: Optional[float] = None,
                    order: int = 1, max_pairs: Optional[int] = MAX_PAIRS, seed: int = PAIR_SEED):
    """``sup |f^(order)(x) - f^(order)(y)| / |x - y|^beta`` over grid pairs with
    ``|x - y| <= window`` (and both points within ``window`` of ``center``)."""
    if not 0 < beta <= 1:
        raise ParameterError(f"beta must lie in (0, 1], got {beta}")
    dx = f.grid.dx
    if window < 4 * dx * (1 - 1e-12):
        raise ParameterError(f"window {window} is below 4 dx = {4 * dx}")
    g = derivative(f, order).values if order else f.values
    n = f.grid.n_points
    if center is None:
        pool = np.arange(n)
    else:
        pool = np.nonzero(np.abs(f.grid.x - center) <= window + 1e-12 * dx)[0]
    dmax = int(math.floor(window / dx + 1e-9))
    offsets = list(range(1, dmax + 1))
    i, j = _pairs(n, offsets, pool, max_pairs, seed)
    if i.size == 0:
        return 0.0, float("nan")
    q = np.abs(g[j] - g[i]) / ((j - i) * dx) ** beta
    k = int(np.argmax(q))
    return float(q[k]), float(0.5 * (f.grid.x[i[k]] + f.grid.x[j[k]]))


def holder_modulus(f: Field, beta: float, window: float, center: Optional[float] = None,
                   order: int = 1, coarse: Optional[Field] = None, **kw) -> HolderReport:
    """Holder quotient of the ``order``-th derivative; ``growth_ratio`` compares
    with ``coarse`` (default: the same field on every other grid point)."""
    qmax, loc = holder_quotient(f, beta, window, center, order, **kw)
    if coarse is None and f.grid.n_points >= 16:
        coarse = Field(f.grid.__class__(f.grid.n_points // 2, f.grid.length), f.values[::2], f.tag)
    growth = float("nan")
    if coarse is not None:
        qc, _ = holder_quotient(coarse, beta, window, center, order, **kw)
        growth = qmax / qc if qc > 0 else (1.0 if qmax == 0 else math.inf)
    return HolderReport(order, beta, qmax, loc, growth, window)


def holder_refinement(fields: Sequence[Field], beta: float, window: float,
                      center: Optional[float] = None, order: int = 1, **kw):
    """Quotients on a refinement sequence and the ratios between consecutive levels."""
    q = [holder_quotient(f, beta, window, center, order, **kw)[0] for f in fields]
    ratios = [b / a if a > 0 else math.nan for a, b in zip(q[:-1], q[1:])]
    return q, ratios


def max_derivative(f: Field, order: int = 1, center: Optional[float] = None,
                   window: Optional[float] = None) -> Tuple[float, float]:
    g = np.abs(derivative(f, order).values)
    if center is not None and window is not None:
        g = np.where(np.abs(f.grid.x - center) <= window, g, 0.0)
    k = int(np.argmax(g))
    return float(g[k]), float(f.grid.x[k])


# -- focus detection -------------------------------------------------------------

def _nearest_candidate(f: Field, beta: float, order: int) -> float:
    g = derivative(f, order).values if order else f.values
    q = np.abs(np.roll(g, -1) - g)[:-1]
    k = int(np.argmax(q))
    return float(f.grid.x[k] + 0.5 * f.grid.dx)


def slice_strength(f: Field, beta: float, mode: str, window: float, order: int = 1):
    """``(value, x, growth)`` for one time slice.

    ``mode='holder'`` uses the Holder quotient of ``f'`` around the worst
    nearest-neighbour pair; ``mode='slope'`` uses ``max|f'|``.  ``growth`` is
    the value on the full grid divided by the value on every other point.
    """
    coarse = Field(f.grid.__class__(f.grid.n_points // 2, f.grid.length), f.values[::2], f.tag)
    if mode == "holder":
        xc = _nearest_candidate(f, beta, order)
        w = max(window, 4 * coarse.grid.dx)
        q, _ = holder_quotient(f, beta, w, center=xc, order=order)
        qc, _ = holder_quotient(coarse, beta, w, center=xc, order=order)
        return q, xc, (q / qc if qc > 0 else 1.0)
    if mode == "slope":
        m, x = max_derivative(f, order)
        mc, _ = max_derivative(coarse, order)
        return m, x, (m / mc if mc > 0 else 1.0)
    raise ParameterError(f"unknown scan mode {mode!r}")


def focusing_scan(F: SpaceTimeField, beta: float = DEFAULT_BETA, mode: Optional[str] = None,
                  window: Optional[float] = None, rel_floor: float = 1e-3) -> np.ndarray:
    """Local maxima in ``t`` of the slice strength, as rows ``(x, t, growth)``.

    Complex fields default to the Holder scan and real fields to the slope
    scan.  Rows are ordered by the slice value, dominant focus first; a zero
    field gives an empty ``(0, 3)`` array.
    """
    if mode is None:
        mode = "slope" if F.tag == "real" else "holder"
    if window is None:
        window = 8 * F.grid.dx
    rows = [slice_strength(f, beta, mode, window) for f in F.slices()]
    vals = np.array([r[0] for r in rows])
    if vals.size == 0 or not np.any(vals > 0):
        return np.zeros((0, 3))
    top = vals.max()
    out = []
    for i, (v, x, growth) in enumerate(rows):
        left = vals[i - 1] if i > 0 else -np.inf
        right = vals[i + 1] if i + 1 < vals.size else -np.inf
        if v >= left and v > right and v >= rel_floor * top and 0 < i < vals.size - 1:
            out.append((v, x, F.times[i], growth))
    if not out:
        i = int(np.argmax(vals))
        out.append((vals[i], rows[i][1], F.times[i], rows[i][2]))
    out.sort(key=lambda r: -r[0])
    return np.array([r[1:] for r in out])


# -- Duhamel smoothing gap -------------------------------------------------------

GAP_BAND = (2.0, 32.0)


@dataclass(frozen=True)
class SmoothingGapReport:
    index_linear: float
    index_duhamel: float
    component: str
    time: float
    fit_band: Tuple[float, float]

    @property
    def gap(self) -> float:
        return self.index_duhamel - self.index_linear


def gap_band(field: Field, fit_band=None):
    """The fixed physical band ``GAP_BAND`` when the grid resolves it, else the default."""
    if fit_band is not None:
        return tuple(fit_band)
    if GAP_BAND[1] <= FIT_TOP * field.grid.nyquist:
        return GAP_BAND
    return default_fit_band(field)


def smoothing_gap(traj, time: Optional[float] = None, fit_band=None):
    """Sobolev-index gaps of ``I = u - S(t)u0`` over ``S(t)u0`` and of
    ``II = v - V(t)v0`` over ``V(t)v0`` at the snapshot nearest ``time``
    (default: last).  Both indices use one band on one grid."""
    from .solver import duhamel_split

    I, II = duhamel_split(traj)
    times = traj.times
    k = times.size - 1 if time is None else int(np.argmin(np.abs(times - time)))
    if k == 0:
        raise NotApplicable("the Duhamel terms vanish at t = 0")
    reports = []
    for comp, duh, lin in (("I_schrodinger", I.slice(k), traj.linear_u[k]),
                           ("II_kdv", II.slice(k), traj.linear_v[k])):
        band = gap_band(lin, fit_band)
        e_lin = sobolev_index(lin, band)
        e_duh = sobolev_index(duh, band)
        reports.append(SmoothingGapReport(e_lin.sobolev_index, e_duh.sobolev_index, comp,
                                          float(times[k]), band))
    if all(math.isinf(r.index_linear) and math.isinf(r.index_duhamel) for r in reports) or \
            all(math.isinf(r.index_duhamel) and np.max(np.abs(d.values)) == 0
                for r, d in zip(reports, (I.slice(k), II.slice(k)))):
        raise NotApplicable("both Sobolev indices are unresolvable (smooth or zero fields)")
    return reports[0], reports[1]
