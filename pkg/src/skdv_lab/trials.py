"""Ensemble campaigns over the estimate catalog, the recorded-constant store,
and the contraction and growth probes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ensembles import Ensemble, EnsembleKind
from .errors import ParameterError, SKdVError, TrialError
from .estimates import (KATO_KDV_SHARP, KATO_SCH_SHARP, EstimateId, EstimateParams,
                        EstimateReport, estimate_key, evaluate_estimate, resolved)
from .groups import AIRY, SCHRODINGER, evolve
from .spectral import Field, make_grid, sobolev_norm

DRIFT_BUDGET = 1.02
CONSTANTS_PATH = Path(__file__).parent / "data" / "constants.txt"


def worker_count(requested: Optional[int] = None) -> int:
    """Workers allowed for a campaign: ``SKDV_THREADS`` caps the request."""
    n = requested if requested is not None else (os.cpu_count() or 1)
    env = os.environ.get("SKDV_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ParameterError(f"SKDV_THREADS must be a positive integer, got {env!r}")
        if cap < 1:
            raise ParameterError(f"SKDV_THREADS must be a positive integer, got {env!r}")
        n = min(n, cap)
    return max(1, int(n))


# -- trial runner --------------------------------------------------------------

def _trial(eid, f, g, params, seed):
    return evaluate_estimate(eid, f, g, params, seed)


def _ensemble_trial(eid, ensemble, params, index):
    f = ensemble.member(index)
    g = ensemble.companion(index) if eid.bilinear else None
    return _trial(eid, f, g, params, ensemble.member_seed(index))


def _run_one(args):
    kind, payload = args
    try:
        if kind == "ensemble":
            return True, _ensemble_trial(*payload)
        return True, _trial(*payload)
    except SKdVError as exc:
        return False, f"{type(exc).__name__}: {exc}"


def worst_report(reports: Sequence[EstimateReport]) -> EstimateReport:
    live = [r for r in reports if not r.skipped]
    if not live:
        return reports[0]
    return max(live, key=lambda r: r.ratio)


def run_trials(eid: EstimateId, ensemble: Ensemble, params: EstimateParams = EstimateParams(),
               members: Optional[Sequence] = None, workers: Optional[int] = None
               ) -> Tuple[EstimateReport, List[EstimateReport]]:
    """Evaluate ``eid`` on every ensemble member; return ``(worst, all)``.

    ``members`` replaces the drawn ensemble with explicit data (fields, or
    ``(f, g)`` pairs for bilinear entries); trial ``i`` then gets seed ``i``.
    Reports come back in member order whatever the worker count.
    """
    if not isinstance(eid, EstimateId):
        eid = EstimateId[eid]
    params = params.with_(horizon=ensemble.horizon)
    if members is None:
        jobs = [("ensemble", (eid, ensemble, params, i)) for i in range(ensemble.size)]
    else:
        jobs = []
        for i, m in enumerate(members):
            f, g = (m if isinstance(m, tuple) else (m, None))
            if eid.bilinear and g is None:
                g = f
            jobs.append(("data", (eid, f, g, params, i)))
    n = worker_count(workers)
    if n == 1 or len(jobs) == 1:
        results = map(_run_one, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=min(n, len(jobs)))
        results = pool.map(_run_one, jobs)
    reports = []
    try:
        for i, (ok, out) in enumerate(results):
            if not ok:
                raise TrialError(f"{eid.name} trial aborted at member {i}: {out}", i)
            reports.append(out)
    finally:
        if n > 1 and len(jobs) > 1:
            pool.shutdown(cancel_futures=True)
    return worst_report(reports), reports


# -- recorded constants ----------------------------------------------------------

def format_constant(c: float) -> str:
    if not math.isfinite(c):
        return repr(float(c))
    return f"{c:#.12g}"


def load_constants(path=CONSTANTS_PATH) -> Dict[Tuple[str, str], float]:
    table = {}
    path = Path(path)
    if not path.exists():
        return table
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParameterError(f"{path}:{lineno}: expected '<id> <version> <constant>', got {line!r}")
        table[(parts[0], parts[1])] = float(parts[2])
    return table


def save_constants(table: Dict[Tuple[str, str], float], path=CONSTANTS_PATH):
    """Write the whole table (single writer; sorted for stable diffs)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{k} {v} {format_constant(c)}" for (k, v), c in sorted(table.items())]
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


@dataclass(frozen=True)
class ConstantCheck:
    key: str
    version: str
    worst: EstimateReport
    recorded: Optional[float]

    @property
    def passed(self) -> bool:
        if self.recorded is None:
            return False
        if self.worst.skipped:
            return True
        return self.worst.ratio <= self.recorded * DRIFT_BUDGET

    def line(self) -> str:
        rec = "missing" if self.recorded is None else format_constant(self.recorded)
        status = "ok" if self.passed else "FAIL"
        return f"{self.key} {self.version} worst={self.worst.ratio:.12g} recorded={rec} {status}"


def check_against_store(eid: EstimateId, ensemble: Ensemble, worst: EstimateReport,
                        params: EstimateParams = EstimateParams(), table=None) -> ConstantCheck:
    table = load_constants() if table is None else table
    key = estimate_key(eid, params)
    return ConstantCheck(key, ensemble.label, worst, table.get((key, ensemble.label)))


def default_campaign(size: int = 50, seed: int = 0) -> List[Tuple[EstimateId, Ensemble]]:
    """One gaussian-mixture ensemble per entry plus one other kind per group."""
    base = Ensemble(EnsembleKind.GAUSSIAN_MIXTURE, size, seed)
    out = [(eid, base) for eid in EstimateId]
    extra = {
        EstimateId.KATO_SCH: EnsembleKind.CHIRPED,
        EstimateId.STRICHARTZ_SCH: EnsembleKind.BAND_LIMITED,
        EstimateId.KATO_KDV: EnsembleKind.EXPONENTIAL_BUMP,
        EstimateId.MAX_KDV_L4: EnsembleKind.BAND_LIMITED,
    }
    for eid, kind in extra.items():
        out.append((eid, Ensemble(kind, size, seed)))
    return out


# -- probes ---------------------------------------------------------------------

PROBE_GRID = (2048, 200.0)
PROBE_T = (0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4)
PROBE_PANEL = 0.05
PROBE_BASE_SCALE = 2.0


def probe_data(n_points: int = PROBE_GRID[0], length: float = PROBE_GRID[1]):
    """Blow-up data pair (times ``PROBE_BASE_SCALE``) used as scale 1 of the probe."""
    from .initial_data import desk_data
    u0, v0, _ = desk_data(make_grid(n_points, length))
    k = PROBE_BASE_SCALE
    return Field(u0.grid, k * u0.values, "complex"), Field(v0.grid, k * v0.real_values, "real")


@dataclass(frozen=True)
class ContractionTable:
    data_scale: float
    s: float
    rows: Tuple[Tuple[float, float], ...]

    @property
    def admissible_T(self) -> float:
        """Largest grid time before the first factor >= 1/2 (0 if the first fails)."""
        best = 0.0
        for T, factor in self.rows:
            if not factor < 0.5:
                break
            best = T
        return best


def contraction_probe(data_scale: float, s: float = 0.8, T_grid: Sequence[float] = PROBE_T,
                      data=None, n_iter: int = 6, panel: float = PROBE_PANEL) -> ContractionTable:
    """Picard contraction factor of the scaled data at each horizon; divergent cells are ``inf``."""
    from .picard import contraction_factor
    from .solver import SKdVParams
    if not (math.isfinite(data_scale) and data_scale >= 0):
        raise ParameterError(f"data_scale must be >= 0, got {data_scale}")
    u0, v0 = probe_data() if data is None else data
    u = Field(u0.grid, data_scale * u0.values, "complex")
    v = Field(v0.grid, data_scale * v0.real_values, "real")
    rows = []
    for T in sorted(float(t) for t in T_grid):
        if data_scale == 0:
            rows.append((T, 0.0))
            continue
        rows.append((T, contraction_factor(u, v, T, SKdVParams(), n_iter=n_iter, s=s, panel=panel)))
    return ContractionTable(float(data_scale), float(s), tuple(rows))


@dataclass(frozen=True)
class GrowthProbe:
    eid: EstimateId
    horizons: np.ndarray
    growth: np.ndarray
    exponent: float

    @property
    def slope(self) -> float:
        """Least-squares slope of ``log growth`` against ``log(1 + T)``."""
        A = np.vstack([np.log1p(self.horizons), np.ones_like(self.horizons)]).T
        return float(np.linalg.lstsq(A, np.log(self.growth), rcond=None)[0][0])

    @property
    def bounded(self) -> bool:
        return self.slope <= self.exponent


RHO_T = (0.25, 0.5, 1.0, 2.0, 4.0)


def growth_probe(eid: EstimateId, f: Field, horizons: Sequence[float] = RHO_T,
                 params: EstimateParams = EstimateParams()) -> GrowthProbe:
    """``lhs / ||f||_{H^s}`` of a maximal-function entry as the horizon grows."""
    if eid not in (EstimateId.MAX_SCH_L2, EstimateId.MAX_KDV_L2):
        raise ParameterError(f"growth probe applies to MAX_SCH_L2 and MAX_KDV_L2, not {eid.name}")
    P = resolved(eid, params)
    hs = sobolev_norm(f, P.sobolev_order)
    T = np.asarray(sorted(horizons), float)
    g = np.array([evaluate_estimate(eid, f, params=P.with_(horizon=t)).lhs / hs for t in T])
    return GrowthProbe(eid, T, g, P.growth)


# -- sharp Kato constants --------------------------------------------------------

KATO_SETUPS = {
    # kind: (n_points, length, horizon); see the oracle tests for convergence
    AIRY: (2 ** 14, 1000.0, 5.0),
    SCHRODINGER: (4096, 400.0, 10.0),
}


def kato_profile(grid, kind: str) -> Field:
    """Even profile whose derivative weight vanishes at zero frequency."""
    x = grid.x
    if kind == AIRY:
        return Field(grid, (-8 * x ** 3 + 12 * x) * np.exp(-x ** 2), "real")
    return Field(grid, (2 - 4 * x ** 2) * np.exp(-x ** 2), "complex")


def kato_sharp_ratio(kind: str, n_points=None, length=None, horizon=None) -> Tuple[float, float]:
    """Measured Kato ratio on data focused at the middle of the horizon, and its oracle.

    The profile is evolved backward by half the horizon so the sup over ``x``
    sits at the origin with the time window centred on the focus.
    """
    N, L, T = KATO_SETUPS[kind]
    N, L, T = n_points or N, length or L, horizon or T
    grid = make_grid(N, L)
    f = evolve(kato_profile(grid, kind), -T / 2, kind)
    if kind == AIRY:
        f = Field(grid, f.values.real, "real")
        eid, oracle = EstimateId.KATO_KDV, KATO_KDV_SHARP
    else:
        eid, oracle = EstimateId.KATO_SCH, KATO_SCH_SHARP
    P = EstimateParams(horizon=T)
    return evaluate_estimate(eid, f, params=P).ratio, oracle
