"""Experiment driver: turns a config into snapshots, a CSV time series and a
run manifest."""

from __future__ import annotations

import json
import logging
import math
import time
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from . import __version__
from .config import Experiment, ExperimentConfig
from .diagnostics import holder_quotient, max_derivative, slice_strength, smoothing_gap, sobolev_index
from .errors import InsufficientResolutionError, NotApplicable, ParameterError
from .groups import AIRY, SCHRODINGER, evolve_series
from .initial_data import (KdvDatumParams, SchrodingerDatumParams, kdv_contamination, kdv_datum,
                           schrodinger_datum)
from .snapshot import read_snapshot, write_snapshot
from .spectral import Field, boundary_contamination, make_grid

log = logging.getLogger("skdv_lab")


def fmt(x) -> str:
    """17 significant digits: every finite double survives the round trip."""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence]):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(fmt(v) for v in r) + "\n")


def beta_column(b: float) -> str:
    return f"holder_quotient_beta_{b:g}"


# -- data ----------------------------------------------------------------------

def grid_of(cfg: ExperimentConfig):
    return make_grid(cfg.n_points, cfg.length)


def schrodinger_params(cfg):
    return SchrodingerDatumParams(alpha=cfg.data_alpha, x0=cfg.x0)


def kdv_params(cfg, coupled: bool):
    if cfg.kdv_alpha is not None:
        a = cfg.kdv_alpha
    else:
        a = schrodinger_params(cfg).focus[1] if coupled else cfg.data_alpha
    return KdvDatumParams(alpha=a, c=cfg.c, j_max=cfg.j_max)


def _scaled(f: Field, k: float) -> Field:
    return f if k == 1 else Field(f.grid, k * f.values, f.tag)


def coupled_data(cfg):
    g = grid_of(cfg)
    u0 = schrodinger_datum(schrodinger_params(cfg), g)
    v0 = kdv_datum(kdv_params(cfg, coupled=True), g)
    return _scaled(u0, cfg.data_scale), _scaled(v0, cfg.data_scale)


# -- per-snapshot diagnostics --------------------------------------------------

def _safe_index(f: Field, band):
    try:
        return sobolev_index(f, band).sobolev_index
    except (InsufficientResolutionError, ParameterError):
        return math.nan


def _holder(f: Field, b: float, cfg, center: float):
    try:
        return holder_quotient(f, b, cfg.holder_window, center=center)[0]
    except ParameterError:
        return math.nan


def _u_cols(u: Field, cfg, center):
    cols = {"mass_u": float(u.grid.dx * np.sum(np.abs(u.values) ** 2)),
            "max_abs_u": u.max_abs(),
            "max_du": max_derivative(u)[0]}
    for b in cfg.beta:
        cols[beta_column(b)] = _holder(u, b, cfg, center)
    cols["sobolev_index_u"] = _safe_index(u, cfg.fit_band)
    return cols


def _v_cols(v: Field, cfg, center, holder=True):
    cols = {"mean_v": float(np.sum(v.real_values) / v.grid.n_points),
            "max_abs_v": v.max_abs(),
            "max_dv": max_derivative(v)[0]}
    if holder:
        for b in cfg.beta:
            cols[beta_column(b)] = _holder(v, b, cfg, center)
    cols["sobolev_index_v"] = _safe_index(v, cfg.fit_band)
    return cols


COLUMN_ORDER = ["time", "mass_u", "mean_v", "max_abs_u", "max_abs_v", "max_du", "max_dv",
                "<holder>", "sobolev_index_u", "sobolev_index_v", "gap_I", "gap_II"]


def _ordered(rows: List[Dict], cfg) -> List[str]:
    present = set().union(*rows)
    header = []
    for c in COLUMN_ORDER:
        if c == "<holder>":
            header += [beta_column(b) for b in cfg.beta if beta_column(b) in present]
        elif c in present:
            header.append(c)
    header += sorted(present - set(header))
    return header


# -- experiments -----------------------------------------------------------------

class Run:
    """Artifacts of one experiment; a single writer owns the output directory."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.out = Path(cfg.output_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.files: List[str] = []
        self.summary: Dict = {}

    def snapshot(self, name: str, f: Field, t: float):
        if not self.cfg.write_snapshots:
            return
        d = self.out / "snapshots"
        d.mkdir(exist_ok=True)
        write_snapshot(d / name, f, t)
        self.files.append(f"snapshots/{name}")

    def table(self, name: str, rows: List[Dict]):
        header = _ordered(rows, self.cfg)
        write_csv(self.out / name, header, [[r.get(h, math.nan) for h in header] for r in rows])
        self.files.append(name)


def _times(cfg):
    return np.linspace(0.0, cfg.horizon, cfg.snapshots)


def run_linear_schrodinger(run: Run):
    cfg = run.cfg
    sp = schrodinger_params(cfg)
    u0 = _scaled(schrodinger_datum(sp, grid_of(cfg)), cfg.data_scale)
    U = evolve_series(u0, _times(cfg), SCHRODINGER)
    rows = []
    for k, (t, u) in enumerate(zip(U.times, U.slices())):
        rows.append({"time": float(t), **_u_cols(u, cfg, sp.x0)})
        run.snapshot(f"u_{k:04d}.skdv", u, float(t))
    run.table("timeseries.csv", rows)
    q = np.array([r[beta_column(cfg.beta[0])] for r in rows])
    # an all-nan column means the Holder window is under a few grid cells
    peak = rows[int(np.nanargmax(q))]["time"] if np.any(np.isfinite(q)) else None
    run.summary.update(predicted_focus_time=sp.focus[1], holder_peak_time=peak)


def run_linear_kdv(run: Run):
    cfg = run.cfg
    kp = kdv_params(cfg, coupled=False)
    v0 = _scaled(kdv_datum(kp, grid_of(cfg)), cfg.data_scale)
    V = evolve_series(v0, _times(cfg), AIRY)
    rows = []
    for k, (t, v) in enumerate(zip(V.times, V.slices())):
        rows.append({"time": float(t), **_v_cols(v, cfg, 0.0)})
        run.snapshot(f"v_{k:04d}.skdv", v, float(t))
    run.table("timeseries.csv", rows)
    k = int(np.argmax([r["max_dv"] for r in rows]))
    run.summary.update(predicted_focus_times=[t for t in kp.focus_times() if t <= cfg.horizon],
                       max_dv_peak_time=rows[k]["time"])


def _solver_params(cfg):
    from .solver import SKdVParams
    return SKdVParams(cfg.coupling_alpha, cfg.coupling_gamma)


def run_nonlinear(run: Run):
    from .solver import evolve_trajectory
    cfg = run.cfg
    u0, v0 = coupled_data(cfg)
    traj = evolve_trajectory(u0, v0, cfg.horizon, _solver_params(cfg), _times(cfg)[1:-1], dt=cfg.dt)
    rows = []
    for k, st in enumerate(traj.states):
        r = {"time": st.time, **_u_cols(st.u, cfg, cfg.x0), **_v_cols(st.v, cfg, 0.0, holder=False)}
        try:
            gi, gii = smoothing_gap(traj, st.time, cfg.fit_band)
            r["gap_I"], r["gap_II"] = gi.gap, gii.gap
        except (NotApplicable, InsufficientResolutionError):
            r["gap_I"] = r["gap_II"] = math.nan
        rows.append(r)
        run.snapshot(f"u_{k:04d}.skdv", st.u, st.time)
        run.snapshot(f"v_{k:04d}.skdv", st.v, st.time)
    run.table("timeseries.csv", rows)
    run.summary.update(steps=traj.steps, **{f"drift_{k}": v for k, v in traj.drift().items()})


def run_picard_crosscheck(run: Run):
    from .picard import picard_solve
    from .solver import evolve_trajectory
    cfg = run.cfg
    u0, v0 = coupled_data(cfg)
    params = _solver_params(cfg)
    ptraj, factors = picard_solve(u0, v0, cfg.horizon, params)
    times = ptraj.times
    straj = evolve_trajectory(u0, v0, cfg.horizon, params, times[1:-1], dt=cfg.dt, store_linear=False)
    rows = []
    for p, s in zip(ptraj.states, straj.states):
        dx = p.u.grid.dx
        rows.append({"time": s.time,
                     "mass_u": float(dx * np.sum(np.abs(s.u.values) ** 2)),
                     "mean_v": float(np.mean(s.v.real_values)),
                     "max_abs_u": s.u.max_abs(), "max_abs_v": s.v.max_abs(),
                     "picard_diff_u": float(np.sqrt(dx * np.sum(np.abs(p.u.values - s.u.values) ** 2))),
                     "picard_diff_v": float(np.sqrt(dx * np.sum((p.v.real_values - s.v.real_values) ** 2)))})
    run.table("timeseries.csv", rows)
    run.snapshot("u_picard.skdv", ptraj.states[-1].u, cfg.horizon)
    run.snapshot("u_stepper.skdv", straj.states[-1].u, cfg.horizon)
    run.summary.update(max_picard_diff_u=max(r["picard_diff_u"] for r in rows),
                       max_picard_diff_v=max(r["picard_diff_v"] for r in rows),
                       contraction_factors=list(factors))


def run_estimates(run: Run):
    from .ensembles import Ensemble
    from .estimates import EstimateId, EstimateParams
    from .trials import check_against_store, load_constants, run_trials
    cfg = run.cfg
    ens = Ensemble(cfg.ensemble_kind, cfg.ensemble_size, cfg.seed, grid_of(cfg), cfg.horizon)
    ids = list(EstimateId) if "all" in cfg.estimates else [EstimateId[n] for n in cfg.estimates]
    params = EstimateParams(horizon=cfg.horizon)
    table = load_constants()
    trial_rows, summary = [], []
    for eid in ids:
        worst, reports = run_trials(eid, ens, params)
        for i, r in enumerate(reports):
            trial_rows.append([r.key, ens.label, i, r.trial_seed, r.lhs, r.rhs_core, r.ratio, r.skipped])
        chk = check_against_store(eid, ens, worst, params, table)
        summary.append(chk)
        log.info(chk.line())
    write_csv(run.out / "trials.csv",
              ["id", "ensemble", "member", "seed", "lhs", "rhs_core", "ratio", "skipped"], trial_rows)
    run.files.append("trials.csv")
    with open(run.out / "constants_check.txt", "w") as fh:
        fh.write("".join(c.line() + "\n" for c in summary))
    run.files.append("constants_check.txt")
    run.summary.update(failed=[c.key for c in summary if not c.passed], checked=len(summary))
    return 0 if all(c.passed for c in summary) else 3


def diagnose(f: Field, t: float, betas=(0.6,), fit_band=None, window=None) -> Dict:
    """Regularity summary of one field as an ordered dict of CSV columns."""
    est = sobolev_index(f, fit_band)
    row = {"time": t, "kind": f.tag, "n_points": f.grid.n_points, "length": f.grid.length,
           "sobolev_index": est.sobolev_index, "fit_band_lo": est.fit_band[0],
           "fit_band_hi": est.fit_band[1], "fit_residual": est.fit_residual,
           "refinement_trend": est.refinement_trend, "smooth": est.smooth}
    w = 8 * f.grid.dx if window is None else window
    for b in betas:
        q, x, growth = slice_strength(f, b, "holder", w)
        row[beta_column(b)] = q
        row[f"holder_location_beta_{b:g}"] = x
        row[f"holder_growth_beta_{b:g}"] = growth
    return row


def run_diagnose(run: Run):
    cfg = run.cfg
    f, t = read_snapshot(cfg.field_path)
    row = diagnose(f, t, cfg.beta, cfg.fit_band)
    write_csv(run.out / "diagnosis.csv", list(row), [list(row.values())])
    run.files.append("diagnosis.csv")


EXPERIMENTS = {
    Experiment.LINEAR_SCHRODINGER: run_linear_schrodinger,
    Experiment.LINEAR_KDV: run_linear_kdv,
    Experiment.NONLINEAR_SKDV: run_nonlinear,
    Experiment.PICARD_CROSSCHECK: run_picard_crosscheck,
    Experiment.ESTIMATES: run_estimates,
    Experiment.DIAGNOSE_FIELD: run_diagnose,
}


def run(cfg: ExperimentConfig) -> int:
    """Execute ``cfg``; returns the exit status (module errors propagate)."""
    cfg.validate()
    r = Run(cfg)
    handler = logging.FileHandler(r.out / "run.log", mode="w")
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.addHandler(handler)
    # run.log is an artifact: it records INFO whatever the caller configured
    level = log.level
    log.setLevel(logging.INFO)
    try:
        log.info("resolved config:\n%s", cfg.to_text())
        t0 = time.perf_counter()
        status = EXPERIMENTS[cfg.experiment](r) or 0
        wall = time.perf_counter() - t0
        manifest = {"library": "skdv_lab", "version": __version__, "experiment": cfg.experiment.value,
                    "config": cfg.as_dict(), "wall_time_s": wall, "exit_status": status,
                    "artifacts": r.files, "summary": r.summary}
        (r.out / "config.resolved").write_text(cfg.to_text())
        (r.out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=float) + "\n")
        log.info("done in %.2f s, status %d", wall, status)
        return status
    finally:
        log.setLevel(level)
        log.removeHandler(handler)
        handler.close()


def grid_check(cfg: ExperimentConfig) -> Dict:
    """Contamination and tail diagnostics of the configured data, without evolving."""
    g = grid_of(cfg)
    sp = schrodinger_params(cfg)
    coupled = cfg.experiment != Experiment.LINEAR_KDV
    kp = kdv_params(cfg, coupled)
    from .initial_data import (KDV_CONTAMINATION_MAX, SCHRODINGER_CONTAMINATION_MAX, TAIL_TOL)
    x = g.x
    u0 = Field(g, np.exp(-1j * sp.alpha * (x - sp.x0) ** 2) * (1.0 + x ** 2) ** -1.25, "complex")
    j = kp.resolved_j_max()
    info = {
        "n_points": g.n_points, "length": g.length, "dx": g.dx, "nyquist": g.nyquist,
        "schrodinger_contamination": boundary_contamination(u0, 0.05),
        "schrodinger_contamination_max": SCHRODINGER_CONTAMINATION_MAX,
        "kdv_alpha": kp.alpha, "j_max": j, "required_j_max": kp.required_j_max(),
        "series_tail": kp.tail(j), "tail_tol": TAIL_TOL,
        "kdv_contamination": kdv_contamination(kp, g),
        "kdv_contamination_max": KDV_CONTAMINATION_MAX,
    }
    info["schrodinger_ok"] = info["schrodinger_contamination"] < SCHRODINGER_CONTAMINATION_MAX
    info["kdv_ok"] = info["kdv_contamination"] < KDV_CONTAMINATION_MAX and info["series_tail"] < TAIL_TOL
    return info
