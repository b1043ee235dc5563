"""Pseudo-spectral integrator for the coupled Schrodinger-KdV system

    i u_t + u_xx + |u|^2 u = a u v,
    v_t + v_xxx + (v^2 / 2)_x = g (|u|^2)_x,

with ``a = coupling_alpha`` and ``g = coupling_gamma``.  The dispersive parts
are integrated exactly by their group multipliers (integrating-factor RK4 in
Lawson form); every product is formed on a grid padded by a factor 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import BlowUpDetected, DomainTooSmallError, NaNError, ParameterError
from .groups import AIRY, SCHRODINGER, evolve, phase
from .spectral import (Field, Grid1D, NormSpec, SpaceTimeField, boundary_contamination,
                       fractional_derivative, derivative, mixed_norm, norm)

BLOWUP_NORM = 1e12
CFL = 0.5
DT_MAX = 2e-3
CONTAMINATION_MAX = 0.1
MARGIN = 0.05


@dataclass(frozen=True)
class SKdVParams:
    coupling_alpha: float = 1.0
    coupling_gamma: float = 1.0

    def __post_init__(self):
        for name in ("coupling_alpha", "coupling_gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")


@dataclass(frozen=True, eq=False)
class SKdVState:
    u: Field
    v: Field
    time: float = 0.0

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ParameterError("u and v must share one grid")
        if not self.v.is_real:
            object.__setattr__(self, "v", Field(self.v.grid, self.v.values, "real"))
        if self.time < 0:
            raise ParameterError("time must be >= 0")

    @property
    def grid(self) -> Grid1D:
        return self.u.grid


def mass(u: Field) -> float:
    return float(np.sum(np.abs(u.values) ** 2) * u.grid.dx)


def integral(v: Field) -> float:
    return float(np.sum(v.real_values) * v.grid.dx)


# -- right-hand side ---------------------------------------------------------

class _Rhs:
    """Nonlinear terms in Fourier variables with 2x zero-padded products."""

    def __init__(self, grid: Grid1D, params: SKdVParams, nonlinear: bool = True):
        self.n = grid.n_points
        self.m = 2 * self.n
        self.params = params
        self.nonlinear = nonlinear
        self.ik = 1j * grid.odd_frequencies
        self.lu = 1j * phase(grid, SCHRODINGER)
        self.lv = 1j * phase(grid, AIRY)
        h = self.n // 2
        self.keep = np.r_[0:h, self.m - h + 1:self.m]  # drops the Nyquist mode
        self.dst = np.r_[0:h, self.n - h + 1:self.n]

    def pad(self, fh):
        out = np.zeros(self.m, np.complex128)
        out[self.keep] = fh[self.dst]
        return np.fft.ifft(out) * (self.m / self.n)

    def trunc(self, g):
        gh = np.fft.fft(g) * (self.n / self.m)
        out = np.zeros(self.n, np.complex128)
        out[self.dst] = gh[self.keep]
        return out

    def __call__(self, uh, vh):
        if not self.nonlinear:
            return np.zeros_like(uh), np.zeros_like(vh)
        a, g = self.params.coupling_alpha, self.params.coupling_gamma
        u = self.pad(uh)
        v = self.pad(vh).real
        dens = np.abs(u) ** 2
        nu = 1j * self.trunc(dens * u - a * u * v)
        nv = self.ik * self.trunc(g * dens - 0.5 * v * v)
        return nu, nv


def _lawson_rk4(rhs: _Rhs, uh, vh, dt):
    eu, ev = np.exp(0.5 * dt * rhs.lu), np.exp(0.5 * dt * rhs.lv)
    k1u, k1v = rhs(uh, vh)
    k2u, k2v = rhs(eu * (uh + 0.5 * dt * k1u), ev * (vh + 0.5 * dt * k1v))
    k3u, k3v = rhs(eu * uh + 0.5 * dt * k2u, ev * vh + 0.5 * dt * k2v)
    k4u, k4v = rhs(eu * eu * uh + dt * eu * k3u, ev * ev * vh + dt * ev * k3v)
    un = eu * eu * uh + dt / 6 * (eu * eu * k1u + 2 * eu * (k2u + k3u) + k4u)
    vn = ev * ev * vh + dt / 6 * (ev * ev * k1v + 2 * ev * (k2v + k3v) + k4v)
    return un, vn


def _check_finite(uh, vh, grid, t):
    su = float(np.max(np.abs(uh))) if uh.size else 0.0
    sv = float(np.max(np.abs(vh))) if vh.size else 0.0
    if not (math.isfinite(su) and math.isfinite(sv)):
        raise BlowUpDetected(f"non-finite values at t = {t:.6g}", t, math.inf)
    # |fft| / sqrt(N) scale: compare an L2-type size against the threshold
    size = max(su, sv) * math.sqrt(grid.dx)
    if size > BLOWUP_NORM:
        raise BlowUpDetected(f"norm {size:.3e} exceeds {BLOWUP_NORM:.0e} at t = {t:.6g}", t, size)


def _to_state(grid, uh, vh, t):
    u = Field(grid, np.fft.ifft(uh), "complex")
    v = Field(grid, np.fft.ifft(vh).real, "real")
    return SKdVState(u, v, t)


def step(state: SKdVState, dt: float, params: SKdVParams, nonlinear: bool = True) -> SKdVState:
    """One integrating-factor RK4 step.  ``nonlinear=False`` is the linear-flow test hook."""
    if not dt > 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    rhs = _Rhs(state.grid, params, nonlinear)
    uh, vh = _lawson_rk4(rhs, np.fft.fft(state.u.values), np.fft.fft(state.v.real_values), dt)
    _check_finite(uh, vh, state.grid, state.time + dt)
    return _to_state(state.grid, uh, vh, state.time + dt)


def stable_dt(u: Field, v: Field, cfl: float = CFL, dt_max: float = DT_MAX) -> float:
    """``cfl / max(1, sup|v|, sup|u|^2)`` capped by ``dt_max`` (accuracy, not stability)."""
    scale = max(1.0, float(np.max(np.abs(v.values))), float(np.max(np.abs(u.values))) ** 2)
    return min(cfl / scale, dt_max)


# -- trajectories ------------------------------------------------------------

@dataclass(eq=False)
class Trajectory:
    states: List[SKdVState]
    linear_u: Optional[List[Field]]
    linear_v: Optional[List[Field]]
    params: SKdVParams
    conserved_log: List[tuple] = field(default_factory=list)
    steps: int = 0

    def __post_init__(self):
        times = self.times
        if times.size and times[0] != 0:
            raise ParameterError("a trajectory starts at t = 0")
        if np.any(np.diff(times) <= 0):
            raise ParameterError("snapshot times must be strictly increasing")

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.states])

    @property
    def grid(self) -> Grid1D:
        return self.states[0].grid

    def u_field(self) -> SpaceTimeField:
        return SpaceTimeField.from_fields(self.times, [s.u for s in self.states])

    def v_field(self) -> SpaceTimeField:
        return SpaceTimeField.from_fields(self.times, [s.v for s in self.states])

    def drift(self) -> Dict[str, float]:
        """Relative drift of mass_u; relative (absolute if the initial mean is ~0) drift of mean_v."""
        m = np.array([c[0] for c in self.conserved_log])
        w = np.array([c[1] for c in self.conserved_log])
        dm = float(np.max(np.abs(m - m[0])) / m[0]) if m[0] > 0 else float(np.max(np.abs(m)))
        ref = abs(w[0])
        dw = float(np.max(np.abs(w - w[0])) / ref) if ref > 1e-12 else float(np.max(np.abs(w - w[0])))
        return {"mass_u": dm, "mean_v": dw}


def _snapshot_times(T, snapshot_times):
    if not T > 0:
        raise ParameterError(f"T must be > 0, got {T}")
    ts = np.unique(np.concatenate([[0.0], np.asarray(snapshot_times, float), [T]]))
    if ts[0] < 0 or ts[-1] > T * (1 + 1e-12):
        raise ParameterError("snapshot times must lie in [0, T]")
    return ts


def _check_domain(state, limit):
    if limit is None:
        return
    for f, name in ((state.u, "u"), (state.v, "v")):
        c = boundary_contamination(f, MARGIN)
        if c >= limit:
            raise DomainTooSmallError(
                f"{name} reaches the box edge at t = {state.time:.4g} (contamination {c:.3e})", c)


def evolve_trajectory(u0: Field, v0: Field, T: float, params: SKdVParams,
                      snapshot_times: Sequence[float] = (), dt: Optional[float] = None,
                      cfl: float = CFL, dt_max: float = DT_MAX, nonlinear: bool = True,
                      contamination_max: Optional[float] = CONTAMINATION_MAX,
                      store_linear: bool = True) -> Trajectory:
    """Advance ``(u0, v0)`` to ``T`` and record states at ``snapshot_times`` (plus 0 and T).

    The step is fixed per run (``dt``, or the controller value at t = 0) and
    shortened inside each snapshot interval so that snapshots are hit exactly.
    """
    if u0.grid != v0.grid:
        raise ParameterError("u0 and v0 must share one grid")
    grid = u0.grid
    ts = _snapshot_times(T, snapshot_times)
    state = SKdVState(Field(grid, u0.values, "complex"), Field(grid, v0.values, "real"), 0.0)
    _check_domain(state, contamination_max)
    h = stable_dt(state.u, state.v, cfl, dt_max) if dt is None else float(dt)
    if not h > 0:
        raise ParameterError(f"dt must be > 0, got {h}")
    rhs = _Rhs(grid, params, nonlinear)
    uh, vh = np.fft.fft(state.u.values), np.fft.fft(state.v.real_values)
    states = [state]
    log = [(mass(state.u), integral(state.v))]
    steps = 0
    for t0, t1 in zip(ts[:-1], ts[1:]):
        n = max(1, int(math.ceil((t1 - t0) / h - 1e-9)))
        hh = (t1 - t0) / n
        for k in range(n):
            uh, vh = _lawson_rk4(rhs, uh, vh, hh)
            _check_finite(uh, vh, grid, t0 + (k + 1) * hh)
        steps += n
        state = _to_state(grid, uh, vh, float(t1))
        _check_domain(state, contamination_max)
        states.append(state)
        log.append((mass(state.u), integral(state.v)))
    lin_u = lin_v = None
    if store_linear:
        lin_u = [evolve(states[0].u, s.time, SCHRODINGER) for s in states]
        lin_v = [evolve(states[0].v, s.time, AIRY) for s in states]
    return Trajectory(states, lin_u, lin_v, params, log, steps)


def duhamel_split(traj: Trajectory):
    """``I(t) = u(t) - S(t)u0`` and ``II(t) = v(t) - V(t)v0`` at the snapshot times."""
    if traj.linear_u is None or traj.linear_v is None:
        raise NaNError("trajectory has no stored linear evolutions")
    times = traj.times
    I = np.array([s.u.values - lu.values for s, lu in zip(traj.states, traj.linear_u)])
    II = np.array([s.v.real_values - lv.real_values for s, lv in zip(traj.states, traj.linear_v)])
    return (SpaceTimeField(traj.grid, times, I, "complex"),
            SpaceTimeField(traj.grid, times, II.astype(np.complex128), "real"))


# -- norm bundles --------------------------------------------------------------

@dataclass(frozen=True)
class NormBundle:
    mu1: float
    mu2: float
    mu3: float
    mu4: float
    components: Dict[str, float]


def _homog(F: SpaceTimeField, s: float, extra_derivative: bool = False) -> SpaceTimeField:
    xi = F.grid.frequencies
    sym = np.abs(xi) ** s if s != 0 else np.ones_like(xi)
    if extra_derivative:
        sym = sym * 1j * F.grid.odd_frequencies
    return F.map_spectral(sym.astype(np.complex128), hermitian=True)


def _deriv(F: SpaceTimeField) -> SpaceTimeField:
    return F.map_spectral(1j * F.grid.odd_frequencies, hermitian=True)


def check_bundle_params(s: float, r1: float, r2: float):
    if not s > 0.75:
        raise ParameterError(f"bundle needs s > 3/4, got {s}")
    if s + 0.5 < r1:
        raise ParameterError(f"weight r1 = {r1} exceeds s + 1/2 = {s + 0.5}")
    if s < 2 * r2:
        raise ParameterError(f"weight r2 = {r2} exceeds s / 2 = {s / 2}")
    if r1 < 0 or r2 < 0:
        raise ParameterError("weights must be >= 0")


def bundle_from_fields(U: SpaceTimeField, V: SpaceTimeField, s: float, r1: float, r2: float) -> NormBundle:
    check_bundle_params(s, r1, r2)
    inf = math.inf
    c = {}
    c["u_sup_H"] = max(norm(f, NormSpec.sobolev(s + 0.5)) for f in U.slices())
    c["u_kato"] = mixed_norm(_homog(U, s + 0.5), inf, 2)
    c["u_maximal"] = mixed_norm(U, 2, inf)
    c["u_strichartz"] = mixed_norm(_deriv(U), inf, 4, "t_then_x")
    c["v_sup_H"] = max(norm(f, NormSpec.sobolev(s)) for f in V.slices())
    c["v_kato"] = mixed_norm(_homog(V, s, True), inf, 2)
    c["v_kato_low"] = mixed_norm(_homog(V, s - 0.5, True), inf, 2)
    c["v_maximal"] = mixed_norm(V, 2, inf)
    c["v_strichartz"] = mixed_norm(_deriv(V), inf, 4, "t_then_x")
    c["u_weight"] = max(norm(f, NormSpec.weighted_abs(r1)) for f in U.slices())
    c["v_weight"] = max(norm(f, NormSpec.weighted_abs(r2)) for f in V.slices())
    mu1 = c["u_sup_H"] + c["u_kato"] + c["u_maximal"] + c["u_strichartz"]
    mu2 = c["v_sup_H"] + c["v_kato"] + c["v_kato_low"] + c["v_maximal"] + c["v_strichartz"]
    return NormBundle(mu1, mu2, mu1 + c["u_weight"], mu2 + c["v_weight"], c)


def norm_bundle(traj: Trajectory, s: float, r1: float = 0.0, r2: float = 0.0) -> NormBundle:
    """Solution-space norms over the snapshot times of ``traj``.

    Time integrals use the trapezoid rule on the snapshots, so dense
    snapshots are needed for the time-integrated entries to mean anything.
    """
    check_bundle_params(s, r1, r2)
    return bundle_from_fields(traj.u_field(), traj.v_field(), s, r1, r2)
