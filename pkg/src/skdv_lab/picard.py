"""Fixed-point iteration of the integral (Duhamel) form of the coupled system.

Unknowns are held in the interaction picture ``w = S(-t)u``, ``z = V(-t)v``
at composite Chebyshev-Gauss-Lobatto nodes in time; the time integrals are
applied as one dense integration matrix built from barycentric Lagrange
interpolation on each panel.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import ContractionFailure, ParameterError
from .groups import AIRY, SCHRODINGER, evolve
from .solver import (SKdVParams, SKdVState, Trajectory, _Rhs, bundle_from_fields,
                     integral, mass)
from .spectral import Field, SpaceTimeField

NODES = 9
PANEL = 0.0125
DIVERGE_RUN = 3


def lobatto_nodes(a: float, b: float, m: int) -> np.ndarray:
    """``m`` Chebyshev-Gauss-Lobatto points on ``[a, b]``, increasing."""
    k = np.arange(m)
    return a + 0.5 * (b - a) * (1.0 - np.cos(np.pi * k / (m - 1)))


def _bary_weights(x):
    w = np.ones_like(x)
    for j in range(x.size):
        w[j] = 1.0 / np.prod(x[j] - np.delete(x, j))
    return w


def lagrange_matrix(nodes: np.ndarray, points: np.ndarray) -> np.ndarray:
    """``B[i, k] = l_k(points[i])`` for the Lagrange basis on ``nodes``."""
    w = _bary_weights(nodes)
    d = points[:, None] - nodes[None, :]
    exact = np.isclose(d, 0.0, atol=1e-15 * max(1.0, np.ptp(nodes)))
    d = np.where(exact, 1.0, d)
    B = (w / d)
    B = B / B.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    B[hit] = exact[hit].astype(float)
    return B


def integration_matrix(nodes: np.ndarray) -> np.ndarray:
    """``Q[m, k] = int_{nodes[0]}^{nodes[m]} l_k(t) dt``, exact for polynomials of degree < len(nodes)."""
    n = nodes.size
    g, gw = np.polynomial.legendre.leggauss(n + 1)
    Q = np.zeros((n, n))
    for m in range(1, n):
        a, b = nodes[0], nodes[m]
        pts = a + 0.5 * (b - a) * (g + 1.0)
        Q[m] = 0.5 * (b - a) * gw @ lagrange_matrix(nodes, pts)
    return Q


def composite_nodes(T: float, nodes: int = NODES, panel: float = PANEL):
    """Time nodes and the global cumulative-integration matrix on ``[0, T]``."""
    p = max(1, int(math.ceil(T / panel - 1e-9)))
    edges = np.linspace(0.0, T, p + 1)
    local = [lobatto_nodes(edges[i], edges[i + 1], nodes) for i in range(p)]
    times = np.concatenate([local[0]] + [loc[1:] for loc in local[1:]])
    Q = np.zeros((times.size, times.size))
    offset = 0
    for loc in local:
        q = integration_matrix(loc)
        sl = slice(offset, offset + loc.size)
        Q[sl, :] = Q[offset, :]  # carry the integral up to the panel start
        Q[sl, sl] += q
        offset += loc.size - 1
    return times, Q


class _Batched(_Rhs):
    def pad(self, fh):
        out = np.zeros(fh.shape[:-1] + (self.m,), np.complex128)
        out[..., self.keep] = fh[..., self.dst]
        return np.fft.ifft(out, axis=-1) * (self.m / self.n)

    def trunc(self, g):
        gh = np.fft.fft(g, axis=-1) * (self.n / self.m)
        out = np.zeros(g.shape[:-1] + (self.n,), np.complex128)
        out[..., self.dst] = gh[..., self.keep]
        return out


def _sup_h(ah, grid, s):
    """sup over rows of the H^s norm of spectral rows ``ah``."""
    w = (1.0 + grid.frequencies ** 2) ** s
    return float(np.max(np.sqrt(grid.dx / grid.n_points * np.sum(w * np.abs(ah) ** 2, axis=-1))))


def picard_solve(u0: Field, v0: Field, T: float, params: SKdVParams, n_iter: int = 30,
                 s: float = 0.8, tol: float = 1e-14, nodes: int = NODES, panel: float = PANEL,
                 raise_on_divergence: bool = True, bundle: bool = True):
    """Iterate ``(w, z) -> (w0 + int N_u, z0 + int N_v)`` in the interaction picture.

    Returns ``(trajectory, factors)``; ``factors[k]`` is the ratio of successive
    iterate differences in ``sup_t (H^{s+1/2} x H^s)``.  The trajectory holds
    the last iterate at every quadrature node.
    """
    if not T > 0:
        raise ParameterError(f"T must be > 0, got {T}")
    if int(n_iter) != n_iter or n_iter < 1:
        raise ParameterError("n_iter must be a positive integer")
    grid = u0.grid
    times, Q = composite_nodes(T, nodes, panel)
    rhs = _Batched(grid, params)
    eu = np.exp(times[:, None] * rhs.lu[None, :])
    ev = np.exp(times[:, None] * rhs.lv[None, :])
    w0 = np.fft.fft(u0.values)
    z0 = np.fft.fft(v0.real_values)
    w = np.broadcast_to(w0, (times.size, grid.n_points)).copy()
    z = np.broadcast_to(z0, (times.size, grid.n_points)).copy()
    factors, prev = [], None
    rising = 0
    for it in range(int(n_iter)):
        nu, nv = rhs(eu * w, ev * z)
        w_new = w0[None, :] + Q @ (nu / eu)
        z_new = z0[None, :] + Q @ (nv / ev)
        diff = _sup_h(w_new - w, grid, s + 0.5) + _sup_h(z_new - z, grid, s)
        w, z = w_new, z_new
        if prev is not None:
            f = diff / prev if prev > 0 else 0.0
            factors.append(f)
            rising = rising + 1 if f > 1 else 0
            if rising >= DIVERGE_RUN:
                traj = _trajectory(grid, times, eu * w, ev * z, params)
                b = _bundle(traj, s) if bundle else None
                if raise_on_divergence:
                    raise ContractionFailure(
                        f"Picard differences grew {DIVERGE_RUN} times in a row at T = {T}", T, b, factors)
                return traj, factors
        scale = _sup_h(w, grid, s + 0.5) + _sup_h(z, grid, s)
        if diff <= tol * max(scale, 1e-300) or diff == 0:
            break
        prev = diff
    return _trajectory(grid, times, eu * w, ev * z, params), factors


def _bundle(traj, s):
    try:
        return bundle_from_fields(traj.u_field(), traj.v_field(), s, 0.0, 0.0)
    except (ParameterError, FloatingPointError):
        return None


def _trajectory(grid, times, uh, vh, params):
    u = np.fft.ifft(uh, axis=-1)
    v = np.fft.ifft(vh, axis=-1).real
    states = [SKdVState(Field(grid, u[i], "complex"), Field(grid, v[i], "real"), float(t))
              for i, t in enumerate(times)]
    lin_u = [evolve(states[0].u, t, SCHRODINGER) for t in times]
    lin_v = [evolve(states[0].v, t, AIRY) for t in times]
    log = [(mass(st.u), integral(st.v)) for st in states]
    return Trajectory(states, lin_u, lin_v, params, log)


def contraction_factor(u0: Field, v0: Field, T: float, params: SKdVParams, n_iter: int = 6,
                       s: float = 0.8, **kw) -> float:
    """Largest successive-difference ratio over the first ``n_iter`` Picard sweeps
    (``inf`` if the iteration diverges)."""
    try:
        _, factors = picard_solve(u0, v0, T, params, n_iter=n_iter, s=s, tol=0.0,
                                  bundle=False, **kw)
    except ContractionFailure:
        return math.inf
    return max(factors) if factors else 0.0
