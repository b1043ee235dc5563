"""Free Schrodinger and Airy groups, the Airy kernel, and weighted commutation remainders.

``S(t) = exp(it d_x^2)`` has symbol ``exp(-i t xi^2)`` and ``V(t) = exp(-t d_x^3)``
has symbol ``exp(i t xi^3)``.  The Airy symbol is odd in ``xi``; its unpaired
Nyquist mode is treated as ``xi = 0`` so that real data stay real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .airy import airy_ai
from .errors import DomainTooSmallError, ParameterError
from .spectral import Field, Grid1D, SpaceTimeField, apply_multiplier, boundary_contamination

SCHRODINGER = "schrodinger"
AIRY = "airy"
GROUP_KINDS = (SCHRODINGER, AIRY)

REMAINDER_CONTAMINATION_MAX = 1e-4


def _check_kind(kind):
    if kind not in GROUP_KINDS:
        raise ParameterError(f"unknown group kind {kind!r}")


def phase(grid: Grid1D, kind: str) -> np.ndarray:
    """Dispersion relation ``omega`` with ``symbol(t) = exp(i t omega)``."""
    _check_kind(kind)
    if kind == SCHRODINGER:
        return -grid.frequencies ** 2
    return grid.odd_frequencies ** 3


def symbol(grid: Grid1D, t: float, kind: str) -> np.ndarray:
    return np.exp(1j * t * phase(grid, kind))


def evolve(f: Field, t: float, kind: str) -> Field:
    _check_kind(kind)
    if t == 0:
        return f
    return apply_multiplier(f, symbol(f.grid, t, kind), hermitian=(kind == AIRY))


def evolve_series(f: Field, times, kind: str, pre_symbol=None, chunk: int = 256) -> SpaceTimeField:
    """All of ``evolve(f, t, kind)`` for ``t`` in ``times`` as one space-time field.

    ``pre_symbol`` is an extra time-independent multiplier (e.g. ``|xi|^s``).
    """
    _check_kind(kind)
    times = np.asarray(times, float)
    omega = phase(f.grid, kind)
    fh = np.fft.fft(f.values)
    if pre_symbol is not None:
        fh = fh * pre_symbol
    out = np.empty((times.size, f.grid.n_points), np.complex128)
    for start in range(0, times.size, chunk):
        tt = times[start:start + chunk]
        out[start:start + chunk] = np.fft.ifft(np.exp(1j * tt[:, None] * omega[None, :]) * fh[None, :], axis=1)
    tag = "real" if (f.is_real and kind == AIRY) else "complex"
    return SpaceTimeField(f.grid, times, out, tag)


# -- Airy kernel ------------------------------------------------------------

def airy_scale(t: float) -> float:
    """Signed length scale ``(3t)^(1/3)`` of the Airy fundamental solution."""
    return float(np.cbrt(3.0 * t))


def airy_kernel_values(x: np.ndarray, t: float) -> np.ndarray:
    if t == 0:
        raise ParameterError("the Airy kernel at t = 0 is a delta")
    c = airy_scale(t)
    return airy_ai(np.asarray(x, float) / c) / abs(c)


def airy_kernel_field(grid: Grid1D, t: float) -> Field:
    """Real-line fundamental solution ``Ai(x / (3t)^(1/3)) / |3t|^(1/3)`` sampled on the grid."""
    return Field(grid, airy_kernel_values(grid.x, t), "real")


def kernel_evolve(f: Field, t: float) -> Field:
    """``V(t) f`` by linear convolution with the real-line Airy kernel.

    The data are taken as zero outside the box and no periodic wrap is
    applied, so this is an independent route to ``evolve(f, t, AIRY)``.
    """
    if t == 0:
        raise ParameterError("the Airy kernel at t = 0 is a delta")
    n = f.grid.n_points
    dx = f.grid.dx
    m = np.arange(2 * n)
    diffs = np.where(m < n, m, m - 2 * n) * dx
    k = airy_kernel_values(diffs, t)
    pad = np.zeros(2 * n, np.complex128)
    pad[:n] = f.values
    conv = np.fft.ifft(np.fft.fft(k) * np.fft.fft(pad))[:n] * dx
    return Field(f.grid, conv, f.tag)


# -- weighted remainders ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class RemainderField:
    field: Field
    beta: float
    time: float
    kind: str


def abs_weight(grid: Grid1D, beta: float) -> np.ndarray:
    return np.abs(grid.x) ** beta


def weighted_remainder(f: Field, beta: float, t: float, kind: str,
                       contamination_max: float = REMAINDER_CONTAMINATION_MAX) -> RemainderField:
    """Commutator remainder of the group ``G`` with the weight ``|x|^b``:
    ``|x|^b G(t) f = G(t)(|x|^b f) + G(t) R``, i.e.
    ``R = G(-t)[|x|^b G(t) f] - |x|^b f``.
    """
    _check_kind(kind)
    if not 0 < beta < 1:
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")
    c = boundary_contamination(f, 0.05)
    if c >= contamination_max:
        raise DomainTooSmallError(
            f"data reach the box edge (contamination {c:.3e} >= {contamination_max:.1e})", c)
    w = abs_weight(f.grid, beta)
    weighted = Field(f.grid, w * evolve(f, t, kind).values, "complex")
    back = evolve(weighted, -t, kind)
    rem = Field(f.grid, back.values - w * f.values, "complex")
    if f.is_real and kind == AIRY:
        rem = Field(f.grid, rem.values, "real")
    return RemainderField(rem, beta, t, kind)
