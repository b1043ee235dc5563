"""Periodic grid, Fourier-multiplier calculus and the norms used everywhere else.

The real line is replaced by the periodic box ``[-L/2, L/2)``.  The continuous
transform convention is ``f^(xi) = int f(x) exp(-i x xi) dx`` with inverse
``(1/2pi) int f^(xi) exp(i x xi) dxi``; on the grid this becomes
``f^_k = dx * sum_j f_j exp(-i xi_k x_j)`` and the frequency measure ``dxi``
becomes ``2 pi / L``, so discrete norms approximate the continuous ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidGridError, NaNError, ParameterError

REAL_TOL = 1e-10


@dataclass(frozen=True)
class Grid1D:
    n_points: int
    length: float

    def __post_init__(self):
        if not isinstance(self.n_points, (int, np.integer)) or self.n_points <= 0 \
                or self.n_points % 2:
            raise InvalidGridError(f"n_points must be a positive even integer, got {self.n_points!r}")
        if not self.length > 0 or not math.isfinite(self.length):
            raise InvalidGridError(f"length must be positive, got {self.length!r}")

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        x = -0.5 * self.length + self.dx * np.arange(self.n_points)
        x.flags.writeable = False
        return x

    @cached_property
    def frequencies(self) -> np.ndarray:
        xi = (2 * np.pi / self.length) * np.fft.fftfreq(self.n_points, 1.0 / self.n_points)
        xi.flags.writeable = False
        return xi

    @cached_property
    def odd_frequencies(self) -> np.ndarray:
        """Frequencies with the unpaired Nyquist mode zeroed, for odd symbols."""
        xi = np.array(self.frequencies)
        xi[self.n_points // 2] = 0.0
        xi.flags.writeable = False
        return xi

    @property
    def nyquist(self) -> float:
        return np.pi / self.dx

    @cached_property
    def _shift_phase(self) -> np.ndarray:
        # fft indexes from x_0 = -L/2, the continuous transform from x = 0
        return np.exp(0.5j * self.length * self.frequencies)

    def refine(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.n_points * factor, self.length)


def make_grid(n_points: int, length: float) -> Grid1D:
    return Grid1D(n_points, float(length))


def _check_tag(tag):
    if tag not in ("real", "complex"):
        raise ParameterError(f"unknown field tag {tag!r}")


@dataclass(frozen=True, eq=False)
class Field:
    """Function sampled on a grid; values are always stored as complex128."""

    grid: Grid1D
    values: np.ndarray
    tag: str = "complex"

    def __post_init__(self):
        _check_tag(self.tag)
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n_points,):
            raise ParameterError(
                f"values has shape {values.shape}, expected ({self.grid.n_points},)")
        if self.tag == "real":
            values = values.real.astype(np.complex128)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray],
                      tag: str = "complex") -> "Field":
        return cls(grid, fn(grid.x), tag)

    @classmethod
    def zeros(cls, grid: Grid1D, tag: str = "complex") -> "Field":
        return cls(grid, np.zeros(grid.n_points), tag)

    @property
    def is_real(self) -> bool:
        return self.tag == "real"

    @property
    def real_values(self) -> np.ndarray:
        return self.values.real

    def spectrum(self) -> np.ndarray:
        """Continuous-normalised transform sampled at ``grid.frequencies``."""
        return self.grid.dx * self.grid._shift_phase * np.fft.fft(self.values)

    @classmethod
    def from_spectrum(cls, grid: Grid1D, spec: np.ndarray, tag: str = "complex") -> "Field":
        values = np.fft.ifft(spec / grid._shift_phase) / grid.dx
        if tag == "real":
            _require_real(values, "from_spectrum")
        return cls(grid, values, tag)

    def with_values(self, values, tag=None) -> "Field":
        return Field(self.grid, values, self.tag if tag is None else tag)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __add__(self, other):
        if isinstance(other, Field):
            _same_grid(self, other)
            tag = "real" if self.is_real and other.is_real else "complex"
            return Field(self.grid, self.values + other.values, tag)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Field):
            _same_grid(self, other)
            tag = "real" if self.is_real and other.is_real else "complex"
            return Field(self.grid, self.values - other.values, tag)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Field):
            _same_grid(self, other)
            tag = "real" if self.is_real and other.is_real else "complex"
            return Field(self.grid, self.values * other.values, tag)
        if np.isscalar(other):
            tag = "real" if self.is_real and np.isrealobj(other) else "complex"
            return Field(self.grid, self.values * other, tag)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self.values, self.tag)


def _same_grid(a: Field, b: Field):
    if a.grid != b.grid:
        raise ParameterError("fields live on different grids")


def _require_real(values: np.ndarray, where: str):
    scale = np.max(np.abs(values.real))
    imag = np.max(np.abs(values.imag))
    if imag > REAL_TOL * scale and imag > 1e-300:
        raise ParameterError(f"{where}: result is not real (max|Im|={imag:.3e}, max|Re|={scale:.3e})")


def _check_finite(f: Field, where: str):
    if np.isnan(f.values).any():
        raise NaNError(f"{where}: NaN in input field")


def apply_multiplier(f: Field, symbol: np.ndarray, hermitian: bool = True) -> Field:
    """Return the field whose spectrum is ``symbol * f^``.

    ``hermitian`` declares ``symbol(-xi) == conj(symbol(xi))``; only then does a
    real-tagged input stay real-tagged.
    """
    values = np.fft.ifft(symbol * np.fft.fft(f.values))
    if f.is_real and hermitian:
        _require_real(values, "apply_multiplier")
        return Field(f.grid, values, "real")
    return Field(f.grid, values, "complex")


def fractional_derivative(f: Field, s: float) -> Field:
    """Homogeneous derivative ``D^s``: spectrum times ``|xi|^s``."""
    if s < 0:
        raise ParameterError(f"fractional_derivative needs s >= 0, got {s}")
    _check_finite(f, "fractional_derivative")
    if s == 0:
        return f
    return apply_multiplier(f, np.abs(f.grid.frequencies) ** s)


def bessel_potential(f: Field, s: float) -> Field:
    """``J^s``: spectrum times ``(1 + xi^2)^(s/2)``; any real ``s``."""
    _check_finite(f, "bessel_potential")
    return apply_multiplier(f, (1.0 + f.grid.frequencies ** 2) ** (0.5 * s))


def derivative(f: Field, order: int = 1) -> Field:
    """Spectral ``d^n/dx^n``; odd orders drop the Nyquist mode."""
    _check_finite(f, "derivative")
    xi = f.grid.odd_frequencies if order % 2 else f.grid.frequencies
    return apply_multiplier(f, (1j * xi) ** order)


# -- norms -----------------------------------------------------------------

@dataclass(frozen=True)
class NormSpec:
    kind: str
    s: float = 0.0
    r: float = 0.0
    p: float = 2.0
    q: float = 2.0
    order: str = "x_then_t"

    def __post_init__(self):
        if self.kind not in ("sobolev", "homogeneous", "weighted_bracket", "weighted_abs", "mixed"):
            raise ParameterError(f"unknown norm kind {self.kind!r}")
        if self.kind in ("sobolev", "homogeneous") and self.s < 0:
            raise ParameterError("Sobolev order must be >= 0")
        if self.kind.startswith("weighted") and self.r < 0:
            raise ParameterError("weight exponent must be >= 0")
        if self.kind == "mixed":
            _check_exponent(self.p, "p")
            _check_exponent(self.q, "q")
            if self.order not in ("x_then_t", "t_then_x"):
                raise ParameterError(f"unknown order {self.order!r}")

    @classmethod
    def sobolev(cls, s):
        return cls("sobolev", s=s)

    @classmethod
    def homogeneous(cls, s):
        return cls("homogeneous", s=s)

    @classmethod
    def weighted_bracket(cls, r):
        return cls("weighted_bracket", r=r)

    @classmethod
    def weighted_abs(cls, r):
        return cls("weighted_abs", r=r)

    @classmethod
    def mixed(cls, p, q, order="x_then_t"):
        return cls("mixed", p=p, q=q, order=order)


def _check_exponent(p, name):
    if not (1 <= p <= math.inf):
        raise ParameterError(f"exponent {name}={p} outside [1, inf]")


def spectral_sum(f: Field, weight: np.ndarray) -> float:
    """``sqrt((1/2pi) int weight |f^|^2 dxi)`` on the discrete frequency set."""
    fh = np.fft.fft(f.values)
    # (1/L) sum |dx fft|^2 w = dx/N sum |fft|^2 w
    return float(np.sqrt(f.grid.dx / f.grid.n_points * np.sum(weight * np.abs(fh) ** 2)))


def lp_norm(values: np.ndarray, p: float, dx: float, axis=-1):
    a = np.abs(values)
    if p == math.inf:
        return np.max(a, axis=axis)
    return (dx * np.sum(a ** p, axis=axis)) ** (1.0 / p)


def norm(f, spec: NormSpec) -> float:
    if spec.kind == "mixed":
        if not isinstance(f, SpaceTimeField):
            raise ParameterError("mixed norms need a SpaceTimeField")
        return mixed_norm(f, spec.p, spec.q, spec.order)
    if np.isnan(f.values).any():
        return float("nan")
    xi = f.grid.frequencies
    if spec.kind == "sobolev":
        return spectral_sum(f, (1.0 + xi ** 2) ** spec.s)
    if spec.kind == "homogeneous":
        return spectral_sum(f, np.abs(xi) ** (2 * spec.s))
    x = f.grid.x
    if spec.kind == "weighted_bracket":
        w = (1.0 + x ** 2) ** spec.r
    else:
        w = np.abs(x) ** (2 * spec.r)
    return float(np.sqrt(f.grid.dx * np.sum(w * np.abs(f.values) ** 2)))


def l2(f: Field) -> float:
    return float(lp_norm(f.values, 2, f.grid.dx))


def sobolev_norm(f: Field, s: float) -> float:
    return norm(f, NormSpec.sobolev(s))


# -- space-time fields -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpaceTimeField:
    """Snapshots of one field on a common grid; ``values[i]`` is the slice at ``times[i]``."""

    grid: Grid1D
    times: np.ndarray
    values: np.ndarray
    tag: str = "complex"

    def __post_init__(self):
        _check_tag(self.tag)
        times = np.asarray(self.times, dtype=float).reshape(-1)
        if times.size == 0:
            raise ParameterError("SpaceTimeField needs at least one time")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ParameterError("times must be strictly increasing")
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (times.size, self.grid.n_points):
            raise ParameterError(
                f"values shape {values.shape} != ({times.size}, {self.grid.n_points})")
        if self.tag == "real":
            values = values.real.astype(np.complex128)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_fields(cls, times: Sequence[float], fields: Sequence[Field]) -> "SpaceTimeField":
        if not fields:
            raise ParameterError("no slices")
        grid = fields[0].grid
        for f in fields:
            _same_grid(fields[0], f)
        tag = "real" if all(f.is_real for f in fields) else "complex"
        return cls(grid, np.asarray(times, float), np.stack([f.values for f in fields]), tag)

    @property
    def horizon(self) -> float:
        return float(self.times[-1] - self.times[0])

    def slice(self, i: int) -> Field:
        return Field(self.grid, self.values[i], self.tag)

    def slices(self):
        return [self.slice(i) for i in range(self.times.size)]

    def map_spectral(self, symbol: np.ndarray, hermitian: bool = True) -> "SpaceTimeField":
        """Apply one Fourier multiplier to every slice."""
        out = np.fft.ifft(symbol[None, :] * np.fft.fft(self.values, axis=1), axis=1)
        tag = "real" if (self.tag == "real" and hermitian) else "complex"
        return SpaceTimeField(self.grid, self.times, out, tag)


def time_norm(values: np.ndarray, times: np.ndarray, q: float) -> np.ndarray:
    """``L^q`` over the stored times (trapezoid rule), applied along axis 0."""
    a = np.abs(values)
    if q == math.inf:
        return np.max(a, axis=0)
    if times.size == 1:
        return np.zeros(a.shape[1:])
    return np.trapezoid(a ** q, times, axis=0) ** (1.0 / q)


def mixed_norm(F: SpaceTimeField, p: float, q: float, order: str = "x_then_t") -> float:
    """``x_then_t`` is ``|| ||F||_{L^q_T} ||_{L^p_x}``; ``t_then_x`` is ``|| ||F||_{L^p_x} ||_{L^q_T}``."""
    _check_exponent(p, "p")
    _check_exponent(q, "q")
    if order == "x_then_t":
        inner = time_norm(F.values, F.times, q)
        return float(lp_norm(inner, p, F.grid.dx))
    if order == "t_then_x":
        inner = lp_norm(F.values, p, F.grid.dx, axis=1)
        return float(time_norm(inner[:, None], F.times, q)[0])
    raise ParameterError(f"unknown order {order!r}")


def boundary_contamination(f: Field, margin_fraction: float) -> float:
    """max|f| over the outer ``margin_fraction`` of the box divided by max|f|."""
    if not 0 < margin_fraction < 0.5:
        raise ParameterError("margin_fraction must lie in (0, 0.5)")
    a = np.abs(f.values)
    top = a.max()
    if top == 0:
        return 0.0
    edge = np.abs(f.grid.x) >= (1.0 - margin_fraction) * 0.5 * f.grid.length
    return float(a[edge].max() / top)
