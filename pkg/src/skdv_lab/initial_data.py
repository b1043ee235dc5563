"""Explicit blow-up data: the chirped algebraic Schrodinger datum and the
Gaussian-weighted sum of backward Airy evolutions of ``exp(-2|x|)``.

``data_alpha`` here is the data parameter, never the S-KdV coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainTooSmallError, ParameterError, TruncationError
from .groups import AIRY, evolve
from .spectral import Field, Grid1D, boundary_contamination

TAIL_TOL = 1e-14
PHI_L2 = math.sqrt(0.5)
SCHRODINGER_CONTAMINATION_MAX = 1e-4
KDV_CONTAMINATION_MAX = 5e-2
MARGIN = 0.05


@dataclass(frozen=True)
class SchrodingerDatumParams:
    alpha: float = 1.0
    x0: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"chirp rate alpha must be > 0, got {self.alpha}")

    @property
    def focus(self):
        """Predicted linear focus ``(x*, t*)``."""
        return self.x0, 1.0 / (4.0 * self.alpha)


@dataclass(frozen=True)
class KdvDatumParams:
    alpha: float = 1.0
    c: float = 0.1
    j_max: Optional[int] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}")
        if not self.c > 0:
            raise ParameterError(f"amplitude c must be > 0, got {self.c}")
        if self.j_max is not None and (int(self.j_max) != self.j_max or self.j_max < 1):
            raise ParameterError(f"j_max must be a positive integer, got {self.j_max}")

    def weight(self, j):
        return self.c * np.exp(-self.alpha ** 2 * np.asarray(j, float) ** 2)

    def tail(self, j_max: int) -> float:
        """Bound on ``sum_{j > j_max} lambda_j ||phi||_2``."""
        j = np.arange(j_max + 1, j_max + 200)
        return float(np.sum(self.weight(j)) * PHI_L2)

    def required_j_max(self, tol: float = TAIL_TOL) -> int:
        j = 1
        while self.tail(j) >= tol:
            j += 1
        return j

    def resolved_j_max(self, tol: float = TAIL_TOL) -> int:
        return self.required_j_max(tol) if self.j_max is None else int(self.j_max)

    def focus_times(self, count: int = 3):
        return [self.alpha * k for k in range(1, count + 1)]

    @classmethod
    def matched_to(cls, schrodinger: SchrodingerDatumParams, c: float = 0.1) -> "KdvDatumParams":
        """KdV data whose first linear focus coincides with the Schrodinger one."""
        return cls(alpha=schrodinger.focus[1], c=c)


def schrodinger_datum(params: SchrodingerDatumParams, grid: Grid1D,
                      contamination_max: float = SCHRODINGER_CONTAMINATION_MAX) -> Field:
    x = grid.x
    amp = (1.0 + x ** 2) ** -1.25
    u0 = Field(grid, np.exp(-1j * params.alpha * (x - params.x0) ** 2) * amp, "complex")
    c = boundary_contamination(u0, MARGIN)
    if c >= contamination_max:
        raise DomainTooSmallError(
            f"Schrodinger datum reaches the box edge: contamination {c:.3e} >= {contamination_max:.1e}", c)
    return u0


def phi(grid: Grid1D) -> Field:
    return Field(grid, np.exp(-2.0 * np.abs(grid.x)), "real")


def kdv_terms(params: KdvDatumParams, grid: Grid1D):
    """``[(lambda_j, V(-alpha j) phi) for j = 1..j_max]``."""
    base = phi(grid)
    return [(float(params.weight(j)), evolve(base, -params.alpha * j, AIRY))
            for j in range(1, params.resolved_j_max() + 1)]


def _edge_ratio(terms, grid: Grid1D, total: np.ndarray) -> float:
    edge = np.abs(grid.x) >= (1.0 - MARGIN) * 0.5 * grid.length
    worst = max(lam * np.max(np.abs(term.real_values[edge])) for lam, term in terms)
    return float(worst / np.max(np.abs(total)))


def kdv_datum(params: KdvDatumParams, grid: Grid1D,
              contamination_max: float = KDV_CONTAMINATION_MAX) -> Field:
    j_max = params.resolved_j_max()
    if params.tail(j_max) >= TAIL_TOL:
        raise TruncationError(
            f"series tail {params.tail(j_max):.2e} >= {TAIL_TOL:.0e}; need j_max >= {params.required_j_max()}",
            params.required_j_max())
    terms = kdv_terms(params, grid)
    total = sum(lam * term.real_values for lam, term in terms)
    worst = _edge_ratio(terms, grid, total)
    if worst >= contamination_max:
        raise DomainTooSmallError(
            f"a backward Airy term reaches the box edge: contamination {worst:.3e} >= {contamination_max:.1e}",
            worst)
    return Field(grid, total, "real")


def kdv_contamination(params: KdvDatumParams, grid: Grid1D) -> float:
    """Largest edge amplitude of any weighted term relative to max|v0|."""
    terms = kdv_terms(params, grid)
    return _edge_ratio(terms, grid, sum(lam * t.real_values for lam, t in terms))


def desk_data(grid: Grid1D, schrodinger: SchrodingerDatumParams = SchrodingerDatumParams(),
              c: float = 0.1, kdv_alpha: Optional[float] = None,
              contamination_max: Optional[float] = None):
    """Both data with matched focus times (``kdv_alpha`` defaults to ``t*``)."""
    kp = KdvDatumParams(alpha=schrodinger.focus[1] if kdv_alpha is None else kdv_alpha, c=c)
    kw = {} if contamination_max is None else {"contamination_max": contamination_max}
    return schrodinger_datum(schrodinger, grid, **kw), kdv_datum(kp, grid, **kw), kp
