"""Deterministic random data ensembles for the estimate trials.

Member ``i`` is drawn from its own generator seeded by ``(seed, i)``, so a
member never depends on how many others were drawn or by which worker.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainTooSmallError, ParameterError
from .spectral import Field, Grid1D, boundary_contamination, make_grid

VERSION = 1
CONTAMINATION_MAX = 1e-6
MARGIN = 0.05
COMPANION_STREAM = 1


class EnsembleKind(enum.Enum):
    GAUSSIAN_MIXTURE = "gaussian_mixture"
    CHIRPED = "chirped"
    BAND_LIMITED = "band_limited"
    EXPONENTIAL_BUMP = "exponential_bump"


def _gaussian_mixture(x, rng, L):
    out = np.zeros_like(x, dtype=np.complex128)
    for _ in range(rng.integers(1, 4)):
        amp = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
        c = rng.uniform(-L / 16, L / 16)
        w = rng.uniform(0.5, 3.0)
        k = rng.uniform(-2.0, 2.0)
        out += amp * np.exp(-((x - c) / w) ** 2 + 1j * k * x)
    return out


def _chirped(x, rng, L):
    n = rng.integers(0, 3)
    c = rng.uniform(-L / 16, L / 16)
    w = rng.uniform(1.0, 3.0)
    rate = rng.uniform(-1.0, 1.0)
    y = (x - c) / w
    return y ** n * np.exp(-y ** 2 - 1j * rate * (x - c) ** 2)


def _band_limited(x, rng, L):
    width = rng.uniform(2.0, 6.0)
    modes = rng.uniform(-4.0, 4.0, size=4)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    carrier = np.exp(1j * np.outer(x, modes)) @ amps
    return np.exp(-(x / width) ** 2) * carrier


def _exponential_bump(x, rng, L):
    out = np.zeros_like(x, dtype=np.complex128)
    for _ in range(rng.integers(1, 4)):
        amp = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
        c = rng.uniform(-L / 16, L / 16)
        b = rng.uniform(0.5, 2.0)
        out += amp * np.exp(-b * np.abs(x - c))
    return out


_DRAW = {
    EnsembleKind.GAUSSIAN_MIXTURE: _gaussian_mixture,
    EnsembleKind.CHIRPED: _chirped,
    EnsembleKind.BAND_LIMITED: _band_limited,
    EnsembleKind.EXPONENTIAL_BUMP: _exponential_bump,
}


@dataclass(frozen=True)
class Ensemble:
    kind: EnsembleKind = EnsembleKind.GAUSSIAN_MIXTURE
    size: int = 50
    seed: int = 0
    grid: Grid1D = make_grid(2048, 200.0)
    horizon: float = 1.0
    version: int = VERSION

    def __post_init__(self):
        if not isinstance(self.kind, EnsembleKind):
            object.__setattr__(self, "kind", EnsembleKind(self.kind))
        if int(self.size) != self.size or self.size < 1:
            raise ParameterError(f"ensemble size must be a positive integer, got {self.size}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ParameterError(f"ensemble seed must be a non-negative integer, got {self.seed}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ParameterError(f"horizon must be > 0, got {self.horizon}")

    @property
    def label(self) -> str:
        """Version tag used as the key of recorded constants."""
        g = self.grid
        return (f"{self.kind.value}-v{self.version}-s{self.seed}-n{self.size}"
                f"-N{g.n_points}-L{g.length:g}-T{self.horizon:g}")

    def member_seed(self, index: int) -> int:
        return int(np.random.SeedSequence([self.seed, index]).generate_state(1)[0])

    def _draw(self, index: int, stream: int) -> Field:
        if not 0 <= index < self.size:
            raise IndexError(f"member {index} outside ensemble of size {self.size}")
        rng = np.random.default_rng([self.seed, index, stream])
        values = _DRAW[self.kind](self.grid.x, rng, self.grid.length)
        f = Field(self.grid, values, "complex")
        c = boundary_contamination(f, MARGIN)
        if c >= CONTAMINATION_MAX:
            raise DomainTooSmallError(
                f"{self.kind.value} member {index} reaches the box edge (contamination {c:.2e})", c)
        return f

    def member(self, index: int) -> Field:
        return self._draw(index, 0)

    def companion(self, index: int) -> Field:
        """Independent second field for bilinear entries."""
        return self._draw(index, COMPANION_STREAM)

    def members(self):
        return [self.member(i) for i in range(self.size)]
