import numpy as np
import pytest
from hypothesis import settings

from skdv_lab.spectral import Field, make_grid

settings.register_profile("lab", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("lab")


@pytest.fixture
def grid():
    return make_grid(512, 40.0)


@pytest.fixture
def gaussian(grid):
    return Field(grid, np.exp(-grid.x ** 2), "complex")


def plane_wave(grid, m, tag="complex"):
    """``exp(i k x)`` with ``k = 2 pi m / L`` (cosine for the real tag)."""
    k = 2 * np.pi * m / grid.length
    if tag == "real":
        return Field(grid, np.cos(k * grid.x), "real"), k
    return Field(grid, np.exp(1j * k * grid.x), "complex"), k


def power_law(grid, s, phase_seed=None):
    """Field whose spectrum is ``|xi|^-(s + 1/2)`` above ``|xi| = 1``: Sobolev index ``s``."""
    xi = np.abs(grid.frequencies)
    amp = np.ones_like(xi)
    hi = xi >= 1
    amp[hi] = xi[hi] ** -(s + 0.5)
    if phase_seed is not None:
        amp = amp * np.exp(2j * np.pi * np.random.default_rng(phase_seed).random(xi.size))
    return Field.from_spectrum(grid, amp.astype(complex))
