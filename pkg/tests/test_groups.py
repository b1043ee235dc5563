import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import airy

from conftest import plane_wave
from skdv_lab.airy import airy_ai, airy_ai_oscillatory
from skdv_lab.errors import DomainTooSmallError, ParameterError
from skdv_lab.groups import (AIRY, SCHRODINGER, airy_kernel_field, evolve, evolve_series,
                             kernel_evolve, symbol, weighted_remainder)
from skdv_lab.spectral import Field, l2, make_grid


@pytest.mark.parametrize("x", [-30.0, -10.0, -2.0, -0.5, 0.0, 0.7, 3.0, 11.9, 12.1, 25.0])
def test_airy_ai_matches_reference(x):
    ref = airy(x)[0]
    assert abs(airy_ai(x) - ref) <= 1e-12 * max(1.0, abs(ref)) + 1e-14


def test_airy_ai_at_zero_closed_form():
    assert airy_ai(0.0) == pytest.approx(1 / (3 ** (2 / 3) * math.gamma(2 / 3)), rel=1e-13)


def test_airy_oscillatory_cross_check():
    for x in (-3.0, 0.0, 1.5):
        assert airy_ai_oscillatory(x) == pytest.approx(airy(x)[0], abs=1e-7)


def test_plane_wave_symbols(grid):
    f, k = plane_wave(grid, 3)
    t = 0.37
    np.testing.assert_allclose(evolve(f, t, SCHRODINGER).values, np.exp(-1j * t * k * k) * f.values, atol=1e-13)
    np.testing.assert_allclose(evolve(f, t, AIRY).values, np.exp(1j * t * k ** 3) * f.values, atol=1e-13)


def test_unknown_kind_rejected(gaussian):
    with pytest.raises(ParameterError):
        evolve(gaussian, 1.0, "heat")


def test_airy_keeps_real_data_real(grid):
    f = Field(grid, np.exp(-grid.x ** 2) * grid.x, "real")
    v = evolve(f, 0.8, AIRY)
    assert v.tag == "real"
    assert evolve(f, 0.8, SCHRODINGER).tag == "complex"


@pytest.mark.parametrize("kind", [SCHRODINGER, AIRY])
def test_unitarity(kind):
    g = make_grid(2048, 100.0)
    f = Field(g, np.exp(-g.x ** 2) * (1 + 1j * np.sin(3 * g.x)))
    n0 = l2(f)
    for t in (0.1, 1.0, 7.5, -3.0):
        assert abs(l2(evolve(f, t, kind)) - n0) <= 1e-12 * n0


@pytest.mark.parametrize("kind", [SCHRODINGER, AIRY])
def test_evolve_series_matches_evolve(kind, gaussian):
    times = np.linspace(0, 1, 7)
    F = evolve_series(gaussian, times, kind, chunk=3)
    for t, row in zip(times, F.values):
        np.testing.assert_allclose(row, evolve(gaussian, t, kind).values, atol=1e-14)


def test_kernel_agrees_with_multiplier():
    # the box must hold the dispersive tail, or the periodic answer wraps
    g = make_grid(4096, 400.0)
    f = Field(g, np.exp(-g.x ** 2), "real")
    for t in (0.5, 1.0, -1.0):
        a = evolve(f, t, AIRY).values
        b = kernel_evolve(f, t).values
        assert np.max(np.abs(a - b)) <= 1e-5 * np.max(np.abs(a))


def test_kernel_is_delta_limit_rejected(grid):
    with pytest.raises(ParameterError):
        airy_kernel_field(grid, 0.0)


def test_kernel_integrates_to_one():
    g = make_grid(8192, 400.0)
    k = airy_kernel_field(g, 0.5)
    # int Ai = 1, slowly converging oscillatory tail on the left
    assert g.dx * np.sum(k.real_values) == pytest.approx(1.0, abs=2e-2)


@pytest.mark.parametrize("kind", [SCHRODINGER, AIRY])
def test_weighted_remainder_vanishes_at_zero_time(kind):
    g = make_grid(1024, 80.0)
    f = Field(g, np.exp(-g.x ** 2))
    r = weighted_remainder(f, 0.5, 0.0, kind)
    assert np.max(np.abs(r.field.values)) == 0


def test_weighted_remainder_validation():
    g = make_grid(256, 20.0)
    f = Field(g, np.exp(-g.x ** 2))
    with pytest.raises(ParameterError):
        weighted_remainder(f, 1.0, 1.0, AIRY)
    wide = Field(g, np.ones(g.n_points))
    with pytest.raises(DomainTooSmallError):
        weighted_remainder(wide, 0.5, 1.0, AIRY)


times = st.floats(-2, 2, allow_nan=False)


@given(times, times, st.sampled_from([SCHRODINGER, AIRY]))
def test_group_law(t1, t2, kind):
    g = make_grid(256, 40.0)
    f = Field(g, np.exp(-(g.x - 1) ** 2) * (1 + 0.3j * g.x))
    a = evolve(evolve(f, t1, kind), t2, kind).values
    b = evolve(f, t1 + t2, kind).values
    assert np.max(np.abs(a - b)) <= 1e-11


@given(times, st.sampled_from([SCHRODINGER, AIRY]))
def test_inverse(t, kind):
    g = make_grid(128, 20.0)
    f = Field(g, np.exp(-g.x ** 2))
    back = evolve(evolve(f, t, kind), -t, kind).values
    assert np.max(np.abs(back - f.values)) <= 1e-13


@given(st.floats(-5, 5))
def test_symbol_unimodular(t):
    g = make_grid(64, 10.0)
    for kind in (SCHRODINGER, AIRY):
        assert np.max(np.abs(np.abs(symbol(g, t, kind)) - 1)) < 1e-14
