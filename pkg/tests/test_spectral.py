import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import plane_wave
from skdv_lab.errors import InvalidGridError, ParameterError
from skdv_lab.spectral import (Field, Grid1D, NormSpec, SpaceTimeField, boundary_contamination,
                               derivative, fractional_derivative, bessel_potential, l2,
                               make_grid, mixed_norm, norm, sobolev_norm)


def test_grid_rejects_bad_sizes():
    for n in (0, -4, 7):
        with pytest.raises(InvalidGridError):
            make_grid(n, 10.0)
    with pytest.raises(InvalidGridError):
        make_grid(8, 0.0)
    with pytest.raises(InvalidGridError):
        make_grid(8, float("inf"))


def test_grid_layout():
    g = make_grid(8, 4.0)
    assert g.dx == 0.5
    assert g.x[0] == -2.0 and g.x[-1] == 1.5
    assert g.nyquist == pytest.approx(2 * np.pi)
    assert g.odd_frequencies[4] == 0.0
    assert g.frequencies[4] != 0.0


def test_real_tag_drops_imaginary_part(grid):
    f = Field(grid, np.exp(1j * grid.x), "real")
    assert np.all(f.values.imag == 0)
    with pytest.raises(ParameterError):
        Field(grid, np.zeros(3))
    with pytest.raises(ParameterError):
        Field(grid, np.zeros(grid.n_points), "quaternion")


def test_gaussian_spectrum_matches_closed_form(gaussian):
    # continuous transform of exp(-x^2) is sqrt(pi) exp(-xi^2 / 4)
    xi = gaussian.grid.frequencies
    np.testing.assert_allclose(gaussian.spectrum(), np.sqrt(np.pi) * np.exp(-xi ** 2 / 4), atol=1e-13)


def test_gaussian_norms_closed_form(gaussian):
    assert l2(gaussian) == pytest.approx(math.sqrt(math.sqrt(math.pi / 2)), rel=1e-13)
    assert sobolev_norm(gaussian, 0) == pytest.approx(l2(gaussian), rel=1e-13)
    assert sobolev_norm(gaussian, 1) == pytest.approx((2 * math.pi) ** 0.25, rel=1e-13)
    # ||D^1 f||^2 = ||f'||^2 = sqrt(pi/2)
    assert norm(gaussian, NormSpec.homogeneous(1)) == pytest.approx((math.pi / 2) ** 0.25, rel=1e-13)


def test_derivative_of_plane_wave(grid):
    f, k = plane_wave(grid, 5)
    np.testing.assert_allclose(derivative(f).values, 1j * k * f.values, atol=1e-12)
    np.testing.assert_allclose(fractional_derivative(f, 0.5).values, abs(k) ** 0.5 * f.values, atol=1e-12)
    np.testing.assert_allclose(bessel_potential(f, -2).values, f.values / (1 + k * k), atol=1e-13)


def test_odd_derivative_drops_nyquist():
    g = make_grid(16, 2 * np.pi)
    f = Field(g, np.cos(8 * g.x), "real")  # pure Nyquist mode
    assert np.max(np.abs(derivative(f).values)) == 0
    assert derivative(derivative(f)).max_abs() == 0
    assert np.max(np.abs(derivative(f, 2).values + 64 * f.values)) < 1e-10


def test_fractional_derivative_rejects_negative(gaussian):
    with pytest.raises(ParameterError):
        fractional_derivative(gaussian, -0.5)


def test_norm_spec_validation():
    with pytest.raises(ParameterError):
        NormSpec("bogus")
    with pytest.raises(ParameterError):
        NormSpec.sobolev(-1)
    with pytest.raises(ParameterError):
        NormSpec.mixed(0.5, 2)
    with pytest.raises(ParameterError):
        NormSpec.mixed(2, 2, order="sideways")


def test_mixed_norm_of_constant_in_time_field(grid, gaussian):
    times = np.linspace(0, 2, 9)
    F = SpaceTimeField.from_fields(times, [gaussian] * times.size)
    # L2_T of a constant-in-time function is sqrt(T) times its value
    assert mixed_norm(F, 2, 2) == pytest.approx(math.sqrt(2) * l2(gaussian), rel=1e-12)
    assert mixed_norm(F, 2, math.inf) == pytest.approx(l2(gaussian), rel=1e-12)
    assert mixed_norm(F, math.inf, 2, "t_then_x") == pytest.approx(math.sqrt(2), rel=1e-12)


def test_space_time_field_validation(grid, gaussian):
    with pytest.raises(ParameterError):
        SpaceTimeField.from_fields([0.0, 0.0], [gaussian, gaussian])
    with pytest.raises(ParameterError):
        SpaceTimeField.from_fields([], [])


def test_boundary_contamination(grid):
    assert boundary_contamination(Field.zeros(grid), 0.05) == 0.0
    f = Field(grid, np.ones(grid.n_points))
    assert boundary_contamination(f, 0.05) == 1.0
    with pytest.raises(ParameterError):
        boundary_contamination(f, 0.6)


coef = st.floats(-3, 3, allow_nan=False)


@given(st.lists(st.tuples(coef, coef, st.integers(-40, 40)), min_size=1, max_size=5))
def test_parseval(terms):
    g = make_grid(128, 10.0)
    vals = sum((a + 1j * b) * np.exp(2j * np.pi * m * g.x / g.length) for a, b, m in terms)
    f = Field(g, vals + 0 * g.x)
    assert sobolev_norm(f, 0) == pytest.approx(l2(f), rel=1e-12, abs=1e-12)


@given(st.floats(0, 3), st.floats(0, 3))
def test_fractional_derivatives_compose(s1, s2):
    g = make_grid(64, 10.0)
    f = Field(g, np.exp(-g.x ** 2) * (1 + 0.5j * g.x))
    a = fractional_derivative(fractional_derivative(f, s1), s2).values
    b = fractional_derivative(f, s1 + s2).values
    assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(b)))


@given(st.floats(-2, 2))
def test_sobolev_norm_monotone_in_order(s):
    g = make_grid(64, 10.0)
    f = Field(g, np.exp(-g.x ** 2))
    assert sobolev_norm(f, abs(s)) >= sobolev_norm(f, 0) * (1 - 1e-14)
