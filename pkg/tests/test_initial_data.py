import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from skdv_lab.errors import DomainTooSmallError, ParameterError, TruncationError
from skdv_lab.groups import AIRY, evolve
from skdv_lab.initial_data import (PHI_L2, KdvDatumParams, SchrodingerDatumParams, desk_data,
                                   kdv_contamination, kdv_datum, kdv_terms, phi, schrodinger_datum)
from skdv_lab.spectral import l2, make_grid


def test_schrodinger_focus():
    assert SchrodingerDatumParams(alpha=1.0).focus == (0.0, 0.25)
    assert SchrodingerDatumParams(alpha=2.0, x0=3.0).focus == (3.0, 0.125)
    with pytest.raises(ParameterError):
        SchrodingerDatumParams(alpha=0.0)


def test_schrodinger_datum_profile():
    g = make_grid(4096, 200.0)
    u0 = schrodinger_datum(SchrodingerDatumParams(), g)
    np.testing.assert_allclose(np.abs(u0.values), (1 + g.x ** 2) ** -1.25, rtol=1e-14)
    # |u0|^2 integrates to 4/3 on the line; the box misses a tail of order L^-4
    assert l2(u0) ** 2 == pytest.approx(4 / 3, rel=1e-6)


def test_schrodinger_datum_needs_room():
    with pytest.raises(DomainTooSmallError) as err:
        schrodinger_datum(SchrodingerDatumParams(), make_grid(1024, 20.0))
    assert err.value.contamination > 1e-4


def test_phi_norm():
    g = make_grid(8192, 100.0)
    # the kink at 0 limits the rectangle rule to O(dx)
    assert l2(phi(g)) == pytest.approx(PHI_L2, rel=2e-4)


def test_kdv_params_validation():
    with pytest.raises(ParameterError):
        KdvDatumParams(alpha=-1)
    with pytest.raises(ParameterError):
        KdvDatumParams(c=0)
    with pytest.raises(ParameterError):
        KdvDatumParams(j_max=0)


def test_required_j_max_is_minimal():
    p = KdvDatumParams(alpha=1.0)
    j = p.required_j_max()
    assert p.tail(j) < 1e-14 <= p.tail(j - 1)
    # alpha = 1: the tail after j is about c e^{-(j+1)^2}/sqrt(2)
    assert j == 5


def test_truncation_error_reports_required():
    g = make_grid(4096, 400.0)
    with pytest.raises(TruncationError) as err:
        kdv_datum(KdvDatumParams(alpha=1.0, j_max=2), g)
    assert err.value.required_j_max == 5


def test_kdv_terms_are_backward_evolutions():
    g = make_grid(4096, 400.0)
    p = KdvDatumParams(alpha=1.0)
    terms = kdv_terms(p, g)
    assert len(terms) == p.required_j_max()
    lam, t2 = terms[1]
    assert lam == pytest.approx(0.1 * math.exp(-4))
    # evolving the j-th term forward by alpha j restores phi
    np.testing.assert_allclose(evolve(t2, 2.0, AIRY).real_values, phi(g).real_values, atol=1e-12)


def test_kdv_datum_contamination_grows_when_box_shrinks():
    p = KdvDatumParams(alpha=1.0)
    big = kdv_contamination(p, make_grid(8192, 400.0))
    small = kdv_contamination(p, make_grid(4096, 200.0))
    assert big < small
    with pytest.raises(DomainTooSmallError):
        kdv_datum(p, make_grid(1024, 50.0))


def test_desk_data_matches_focus_times():
    g = make_grid(4096, 200.0)
    u0, v0, kp = desk_data(g)
    assert kp.alpha == 0.25
    assert v0.tag == "real" and u0.tag == "complex"
    assert KdvDatumParams.matched_to(SchrodingerDatumParams(alpha=0.5)).alpha == 0.5


@given(st.floats(0.3, 3.0), st.floats(0.01, 1.0))
def test_tail_bound_decreasing(alpha, c):
    p = KdvDatumParams(alpha=alpha, c=c)
    tails = [p.tail(j) for j in range(1, 6)]
    assert all(a >= b for a, b in zip(tails, tails[1:]))
    assert p.tail(p.required_j_max()) < 1e-14
