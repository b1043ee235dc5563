import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from skdv_lab.ensembles import Ensemble, EnsembleKind
from skdv_lab.errors import DomainTooSmallError, ParameterError, TrialError
from skdv_lab.estimates import EstimateId, EstimateParams, EstimateReport
from skdv_lab.spectral import Field, make_grid
from skdv_lab.trials import (CONSTANTS_PATH, ConstantCheck, check_against_store, contraction_probe,
                             default_campaign, format_constant, growth_probe, load_constants,
                             probe_data, run_trials, save_constants, worker_count, worst_report)

SMALL = make_grid(512, 200.0)


def small(kind=EnsembleKind.GAUSSIAN_MIXTURE, size=6, seed=0):
    return Ensemble(kind, size, seed, grid=SMALL, horizon=0.5)


@pytest.mark.parametrize("kind", list(EnsembleKind))
def test_ensemble_is_deterministic(kind):
    a, b = small(kind), small(kind)
    for i in range(a.size):
        assert np.array_equal(a.member(i).values, b.member(i).values)
    assert not np.array_equal(a.member(0).values, a.member(1).values)
    assert not np.array_equal(a.member(0).values, a.companion(0).values)
    assert not np.array_equal(a.member(0).values, small(kind, seed=1).member(0).values)


def test_ensemble_label_and_validation():
    e = Ensemble(EnsembleKind.CHIRPED, 50, 3)
    assert e.label == "chirped-v1-s3-n50-N2048-L200-T1"
    assert Ensemble("band_limited").kind is EnsembleKind.BAND_LIMITED
    with pytest.raises(ParameterError):
        Ensemble(size=0)
    with pytest.raises(ParameterError):
        Ensemble(seed=-1)
    with pytest.raises(IndexError):
        small().member(6)


def test_ensemble_rejects_small_box():
    e = Ensemble(size=2, grid=make_grid(256, 4.0))
    with pytest.raises(DomainTooSmallError):
        e.member(0)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("SKDV_THREADS", "2")
    assert worker_count(8) == 2
    assert worker_count(1) == 1
    monkeypatch.setenv("SKDV_THREADS", "zero")
    with pytest.raises(ParameterError):
        worker_count()
    monkeypatch.setenv("SKDV_THREADS", "0")
    with pytest.raises(ParameterError):
        worker_count()


@pytest.mark.parametrize("eid", [EstimateId.KATO_SCH, EstimateId.COMMUTATOR_LP])
def test_trials_independent_of_worker_count(eid, monkeypatch):
    e = small()
    monkeypatch.setenv("SKDV_THREADS", "1")
    w1, r1 = run_trials(eid, e, workers=4)
    monkeypatch.setenv("SKDV_THREADS", "2")
    w2, r2 = run_trials(eid, e, workers=4)
    assert [r.ratio for r in r1] == [r.ratio for r in r2]
    assert [r.trial_seed for r in r1] == [e.member_seed(i) for i in range(e.size)]
    assert w1.ratio == w2.ratio == max(r.ratio for r in r1)
    assert all(r.params["horizon"] == 0.5 for r in r1)


def test_trial_error_carries_index(monkeypatch):
    monkeypatch.setenv("SKDV_THREADS", "1")
    g = SMALL
    good = Field(g, np.exp(-g.x ** 2))
    other = Field(make_grid(256, 200.0), np.zeros(256))
    with pytest.raises(TrialError) as err:
        run_trials(EstimateId.COMMUTATOR_LP, small(), members=[good, (good, good), (good, other)])
    assert err.value.member_index == 2
    assert "member 2" in str(err.value)
    with pytest.raises(TrialError) as err:
        run_trials(EstimateId.KATO_SCH, Ensemble(size=3, grid=make_grid(256, 4.0)))
    assert err.value.member_index == 0


def test_worst_report_skips_zero_members():
    g = SMALL
    members = [Field.zeros(g), Field(g, np.exp(-g.x ** 2)), Field(g, np.exp(-4 * g.x ** 2))]
    worst, reports = run_trials(EstimateId.KATO_SCH, small(), members=members, workers=1)
    assert reports[0].skipped
    assert worst.ratio == max(reports[1].ratio, reports[2].ratio)
    assert worst_report(reports[:1]).skipped


def _report(ratio, skipped=False):
    return EstimateReport(EstimateId.KATO_KDV, ratio, 1.0, ratio, skipped=skipped)


def test_constant_check_drift_budget():
    assert ConstantCheck("K", "v", _report(1.019), 1.0).passed
    assert not ConstantCheck("K", "v", _report(1.021), 1.0).passed
    assert not ConstantCheck("K", "v", _report(0.5), None).passed
    assert ConstantCheck("K", "v", _report(math.nan, True), 1.0).passed
    assert "missing" in ConstantCheck("K", "v", _report(0.5), None).line()


def test_store_round_trip(tmp_path):
    table = {("KATO_KDV", "a-v1"): 0.123456789012345, ("B", "x"): 3.0, ("C", "y"): math.inf}
    path = tmp_path / "c.txt"
    save_constants(table, path)
    back = load_constants(path)
    assert back[("B", "x")] == 3.0 and back[("C", "y")] == math.inf
    assert back[("KATO_KDV", "a-v1")] == pytest.approx(0.123456789012345, rel=1e-11)
    assert format_constant(1.0) == "1.00000000000"
    assert path.read_text().splitlines()[0].startswith("B x")
    save_constants(back, path)
    assert load_constants(path) == back


def test_store_rejects_malformed_lines(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# comment\n\nKATO_KDV only-two\n")
    with pytest.raises(ParameterError, match=":3:"):
        load_constants(path)
    assert load_constants(tmp_path / "absent.txt") == {}


def test_shipped_store_covers_default_campaign():
    table = load_constants(CONSTANTS_PATH)
    for eid, ens in default_campaign():
        worst = _report(0.0)
        check = check_against_store(eid, ens, worst, table=table)
        assert check.recorded is not None and math.isfinite(check.recorded), check.key


def test_contraction_probe_zero_scale():
    table = contraction_probe(0.0, T_grid=(0.1, 0.2))
    assert table.rows == ((0.1, 0.0), (0.2, 0.0))
    assert table.admissible_T == 0.2
    with pytest.raises(ParameterError):
        contraction_probe(-1.0)


def test_contraction_probe_small_grid():
    u0, v0 = probe_data(1024, 200.0)
    a = contraction_probe(0.125, T_grid=(0.1, 0.05), data=(u0, v0))
    assert [t for t, _ in a.rows] == [0.05, 0.1]
    assert all(0 < f < 0.5 for _, f in a.rows)


def test_admissible_time_stops_at_first_failure():
    from skdv_lab.trials import ContractionTable
    t = ContractionTable(1.0, 0.8, ((0.1, 0.2), (0.2, 0.6), (0.4, 0.1)))
    assert t.admissible_T == 0.1
    assert ContractionTable(1.0, 0.8, ((0.1, math.inf),)).admissible_T == 0.0


def test_growth_probe():
    g = make_grid(1024, 200.0)
    f = Field(g, np.exp(-g.x ** 2))
    p = growth_probe(EstimateId.MAX_SCH_L2, f, horizons=(1.0, 0.5), params=EstimateParams(samples_per_unit=64))
    assert p.horizons.tolist() == [0.5, 1.0]
    assert p.exponent == 0.3
    assert np.all(p.growth > 0)
    with pytest.raises(ParameterError):
        growth_probe(EstimateId.KATO_SCH, f)


@given(st.integers(0, 2 ** 31), st.integers(0, 49))
def test_member_seeds_are_stable(seed, index):
    e = Ensemble(seed=seed)
    assert e.member_seed(index) == Ensemble(seed=seed).member_seed(index)
