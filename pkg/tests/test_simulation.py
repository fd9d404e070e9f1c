import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mellin_deconv import distributions as D
from mellin_deconv.simulation import (PRESETS, REFERENCE_EMISE, ExperimentSpec, preset,
                                      replication_seed, run_experiment, run_replication)

SMALL = dict(N=6, n=300, t_max=6.0)


# ---------------------------------------------------------------- presets

def test_preset_facts():
    assert preset("fig2").m == 1000
    assert preset("fig4").m is None and preset("fig4").known_error
    assert preset("fig6").target == D.Weibull(1, 3)
    assert preset("fig7").target == D.Beta(10, 5)
    assert preset("fig1").kappa == 0.3 and preset("fig4").kappa == 0.6


@pytest.mark.parametrize("name", PRESETS)
def test_preset_common_settings(name):
    spec = preset(name)
    assert spec.c == 0.5 and spec.a == 0.0 and spec.N == 500
    assert spec.error == D.Pareto(1, 1)
    assert spec.name == name


def test_preset_sample_sizes():
    assert [preset(f"fig{i}").m for i in (1, 2, 3)] == [100, 1000, 4000]
    assert all(preset(f"fig{i}").n == 2000 == preset(f"fig{i}").m for i in range(5, 9))


def test_unknown_preset():
    with pytest.raises(ValueError):
        preset("fig9")


def test_preset_overrides():
    spec = preset("fig1", N=3, seed=11)
    assert spec.N == 3 and spec.seed == 11 and spec.m == 100


def test_reference_values_cover_presets():
    assert set(REFERENCE_EMISE) == set(PRESETS)


# ---------------------------------------------------------------- spec validation

@pytest.mark.parametrize("bad", [dict(n=0), dict(N=0), dict(m=0), dict(kappa=0.0),
                                 dict(ise_refine=0), dict(survival=True),
                                 dict(x_points=np.array([1.0, 0.5])),
                                 dict(x_points=np.array([0.0, 1.0]))])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        ExperimentSpec(target=D.Gamma(1, 3), error=D.Pareto(1, 1),
                       **{**dict(n=10, m=10, kappa=0.3), **bad})


@given(st.integers(1, 6))
def test_ise_points_refine_original(r):
    spec = preset("fig1", x_points=np.linspace(0.1, 2.0, 20), ise_refine=r)
    dense = spec.ise_points()
    assert dense.size == 19 * r + 1
    np.testing.assert_array_equal(dense[::r], spec.x_points)
    assert np.all(np.diff(dense) > 0)


def test_loss_weight_reduces_to_trapezoid():
    spec = preset("fig1")
    w = spec.loss_weight()
    assert w.sum() == pytest.approx(spec.x_points[-1] - spec.x_points[0])


# ---------------------------------------------------------------- replications

def test_replication_deterministic():
    spec = preset("fig1", **SMALL)
    a = run_replication(spec, replication_seed(spec, 3))
    b = run_replication(spec, replication_seed(spec, 3))
    assert a.ise == b.ise and a.k_hat == b.k_hat
    np.testing.assert_array_equal(a.curve, b.curve)
    assert a.curve.shape == spec.x_points.shape


def test_known_error_smoke():
    spec = preset("fig4", **SMALL)
    rep = run_replication(spec, replication_seed(spec, 0))
    assert math.isfinite(rep.ise) and rep.ise >= 0


def test_large_sample_known_error():
    spec = preset("fig4", n=100_000, N=1)
    assert run_replication(spec, replication_seed(spec, 0)).ise < 1e-3


def test_survival_replication():
    spec = preset("fig1", c=1.25, survival=True, **SMALL)
    rep = run_replication(spec, replication_seed(spec, 0))
    assert math.isfinite(rep.ise)
    np.testing.assert_array_equal(spec.truth(), D.Gamma(1, 3).sf(spec.x_points))


# ---------------------------------------------------------------- experiments

@pytest.fixture(scope="module")
def report():
    return run_experiment(preset("fig2", **SMALL))


def test_emise_is_mean(report):
    assert report.emise == float(np.mean(report.per_replication_ise))
    assert report.stderr > 0


def test_histogram_sums_to_n(report):
    assert sum(report.k_hat_histogram.values()) == report.spec.N


def test_median_curve(report):
    assert report.median_curve.shape == report.spec.x_points.shape
    np.testing.assert_array_equal(report.median_curve, np.median(report.curves, axis=0))


def test_experiment_deterministic(report):
    again = run_experiment(report.spec)
    np.testing.assert_array_equal(again.per_replication_ise, report.per_replication_ise)
    np.testing.assert_array_equal(again.curves, report.curves)


def test_parallel_matches_serial(report):
    par = run_experiment(report.spec, jobs=2)
    np.testing.assert_array_equal(par.per_replication_ise, report.per_replication_ise)
    np.testing.assert_array_equal(par.k_hats, report.k_hats)
    np.testing.assert_array_equal(par.curves, report.curves)


def test_seed_changes_results(report):
    other = run_experiment(preset("fig2", seed=1, **SMALL))
    assert not np.array_equal(other.per_replication_ise, report.per_replication_ise)


def test_single_replication_stderr():
    rep = run_experiment(preset("fig1", **{**SMALL, "N": 1}))
    assert math.isnan(rep.stderr)
