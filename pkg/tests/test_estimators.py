import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mellin_deconv import distributions as D
from mellin_deconv.empirical import ThresholdMask, empirical_mellin, mx_hat, threshold_mask
from mellin_deconv.estimators import (CurveEstimate, density_known, density_unknown, estimate,
                                      risk_terms, scaled_variance, survival_factor,
                                      survival_known, survival_unknown)
from mellin_deconv.mellin_core import MellinFn, default_tgrid, make_tgrid, mellin_inverse
from mellin_deconv.simulation import preset, run_experiment

from conftest import GAMMA, PARETO

X = np.linspace(0.01, 8, 400)


@pytest.fixture(scope="module")
def data():
    grid = default_tgrid()
    rng = np.random.default_rng(404)
    y = GAMMA.draw(rng, 1500) * PARETO.draw(rng, 1500)
    u = PARETO.draw(rng, 300)
    return {
        "grid": grid,
        "mY": {c: empirical_mellin(y, c, grid) for c in (0.5, 1.5)},
        "mUh": {c: empirical_mellin(u, c, grid) for c in (0.5, 1.5)},
        "mU": {c: D.analytic_mellin_fn(PARETO, c, grid) for c in (0.5, 1.5)},
    }


def zero_fn(grid):
    return MellinFn(grid, np.zeros(grid.size))


def test_curve_validation():
    with pytest.raises(ValueError):
        CurveEstimate(X, np.zeros_like(X), 1.0, 0.5, "survival-known")
    with pytest.raises(ValueError):
        CurveEstimate(X, np.full_like(X, np.nan), 1.0, 0.5, "density-known")
    with pytest.raises(ValueError):
        CurveEstimate(X, np.zeros_like(X), 1.0, 0.5, "kernel")


def test_zero_input_gives_zero(data):
    g = data["grid"]
    mU = data["mU"]
    assert np.all(density_known(zero_fn(g), mU[0.5], 3, 0.5, X).values == 0)
    assert np.all(survival_known(zero_fn(g), mU[1.5], 3, 1.5, X).values == 0)


def test_empty_mask_gives_zero(data):
    g = data["grid"]
    masked = mx_hat(data["mY"][1.5], data["mUh"][1.5], ThresholdMask.nowhere(g))
    assert np.all(density_unknown(masked, 3, 1.5, X).values == 0)
    assert np.all(survival_unknown(masked, 3, 1.5, X).values == 0)


def test_survival_requires_c_above_one(data):
    with pytest.raises(ValueError):
        survival_known(data["mY"][0.5], data["mU"][0.5], 2, 0.5, X)
    with pytest.raises(ValueError):
        survival_unknown(data["mY"][0.5], 2, 1.0, X)
    with pytest.raises(ValueError):
        survival_factor(data["mY"][0.5], 0.9)


def test_cutoff_beyond_grid(data):
    with pytest.raises(ValueError):
        density_known(data["mY"][0.5], data["mU"][0.5], 25, 0.5, X)


def test_noiseless_large_sample():
    grid = make_tgrid(12, 0.01)
    x_sample = D.sample(GAMMA, 100_000, 5)
    ones = MellinFn(grid, np.ones(grid.size))
    xs = np.linspace(0.5, 6, 60)
    est = density_known(empirical_mellin(x_sample, 0.5, grid), ones, 10, 0.5, xs)
    assert np.max(np.abs(est.values - GAMMA.pdf(xs))) <= 0.02


def test_population_plug_in():
    grid = make_tgrid(12, 0.01)
    mX = D.analytic_mellin_fn(GAMMA, 0.5, grid)
    mU = D.analytic_mellin_fn(PARETO, 0.5, grid)
    xs = np.linspace(0.2, 8, 80)
    est = density_known(mX * mU, mU, 10, 0.5, xs)
    np.testing.assert_allclose(est.values, mellin_inverse(mX, 10, 0.5, xs), atol=1e-3)
    np.testing.assert_allclose(est.values, GAMMA.pdf(xs), atol=1e-3)


def test_survival_population_plug_in():
    grid = make_tgrid(12, 0.01)
    mX = D.analytic_mellin_fn(GAMMA, 1.5, grid)
    mU = D.analytic_mellin_fn(PARETO, 1.5, grid)
    est = survival_known(mX * mU, mU, 10, 1.5, np.array([1.0, 30.0]))
    assert est.values[0] == pytest.approx(0.919699, abs=0.01)
    assert abs(est.values[1]) <= 0.02
    assert est.kind == "survival-known" and est.c == 1.5


@pytest.mark.parametrize("c, surv", [(0.5, False), (1.5, False), (1.5, True)])
def test_bridge_is_bit_for_bit(data, c, surv):
    g = data["grid"]
    mY, mU = data["mY"][c], data["mU"][c]
    bridged = mx_hat(mY, mU, ThresholdMask.everywhere(g))
    if surv:
        a = survival_known(mY, mU, 2.5, c, X).values
        b = survival_unknown(bridged, 2.5, c, X).values
    else:
        a = density_known(mY, mU, 2.5, c, X).values
        b = density_unknown(bridged, 2.5, c, X).values
    np.testing.assert_array_equal(a, b)


def test_dispatch_matches_named(data):
    mx = mx_hat(data["mY"][1.5], data["mUh"][1.5],
                threshold_mask(data["mUh"][1.5], 300, 1500))
    np.testing.assert_array_equal(estimate(mx, 1.7, 1.5, X, survival=True).values,
                                  survival_unknown(mx, 1.7, 1.5, X).values)
    np.testing.assert_array_equal(estimate(mx, 1.7, 1.5, X).values,
                                  density_unknown(mx, 1.7, 1.5, X).values)


@given(st.floats(-50, 50, allow_subnormal=False), st.floats(0.1, 5))
def test_linear_in_transform(alpha, k):
    grid = make_tgrid(5, 0.01)
    mY = empirical_mellin(D.sample_product(GAMMA, PARETO, 200, 1), 0.5, grid)
    mU = D.analytic_mellin_fn(PARETO, 0.5, grid)
    base = density_known(mY, mU, k, 0.5, X).values
    scaled = density_known(alpha * mY, mU, k, 0.5, X).values
    np.testing.assert_allclose(scaled, alpha * base, rtol=1e-12,
                               atol=1e-12 * np.max(np.abs(base)) * max(1, abs(alpha)))


def test_risk_terms_deterministic_pieces(data):
    g = data["grid"]
    mX = D.analytic_mellin_fn(GAMMA, 0.5, g)
    mU = data["mU"][0.5]
    # with exact M_U and a full mask the mask and U terms vanish
    full = ThresholdMask.everywhere(g)
    vY = scaled_variance(mX * mU, 0.25)
    r = risk_terms(mx_hat(data["mY"][0.5], mU, full), mX, mU, mU, full, vY, 1500, 2.0)
    assert r.mask_loss == 0.0 and r.u_error == 0.0
    assert r.bias > 0 and r.variance > 0
    assert r.decomposition == pytest.approx(r.bias + r.variance)


def test_survival_trend_in_m():
    common = dict(c=1.25, survival=True, N=100, kappa=0.3)
    few = run_experiment(preset("fig1", m=100, **common))
    many = run_experiment(preset("fig1", m=1000, **common))
    assert few.emise > many.emise
