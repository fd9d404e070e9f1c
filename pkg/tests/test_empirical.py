import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mellin_deconv import distributions as D
from mellin_deconv.empirical import (ThresholdMask, as_sample, empirical_mellin, mx_hat,
                                     mx_tilde, sigma_hat_sq, threshold_mask)
from mellin_deconv.mellin_core import MellinFn, dagger, make_tgrid

from conftest import GAMMA, PARETO

positive_samples = arrays(np.float64, st.integers(1, 60),
                          elements=st.floats(1e-6, 1e6, allow_nan=False))


def test_sample_validation():
    for bad in ([], [1.0, 0.0], [1.0, -2.0], [1.0, np.nan], [np.inf]):
        with pytest.raises(ValueError):
            as_sample(bad)


def test_unit_sample(small_grid):
    m = empirical_mellin([1.0], 0.7, small_grid)
    np.testing.assert_allclose(m.values, 1.0, rtol=0, atol=1e-14)


def test_single_point_at_e(small_grid):
    m = empirical_mellin([math.e], 1.0, small_grid)
    np.testing.assert_allclose(m.values, np.exp(2j * np.pi * small_grid.points), atol=1e-13)


@given(positive_samples, st.floats(0.1, 2.0))
def test_matches_direct_sum(y, c):
    grid = make_tgrid(3, 0.05)
    m = empirical_mellin(y, c, grid)
    direct = np.exp(np.outer(c - 1 + 2j * np.pi * grid.points, np.log(y))).mean(axis=1)
    scale = np.mean(y ** (c - 1))
    np.testing.assert_allclose(m.values, direct, rtol=0, atol=1e-12 * scale)
    assert m.conj_asymmetry() == 0.0


def test_unbiased_over_replications():
    grid = make_tgrid(2.5, 0.5)
    reps = np.array([
        empirical_mellin(D.sample_product(GAMMA, PARETO, 200, [7, j]), 0.5, grid).values
        for j in range(2000)])
    truth = GAMMA.mellin(0.5, grid.points) * PARETO.mellin(0.5, grid.points)
    for t in (0.0, 1.0, 2.5):
        j = grid.half + int(round(t / grid.step))
        for part in (np.real, np.imag):
            vals = part(reps[:, j])
            se = vals.std(ddof=1) / math.sqrt(vals.size)
            assert abs(vals.mean() - part(truth[j])) <= 3 * se + 1e-15


def test_sigma_hat_examples():
    assert sigma_hat_sq(np.ones(10), 0.5) == 2.0
    assert sigma_hat_sq(D.sample(GAMMA, 50, 3), 1.0) == 2.0


def test_sigma_hat_large_sample():
    y = D.sample_product(GAMMA, PARETO, 100_000, 21)
    se = np.std(1 / y, ddof=1) / math.sqrt(y.size)
    assert abs(sigma_hat_sq(y, 0.5) - 1.25) <= 3 * se


@given(positive_samples, st.floats(0.1, 2.0))
def test_sigma_hat_at_least_one(y, c):
    assert sigma_hat_sq(y, c) >= 1.0


# ---------------------------------------------------------------- threshold set

def test_mask_all_included(small_grid):
    ones = MellinFn(small_grid, np.ones(small_grid.size))
    assert threshold_mask(ones, 1, 1).included.all()


def test_mask_excludes_small_values(small_grid):
    v = np.ones(small_grid.size, dtype=complex)
    v[40] = 1e-2    # |v|^2 = 1e-4, times 100 is 1e-2 < 1
    mask = threshold_mask(MellinFn(small_grid, v), 100, 500)
    assert not mask.included[40]
    assert mask.included.sum() == small_grid.size - 1


def test_mask_ties_included(small_grid):
    v = np.full(small_grid.size, 0.5, dtype=complex)
    assert threshold_mask(MellinFn(small_grid, v), 4, 9).included.all()


def test_mask_rejects_bad_counts(small_grid):
    with pytest.raises(ValueError):
        threshold_mask(MellinFn(small_grid, np.ones(small_grid.size)), 0, 5)


@given(st.integers(1, 5000), st.integers(1, 5000), st.integers(1, 5000))
def test_mask_monotone(m, n, extra):
    grid = make_tgrid(3, 0.05)
    u = D.sample(PARETO, 50, m % 97)
    mu = empirical_mellin(u, 0.5, grid)
    small = threshold_mask(mu, m, n).included
    large = threshold_mask(mu, m + extra, n + extra).included
    assert np.all(large[small])


def test_mask_symmetric():
    grid = make_tgrid(20, 0.01)
    mu = empirical_mellin(D.sample(PARETO, 100, 5), 0.5, grid)
    inc = threshold_mask(mu, 100, 1000).included
    np.testing.assert_array_equal(inc, inc[::-1])


def test_mask_shape_checked(small_grid):
    with pytest.raises(ValueError):
        ThresholdMask(small_grid, np.ones(3, dtype=bool), 1, 1)


# ---------------------------------------------------------------- plug-in transform

def test_mx_hat_all_false(small_grid):
    mY = empirical_mellin(D.sample(GAMMA, 30, 1), 0.5, small_grid)
    out = mx_hat(mY, mY, ThresholdMask.nowhere(small_grid))
    assert np.all(out.values == 0)


def test_mx_hat_ratio_of_equal(small_grid):
    mY = empirical_mellin(D.sample(GAMMA, 30, 1), 0.5, small_grid)
    out = mx_hat(mY, mY, ThresholdMask.everywhere(small_grid))
    np.testing.assert_allclose(out.values, 1.0, rtol=1e-12)


def test_mx_hat_definition(small_grid):
    y = D.sample_product(GAMMA, PARETO, 300, 8)
    u = D.sample(PARETO, 40, 9)
    mY, mU = empirical_mellin(y, 0.5, small_grid), empirical_mellin(u, 0.5, small_grid)
    mask = threshold_mask(mU, 40, 300)
    out = mx_hat(mY, mU, mask)
    np.testing.assert_array_equal(out.values, mY.values * dagger(mU).values * mask.indicator)
    assert out.conj_asymmetry() == 0.0


def test_mx_hat_grid_mismatch(small_grid):
    other = make_tgrid(5, 0.02)
    a = MellinFn(small_grid, np.ones(small_grid.size))
    b = MellinFn(other, np.ones(other.size))
    with pytest.raises(ValueError):
        mx_hat(a, b, ThresholdMask.everywhere(small_grid))
    with pytest.raises(ValueError):
        mx_hat(a, a, ThresholdMask.everywhere(other))
    with pytest.raises(ValueError):
        mx_tilde(a, b)


def test_mx_hat_at_zero_unbiased():
    grid = make_tgrid(1, 0.5)
    vals = []
    for j in range(400):
        rng = np.random.default_rng([31, j])
        y = GAMMA.draw(rng, 2000) * PARETO.draw(rng, 2000)
        u = PARETO.draw(rng, 2000)
        mY, mU = empirical_mellin(y, 0.5, grid), empirical_mellin(u, 0.5, grid)
        vals.append(mx_hat(mY, mU, threshold_mask(mU, 2000, 2000)).values[grid.half].real)
    vals = np.array(vals)
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - math.gamma(2.5) / math.gamma(3)) <= 3 * se
