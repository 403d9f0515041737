import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jamgame.fading import FadingModel, PowerProfile, TwoUserFadingModel


def test_grid_invariants():
    m = FadingModel.exponential()
    assert m.h.size == 4096 and np.all(np.diff(m.h) > 0)
    assert abs(m.w.sum() - 1) <= 1e-12 and np.all(m.w >= 0)
    lo, hi = m.quantile([1e-4, 1 - 1e-6])
    assert m.edges[1] == pytest.approx(lo) and m.edges[-2] == pytest.approx(hi)


@pytest.mark.parametrize("order,exact", [(0, 1.0), (1, 1.0), (2, 2.0)])
def test_moments(order, exact):
    m = FadingModel.exponential()
    assert abs(m.expect(m.h ** order) - exact) / exact <= 1e-5


@given(st.floats(0.1, 10))
def test_scaled_mean(mean):
    m = FadingModel.exponential(mean, n_points=512)
    assert m.expect(m.h) == pytest.approx(mean, rel=1e-12)


def test_breakpoints_make_indicators_exact():
    m = FadingModel.exponential().with_breakpoints(0.5)
    assert m.expect(m.h > 0.5) == pytest.approx(math.exp(-0.5), rel=1e-12)


def test_quantile_spacing_equal_mass():
    m = FadingModel.exponential(n_points=8, spacing="quantile")
    assert np.allclose(m.w, 1 / 8)
    assert m.h[0] == pytest.approx(0.0653, abs=1e-4)


def test_discrete_law():
    d = FadingModel.discrete([1, 4], [0.5, 0.5])
    assert not d.continuous and d.with_breakpoints(2) is d
    assert d.sf(2.0) == pytest.approx(0.5) and d.sf(0.5) == pytest.approx(1.0)
    assert d.expect(d.h) == pytest.approx(2.5)
    with pytest.raises(ValueError):
        FadingModel.discrete([1, 1], [0.5, 0.5])
    with pytest.raises(ValueError):
        FadingModel.discrete([1, 2], [0.5, 0.6])


def test_bad_laws():
    with pytest.raises(ValueError):
        FadingModel.exponential(-1)
    with pytest.raises(ValueError):
        FadingModel("weibull")


def test_two_user_marginals():
    law = FadingModel.exponential(n_points=64)
    m2 = TwoUserFadingModel(law, FadingModel.exponential(2.0, n_points=32))
    assert m2.shape == (64, 32)
    assert np.allclose(m2.w.sum(axis=1), m2.law1.w, atol=1e-10)
    assert np.allclose(m2.w.sum(axis=0), m2.law2.w, atol=1e-10)
    assert m2.expect(m2.h2) == pytest.approx(2.0, rel=1e-10)


def test_power_profile_nonnegative():
    with pytest.raises(ValueError):
        PowerProfile(np.array([1.0, -1.0]), 1.0, 0.0)
