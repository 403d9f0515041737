import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from jamgame.channel import (ChannelParams, EavesdropParams, InfeasibleCorrelationError,
                             InvalidMomentError, JammerCorrelationTriple, LinearJammerEaves,
                             LinearJammerFull, PowerBudget, capacity_nats,
                             equivalent_linear_jammer, lambda_det, snr_eaves, snr_full,
                             z1j_feasible_bound, z_transform)

pos = st.floats(0.05, 10)
FIG2_BUDGET = PowerBudget(10, 5, 5)


def test_types_validate():
    with pytest.raises(ValueError):
        ChannelParams(-1, 1, 1, 1)
    with pytest.raises(ValueError):
        ChannelParams(math.nan, 1, 1, 1)
    with pytest.raises(ValueError):
        EavesdropParams(1, 1, 0)
    with pytest.raises(ValueError):
        PowerBudget(0, 0, 1)
    with pytest.raises(ValueError):
        LinearJammerFull(0, 0, -1)
    with pytest.raises(ValueError):
        JammerCorrelationTriple(0, 0, -1)


def test_snr_full_null_region():
    p = ChannelParams(0.2, 0.2, 1, 1)
    r = -math.sqrt(0.2)
    assert snr_full(p, FIG2_BUDGET, LinearJammerFull(r, r, 2)) == pytest.approx(0, abs=1e-15)


def test_snr_full_no_jammer():
    p = ChannelParams(0.7, 1.3, 2, 0.5)
    b = PowerBudget(2, 3, 1)
    assert snr_full(p, b, LinearJammerFull(0, 0, 0)) == pytest.approx((0.7 * 2 + 1.3 * 3) / 0.5)


def test_snr_full_split_point():
    p = ChannelParams(1, 1, 1, 1)
    assert snr_full(p, FIG2_BUDGET, LinearJammerFull(-0.4, -0.4, 2.6)) == pytest.approx(1.5)


def test_snr_infinite_and_infeasible():
    p = ChannelParams(1, 1, 1, 0)
    assert snr_full(p, FIG2_BUDGET, LinearJammerFull(0, 0, 0)) == math.inf
    assert capacity_nats(math.inf) == math.inf
    with pytest.raises(ValueError):
        snr_full(p, FIG2_BUDGET, LinearJammerFull(1, 1, 0))


def test_snr_eaves_pure_noise():
    p = ChannelParams(1.5, 0.5, 2, 1)
    b = PowerBudget(1, 2, 3)
    ep = EavesdropParams(0.3, 0.8, 1)
    expected = (1.5 + 1.0) / (2 * 3 + 1)
    assert snr_eaves(p, ep, b, LinearJammerEaves(0, 3)) == pytest.approx(expected)
    ep0 = EavesdropParams(0, 0, 1)
    # blind eavesdropping: only the jammer's total power matters
    rho = math.sqrt(1.0)
    jam = LinearJammerEaves(rho, 3 - rho ** 2 * 1)
    assert snr_eaves(p, ep0, b, jam) == pytest.approx(expected)


def test_lambda_det_uncorrelated():
    p = ChannelParams(0, 0, 1, 1)
    b = PowerBudget(2, 3, 1)
    assert lambda_det(p, b, JammerCorrelationTriple(0, 0, 0)) == pytest.approx(6)


def test_lambda_det_direct_determinant():
    p = ChannelParams(1, 1, 1, 1)
    b = PowerBudget(1, 1, 1)
    corr = JammerCorrelationTriple(-0.5, -0.5, 1)
    # E[X1Y] = E[X2Y] = 1 - 0.5, E[Y^2] = 2 - 2 + 1 + 1 = 2
    a = 0.5
    lam = np.array([[1 - a * a / 2, -a * a / 2], [-a * a / 2, 1 - a * a / 2]])
    assert lambda_det(p, b, corr) == pytest.approx(np.linalg.det(lam), rel=1e-14)


def test_lambda_det_invalid_moment():
    p = ChannelParams(0, 0, 1, 0)
    with pytest.raises(InvalidMomentError):
        lambda_det(p, PowerBudget(1, 1, 1), JammerCorrelationTriple(0, 0, 0))


def test_equivalent_linear_jammer_examples():
    b = PowerBudget(10, 5, 5)
    assert equivalent_linear_jammer(JammerCorrelationTriple(0, 0, 5), b) == LinearJammerFull(0, 0, 5)
    assert equivalent_linear_jammer(JammerCorrelationTriple(10, 0, 10), b) == LinearJammerFull(1, 0, 0)
    jam = equivalent_linear_jammer(JammerCorrelationTriple(-2, -1, 1), b)
    assert (jam.rho1, jam.rho2, jam.sigmaNJ2) == pytest.approx((-0.2, -0.2, 0.4))
    p = ChannelParams(1, 1, 1, 1)
    lin = JammerCorrelationTriple(jam.rho1 * 10, jam.rho2 * 5, jam.power(b))
    assert lambda_det(p, b, lin) == pytest.approx(
        lambda_det(p, b, JammerCorrelationTriple(-2, -1, 1)), rel=1e-12)


def test_equivalent_linear_jammer_infeasible():
    with pytest.raises(InfeasibleCorrelationError):
        equivalent_linear_jammer(JammerCorrelationTriple(3, 0, 0.5), PowerBudget(1, 1, 1))


@given(pos, pos, pos, pos, pos, pos, pos, st.floats(-1, 1), st.floats(-1, 1),
       st.floats(0, 5))
def test_lambda_equivalence_property(h1, h2, g, s2, P1, P2, PJ, u1, u2, extra):
    b = PowerBudget(P1, P2, PJ)
    p = ChannelParams(h1, h2, g, s2)
    c1, c2 = u1 * math.sqrt(P1), u2 * math.sqrt(P2)
    corr = JammerCorrelationTriple(c1, c2, c1 * c1 / P1 + c2 * c2 / P2 + extra)
    jam = equivalent_linear_jammer(corr, b)
    assert jam.power(b) == pytest.approx(corr.pj, rel=1e-12)
    lin = JammerCorrelationTriple(jam.rho1 * P1, jam.rho2 * P2, jam.power(b))
    a, d = lambda_det(p, b, corr), lambda_det(p, b, lin)
    assert abs(a - d) <= 1e-10 * abs(a)


@given(pos, pos, pos, pos)
def test_lambda_matches_linear_capacity(h1, h2, P1, P2):
    # for a linear jammer the mutual information reduces to 0.5 ln(P1 P2 / |Lambda|)
    p = ChannelParams(h1, h2, 1.0, 1.0)
    b = PowerBudget(P1, P2, 1.0)
    jam = LinearJammerFull(-0.1, -0.2, 0.3)
    assume(jam.is_feasible(b))
    corr = JammerCorrelationTriple(jam.rho1 * P1, jam.rho2 * P2, jam.power(b))
    lhs = 0.5 * math.log(P1 * P2 / lambda_det(p, b, corr))
    assert lhs == pytest.approx(capacity_nats(snr_full(p, b, jam)), rel=1e-9)


def test_z_transform_examples():
    z = z_transform(ChannelParams(1, 1, 1, 1), EavesdropParams(1, 1, 1), PowerBudget(1, 1, 1))
    assert (z.u1, z.u2, z.EZ1sq) == pytest.approx((1, 0, 2))
    z = z_transform(ChannelParams(2, 3, 1, 1), EavesdropParams(1, 0, 1), PowerBudget(1, 1, 1))
    assert (z.u1, z.u2) == pytest.approx((math.sqrt(2), math.sqrt(3)))
    with pytest.raises(ValueError):
        z_transform(ChannelParams(1, 1, 1, 1), EavesdropParams(0, 1, 1), PowerBudget(1, 1, 1))


@given(pos, pos, pos, pos, pos, pos)
def test_z_transform_power_identity(h1, h2, g1, g2, P1, P2):
    z = z_transform(ChannelParams(h1, h2, 1, 1), EavesdropParams(g1, g2, 1), PowerBudget(P1, P2, 1))
    total = z.u1 ** 2 * z.EZ1sq + z.u2 ** 2 * z.EZ2sq
    assert total == pytest.approx(h1 * P1 + h2 * P2, rel=1e-10)


def test_z1j_bound_examples():
    ep = EavesdropParams(1, 1, 1)
    assert z1j_feasible_bound(ep, 2, 0) == 0
    assert z1j_feasible_bound(ep, 2, 1) == pytest.approx(math.sqrt(4 / 3))
    # a linear jammer at full power reaches the bound: E[Z1 J] = rho sqrt(g1) E[Z1^2]
    rho = math.sqrt(1 / (1 + 1 * 2))
    assert rho * 1 * 2 == pytest.approx(z1j_feasible_bound(ep, 2, 1))


@given(st.floats(0.01, 100), st.floats(0.01, 100))
def test_z1j_bound_decreasing_in_noise(a, b):
    lo, hi = sorted((a, b))
    assume(hi > lo * (1 + 1e-9))
    f = lambda s: z1j_feasible_bound(EavesdropParams(1, 1, s), 2, 1)
    assert f(hi) < f(lo)
