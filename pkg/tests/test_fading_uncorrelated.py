import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jamgame.fading import FadingModel, TwoUserFadingModel
from jamgame.fading_uncorrelated import (ComplexGaussianFading, NoTransmissionError,
                                         alternating_best_response, blind_jammer_objective,
                                         capacity_fading_uncorrelated, joint_csi_kkt_residuals,
                                         joint_csi_profiles, solve_joint_csi_single,
                                         solve_joint_csi_two_user, two_user_kkt_residuals,
                                         uncorrelated_jammer_response,
                                         verify_blind_jammer_zero_correlation, waterfill,
                                         waterfill_blind_jammer)

EXP = FadingModel.exponential()
# alternating best response from a silent jammer, frozen at the fixed point
ABR_CAPACITY_FIG5 = 0.4150379019919313


@pytest.fixture(scope="module")
def fig5():
    sol = solve_joint_csi_single(EXP, 10, 5, 1, 1)
    model = EXP.with_breakpoints(sol.threshold)
    return model, solve_joint_csi_single(model, 10, 5, 1, 1)


def test_waterfill_two_state_reference():
    d = FadingModel.discrete([1, 4], [0.5, 0.5])
    prof = waterfill_blind_jammer(d, 1.5, 0.5, 1.0, 0.5)
    assert 1 / prof.multiplier == pytest.approx(2.125, abs=1e-12)
    assert prof.values == pytest.approx([1.125, 1.875])


def test_waterfill_no_jammer_is_classic():
    a = waterfill_blind_jammer(EXP, 2.0, 1.0, 1.0, 0.0)
    p, level = waterfill(EXP.h, EXP.w, 1.0, 2.0)
    assert np.array_equal(a.values, p)


def test_waterfill_small_budget_best_state():
    d = FadingModel.discrete([1, 2, 3], [0.2, 0.3, 0.5])
    prof = waterfill_blind_jammer(d, 1e-6, 1.0, 1.0, 1.0)
    assert prof.values[:2].tolist() == [0.0, 0.0] and prof.values[2] > 0


def test_waterfill_no_gain():
    with pytest.raises(NoTransmissionError):
        waterfill_blind_jammer(FadingModel.discrete([0.0], [1.0]), 1.0, 1.0, 1.0, 1.0)


@given(st.floats(0.1, 20), st.floats(0.1, 5), st.floats(0.1, 5))
def test_waterfill_binds(Pbar, noise, PJ):
    prof = waterfill_blind_jammer(FadingModel.exponential(n_points=256), Pbar, noise, 1.0, PJ)
    assert abs(prof.mean_power - Pbar) <= 1e-8 * Pbar


def test_threshold_continuity_algebra():
    lam, mu, s2, g = 0.05, 0.08, 1.0, 1.0
    _, _, thr = joint_csi_profiles(np.array([1.0]), lam, mu, s2, g)
    lo, j_lo, _ = joint_csi_profiles(np.array([thr * (1 - 1e-13)]), lam, mu, s2, g)
    hi, j_hi, _ = joint_csi_profiles(np.array([thr]), lam, mu, s2, g)
    target = s2 * mu / (g * lam)
    assert lo[0] == pytest.approx(target, rel=1e-10) and hi[0] == pytest.approx(target, rel=1e-10)
    assert j_lo[0] == 0 and j_hi[0] == pytest.approx(0, abs=1e-10)


def test_fig5_binding_and_shape(fig5):
    model, sol = fig5
    assert abs(sol.user.mean_power - 10) / 10 <= 1e-6
    assert abs(sol.jammer.mean_power - 5) / 5 <= 1e-6
    P, J = sol.user.values, sol.jammer.values
    assert sol.threshold > 0
    assert np.all(J[model.h < sol.threshold] == 0)
    assert np.all(np.diff(P) >= 0) and np.all(np.diff(J) >= 0)
    assert np.all(np.diff(J[model.h > sol.threshold]) > 0)


def test_fig5_kkt(fig5):
    model, sol = fig5
    assert max(joint_csi_kkt_residuals(model, sol, 1, 1).values()) <= 1e-6


def test_fig5_jammer_needs_user(fig5):
    _, sol = fig5
    assert not np.any((sol.jammer.values > 0) & (sol.user.values <= 0))


def test_fig5_noise_power_ratio(fig5):
    _, sol = fig5
    P, J = sol.user.values, sol.jammer.values
    both = (P > 0) & (J > 0)
    ratio = (1 + J[both]) / P[both]
    assert np.max(np.abs(ratio / (sol.lam / sol.mu) - 1)) <= 1e-6


def test_fig5_saddle(fig5):
    model, sol = fig5
    P, J = sol.user.values, sol.jammer.values
    P_fix, _ = waterfill(model.h, model.w, 1 + J, 10)
    J_fix, _ = uncorrelated_jammer_response(model.h, model.w, P, 5, 1, 1)
    assert np.max(np.abs(P_fix - P)) <= 1e-4
    assert np.max(np.abs(J_fix - J)) <= 1e-4


def test_fig5_alternating_best_response(fig5):
    model, sol = fig5
    P, J, it, hist = alternating_best_response(model, 10, 5, 1, 1)
    assert it < 200
    assert np.max(np.abs(P - sol.user.values)) <= 1e-3
    assert np.max(np.abs(J - sol.jammer.values)) <= 1e-3
    assert capacity_fading_uncorrelated(model, P, J, 1, 1) == pytest.approx(ABR_CAPACITY_FIG5, abs=1e-8)


def test_undamped_best_response_cycles():
    _, _, it, hist = alternating_best_response(EXP, 10, 5, 1, 1, damping=1.0, max_iter=60)
    assert it == 60 and hist[-1] > 1.0


def test_fig5_jammer_lowers_capacity(fig5):
    model, sol = fig5
    free = waterfill_blind_jammer(model, 10, 1, 1, 0)
    c_free = capacity_fading_uncorrelated(model, free, np.zeros_like(model.h), 1, 1)
    assert sol.capacity_nats < c_free


def test_no_jammer_reduces_to_waterfilling():
    sol = solve_joint_csi_single(EXP, 3.0, 0.0, 1.0, 1.0)
    ref = waterfill_blind_jammer(EXP, 3.0, 1.0, 1.0, 0.0)
    assert np.allclose(sol.user.values, ref.values, atol=1e-12)
    assert not np.any(sol.jammer.values)


@given(st.floats(0.5, 20), st.floats(0.1, 10), st.floats(0.2, 3), st.floats(0.2, 3))
def test_joint_solution_properties(Pbar, PJ, s2, g):
    model = FadingModel.exponential(n_points=512)
    sol = solve_joint_csi_single(model, Pbar, PJ, s2, g)
    assert abs(sol.user.mean_power - Pbar) <= 1e-6 * Pbar
    assert abs(sol.jammer.mean_power - PJ) <= 1e-6 * PJ
    assert max(joint_csi_kkt_residuals(model, sol, s2, g).values()) <= 1e-6
    assert np.all(np.diff(sol.user.values) >= -1e-12)
    assert np.all(np.diff(sol.jammer.values) >= -1e-12)
    assert not np.any((sol.jammer.values > 0) & (sol.user.values <= 0))


def test_capacity_references():
    d = FadingModel.discrete([1.0], [1.0])
    assert capacity_fading_uncorrelated(d, np.array([1.0]), np.array([0.0]), 1.0) == pytest.approx(0.5 * math.log(2))
    assert capacity_fading_uncorrelated(EXP, np.zeros_like(EXP.h), np.zeros_like(EXP.h), 1.0) == 0


# ---- two users --------------------------------------------------------------

@pytest.fixture(scope="module")
def two_user():
    m2 = TwoUserFadingModel.iid(FadingModel.exponential(n_points=256))
    return m2, solve_joint_csi_two_user(m2, 5, 5, 5, 1)


def test_two_user_one_active(two_user):
    m2, sol = two_user
    assert not np.any((sol.user1.values > 0) & (sol.user2.values > 0))
    kkt = two_user_kkt_residuals(m2, sol, 1)
    assert kkt.pop("both_active") == 0
    assert max(kkt.values()) <= 1e-6
    assert max(sol.constraint_residuals.values()) <= 1e-5


def test_two_user_symmetric(two_user):
    m2, sol = two_user
    assert sol.lambda1 == pytest.approx(sol.lambda2, rel=1e-10)
    a = sol.activity_probability
    assert abs(a["user1"] / (a["user1"] + a["user2"]) - 0.5) <= 1e-3
    # mirror symmetry off the diagonal
    off = ~np.eye(m2.shape[0], dtype=bool)
    assert np.allclose(sol.user1.values[off], sol.user2.values.T[off], atol=1e-12)


def test_two_user_shape(two_user):
    m2, sol = two_user
    P = sol.user1.values + sol.user2.values
    assert P[0, 0] == 0 and sol.jammer.values[0, 0] == 0   # nobody at low gains
    assert sol.jammer.values[-1, -1] > 0


def test_two_user_degenerates_to_single():
    law = FadingModel.exponential(n_points=256)
    m2 = TwoUserFadingModel.iid(law)
    sol = solve_joint_csi_two_user(m2, 5, 0, 5, 1)
    single = solve_joint_csi_single(law, 5, 5, 1, 1)
    assert (sol.lambda1, sol.mu, sol.capacity_nats) == (single.lam, single.mu, single.capacity_nats)
    assert not np.any(sol.user2.values)


def test_two_user_no_jammer():
    m2 = TwoUserFadingModel.iid(FadingModel.exponential(n_points=128))
    sol = solve_joint_csi_two_user(m2, 3, 2, 0, 1)
    assert not np.any(sol.jammer.values)
    assert max(sol.constraint_residuals.values()) <= 1e-5


# ---- blind jammer -----------------------------------------------------------

def test_blind_zero_correlation_reference():
    rep = verify_blind_jammer_zero_correlation(ComplexGaussianFading(), 1, 1, 1)
    assert rep.passed and rep.argmin == pytest.approx((0, 0), abs=1e-12)


def test_blind_zero_power():
    rep = verify_blind_jammer_zero_correlation(ComplexGaussianFading(), 1, 1, 0)
    assert rep.passed and rep.argmin == (0.0, 0.0)


def test_blind_constant_fading_breaks_premise():
    # a known, non-zero gain lets the jammer cancel part of the signal
    rep = verify_blind_jammer_zero_correlation(ComplexGaussianFading(1e-12, 1e-12, 1.0, 1.0),
                                               1, 1, 1, n_samples=1000)
    assert not rep.passed and rep.argmin[0] < 0 and rep.argmin[1] < 0


def test_blind_objective_infeasible_is_inf():
    H = np.ones(4, dtype=complex)
    assert blind_jammer_objective(H, H, 2.0, 0.0, 1, 1, 1, 1, 1) == math.inf
