import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jamgame.fading import FadingModel, TwoUserFadingModel
from jamgame.fading_correlated import (ResolutionError, capacity_against_best_response,
                                       correlated_capacity, demonstrate_no_equilibrium,
                                       jammer_best_response, jammer_best_response_two_user,
                                       maxmin_oracle, maxmin_two_user, maxmin_two_user_oracle,
                                       maxmin_user)

EXP = FadingModel.exponential()
MAXMIN_CAPACITY_FIG8 = 0.2798869040572755
# best discretised max-min value on the equal-mass eight-state law
ORACLE_CAPACITY_8 = 0.28366335127


def test_best_response_full_null():
    d = FadingModel.discrete([1.0], [1.0])
    jam = jammer_best_response(d, np.array([0.3]), 1.0)
    assert jam.lam == 0 and jam.slack == pytest.approx(0.7)
    assert jam.rho[0] == -1.0 and jam.sigmaNJ2[0] == 0
    assert correlated_capacity(d.h, d.w, [0.3], jam.rho, jam.sigmaNJ2) == 0.0


def test_best_response_silent_user():
    jam = jammer_best_response(EXP, np.zeros_like(EXP.h), 5.0)
    assert not np.any(jam.total)


def test_best_response_two_state():
    d = FadingModel.discrete([1.0, 2.0], [0.5, 0.5])
    jam = jammer_best_response(d, np.array([0.5, 1.0]), 1.0)
    assert 1 / jam.lam == pytest.approx(1.5, rel=1e-12)
    assert jam.total == pytest.approx([0.5, 1.5], rel=1e-12)
    assert jam.rho[0] == pytest.approx(-1.0) and jam.sigmaNJ2[0] == 0


@given(st.lists(st.floats(0.0, 20.0), min_size=2, max_size=12), st.floats(0.1, 10.0))
def test_best_response_is_clipped_received_power(P, PJ):
    P = np.array(P)
    model = FadingModel.exponential(n_points=len(P), spacing="quantile")
    jam = jammer_best_response(model, P, PJ)
    q = model.h * P
    if jam.lam == 0:
        assert np.allclose(jam.total, q)
    else:
        assert np.allclose(jam.total, np.minimum(q, 1 / jam.lam), atol=1e-12)
        assert model.expect(jam.total) == pytest.approx(PJ, rel=1e-9)
    # the realised noise-plus-cancelled-signal formula matches ln(lam q)
    cap = correlated_capacity(model.h, model.w, P, jam.rho, jam.sigmaNJ2)
    assert cap == pytest.approx(capacity_against_best_response(model.w, q, PJ), abs=1e-9)


@pytest.fixture(scope="module")
def fig8():
    return maxmin_user(EXP, 10, 5)


def test_maxmin_closed_form(fig8):
    assert fig8.threshold == pytest.approx(0.5, abs=5e-5)
    assert fig8.user_power_level == pytest.approx(16.487, abs=1e-3)
    assert fig8.jam_power_level == pytest.approx(8.2436, abs=1e-3)
    assert fig8.mu * 10 == pytest.approx(math.exp(-0.5), rel=1e-12)
    assert fig8.lam * 5 == pytest.approx(math.exp(-0.5), rel=1e-12)
    assert fig8.capacity_nats == pytest.approx(MAXMIN_CAPACITY_FIG8, rel=1e-10)


def test_maxmin_jammer_matches_user_support(fig8):
    on = fig8.user.values > 0
    assert np.array_equal(on, fig8.jammer.total > 0)
    assert fig8.jammer.level == pytest.approx(fig8.jam_power_level, rel=1e-9)
    assert fig8.model.expect(fig8.jammer.total) == pytest.approx(5, rel=1e-9)


def test_maxmin_two_point_law():
    d = FadingModel.discrete([1.0, 2.0], [0.5, 0.5])
    sol = maxmin_user(d, 2.0, 1.0)
    assert sol.threshold == 0.5 and sol.user.values.tolist() == [2.0, 2.0]
    assert sol.jammer.total == pytest.approx([1.0, 1.0]) and sol.lam == pytest.approx(1.0)
    assert sol.capacity_nats == pytest.approx(0.25 * (math.log(2) + math.log(4)))


def test_printed_variant_differs(fig8):
    alt = maxmin_user(EXP, 10, 5, capacity_variant="printed")
    assert alt.capacity_nats < fig8.capacity_nats
    with pytest.raises(ValueError):
        maxmin_user(EXP, 10, 5, capacity_variant="other")


def test_maxmin_weak_jammer_limit():
    sol = maxmin_user(EXP, 10, 1e-6)
    assert sol.threshold == pytest.approx(1e-7)
    assert sol.user_power_level == pytest.approx(10, rel=1e-6)


@given(st.floats(0.5, 20), st.floats(0.1, 10))
def test_maxmin_budgets_and_identity(Pbar, PJ):
    model = FadingModel.exponential(n_points=512)
    sol = maxmin_user(model, Pbar, PJ)
    assert sol.model.expect(sol.user.values) == pytest.approx(Pbar, rel=1e-9)
    assert sol.model.expect(sol.jammer.total) == pytest.approx(PJ, rel=1e-9)
    general = capacity_against_best_response(sol.model.w, sol.model.h * sol.user.values, PJ)
    assert general == pytest.approx(sol.capacity_nats, abs=1e-9)


def test_maxmin_oracle_eight_states(fig8):
    q = FadingModel.exponential(n_points=8, spacing="quantile")
    small = FadingModel.discrete(q.h, q.w)
    P, cap = maxmin_oracle(small, 10, 5)
    assert cap == pytest.approx(ORACLE_CAPACITY_8, rel=1e-6)
    assert abs(cap - fig8.capacity_nats) / fig8.capacity_nats <= 0.02
    flat = maxmin_user(small, 10, 5)
    assert abs(cap - flat.capacity_nats) <= 1e-6
    # near-flat: on the states it feeds, the oracle feeds them equally
    on = P > 1e-3 * P.max()
    assert np.ptp(P[on]) / P.max() <= 0.02


def test_witness_profitable(fig8):
    for frac in (1e-3, 1e-2, 1e-1):
        wit = demonstrate_no_equilibrium(EXP, 10, 5, frac * fig8.user_power_level)
        assert wit.profitable and wit.delta_c > 0 and wit.reverse_delta_c < 0
        assert wit.u_minus < wit.threshold < wit.u_plus


def test_witness_zero_epsilon():
    assert demonstrate_no_equilibrium(EXP, 10, 5, 0.0).delta_c == 0.0


def test_witness_needs_resolution():
    with pytest.raises(ResolutionError):
        demonstrate_no_equilibrium(FadingModel.exponential(n_points=16), 10, 5, 0.01)
    with pytest.raises(ValueError):
        demonstrate_no_equilibrium(EXP, 10, 5, -1.0)


# ---- two users --------------------------------------------------------------

@pytest.fixture(scope="module")
def sym():
    return maxmin_two_user(TwoUserFadingModel.iid(FadingModel.exponential(n_points=256)), 5, 5, 5)


def test_two_user_symmetric(sym):
    assert sym.thresholds[0] == pytest.approx(0.5, rel=1e-6)
    assert sym.thresholds[1] == pytest.approx(sym.thresholds[0], rel=1e-9)
    assert sym.user_power_levels[0] == pytest.approx(sym.user_power_levels[1], rel=1e-6)
    assert sym.capacity_nats == pytest.approx(0.45008, abs=1e-5)


def test_two_user_structure(sym):
    P1, P2 = sym.user1.values, sym.user2.values
    assert not np.any((P1 > 0) & (P2 > 0))
    assert max(sym.constraint_residuals.values()) <= 1e-9
    on = (P1 > 0) | (P2 > 0)
    assert np.allclose(sym.jammer.total[on], sym.jammer.level, rtol=1e-9)
    # grid masses differ slightly from the exact activity probabilities
    assert sym.jammer.level == pytest.approx(sym.jam_power_level, rel=1e-2)


def test_two_user_best_response_consistent(sym):
    m2 = TwoUserFadingModel.iid(FadingModel.exponential(n_points=256))
    _, _, prof = jammer_best_response_two_user(m2, sym.user1, sym.user2, 5)
    assert prof.level == pytest.approx(sym.jammer.level, rel=1e-9)


def test_two_user_degenerates_to_single():
    law = FadingModel.exponential(n_points=256)
    sol = maxmin_two_user(TwoUserFadingModel.iid(law), 10, 0, 5)
    single = maxmin_user(law, 10, 5)
    assert sol.capacity_nats == pytest.approx(single.capacity_nats, rel=1e-9)
    assert not np.any(sol.user2.values)


def test_two_user_oracle_small_grid(sym):
    law = FadingModel.exponential(n_points=8, spacing="quantile")
    m2 = TwoUserFadingModel.iid(FadingModel.discrete(law.h, law.w))
    _, _, cap = maxmin_two_user_oracle(m2, 5, 5, 5, n_starts=4)
    assert abs(cap - sym.capacity_nats) / sym.capacity_nats <= 0.02
