"""Fading channels with a correlated jammer that knows the channel state.

The receiver noise is zero in this regime.  For a user profile the jammer
best response is linear jamming in every state with total power
``J = min(hP, 1/lambda)``: it nulls weak states completely and caps its effort
elsewhere.  The users then face a max-min problem, and the max-min pair is
not an equilibrium; :func:`demonstrate_no_equilibrium` builds an explicit
profitable deviation against the frozen jammer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, optimize

from .fading import FadingModel, PowerProfile, TwoUserFadingModel
from .fading_uncorrelated import NoTransmissionError
from .numerics import DEFAULT_TOL, ConvergenceError, ToleranceConfig, bisect

__all__ = [
    "ResolutionError",
    "CorrelatedJamProfile",
    "MaxMinSolution",
    "MaxMinTwoUserSolution",
    "NoEquilibriumWitness",
    "received_power_response",
    "jammer_best_response",
    "jammer_best_response_two_user",
    "correlated_capacity",
    "capacity_against_best_response",
    "maxmin_user",
    "maxmin_two_user",
    "demonstrate_no_equilibrium",
    "maxmin_oracle",
    "maxmin_two_user_oracle",
]


class ResolutionError(ValueError):
    """The grid cannot resolve the states needed by a construction."""


@dataclass(frozen=True, eq=False)
class CorrelatedJamProfile:
    """Per-state linear jamming ``J = rho X + N_J``.

    ``lam`` is the jammer multiplier: ``total == min(hP, 1/lam)`` where the
    user transmits.  ``lam == 0`` means the budget covers nulling every
    state and ``slack`` holds the unused power.
    """

    rho: np.ndarray
    sigmaNJ2: np.ndarray
    total: np.ndarray
    lam: float
    slack: float = 0.0

    @property
    def level(self) -> float:
        return math.inf if self.lam == 0 else 1.0 / self.lam


@dataclass
class MaxMinSolution:
    threshold: float
    user_power_level: float
    jam_power_level: float
    lam: float
    mu: float
    capacity_nats: float
    active_probability: float
    model: FadingModel = field(repr=False, default=None)
    user: Optional[PowerProfile] = field(repr=False, default=None)
    jammer: Optional[CorrelatedJamProfile] = field(repr=False, default=None)


def received_power_response(w: np.ndarray, q: np.ndarray, PJ: float,
                            cfg: ToleranceConfig = DEFAULT_TOL):
    """Best response against received powers ``q`` on a unit gain.

    Returns ``(rho, sigmaNJ2, J, lam, slack)`` where ``rho`` multiplies the
    unit-gain signal, so a state is nulled when ``rho == -1``.
    """
    if not PJ > 0:
        raise ValueError("PJ must be positive")
    q = np.asarray(q, dtype=float)
    if np.any(q < 0):
        raise ValueError("received powers must be non-negative")
    live = (w > 0) & (q > 0)
    total = float(np.dot(w[live], q[live]))
    if total <= PJ:
        rho = np.where(q > 0, -1.0, 0.0)
        return rho, np.zeros_like(q), q.copy(), 0.0, PJ - total
    v = bisect(lambda v: float(np.dot(w, np.minimum(q, v))) - PJ, 0.0,
               float(np.max(q[live])), cfg)
    partial = q > v
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        rho = np.where(partial, -v / q, np.where(q > 0, -1.0, 0.0))
        sig = np.where(partial, v - v * v / q, 0.0)
    return rho, np.maximum(sig, 0.0), np.minimum(q, v), 1.0 / v, 0.0


def _values(profile) -> np.ndarray:
    return np.asarray(profile.values if isinstance(profile, PowerProfile) else profile,
                      dtype=float)


def jammer_best_response(model: FadingModel, user, PJ: float,
                         cfg: ToleranceConfig = DEFAULT_TOL) -> CorrelatedJamProfile:
    """Capacity-minimising linear jamming for a fixed user profile.

    Full null ``(rho, sigma^2) = (-sqrt h, 0)`` where ``hP <= 1/lam``;
    elsewhere ``rho = -1/(lam sqrt(h) P)`` and
    ``sigma^2 = 1/lam - 1/(lam^2 h P)``.  ``lam`` makes ``E[J] = PJ``.
    """
    P = _values(user)
    h = model.h
    r, sig, J, lam, slack = received_power_response(model.w, h * P, PJ, cfg)
    # the unit-gain coefficient scales with sqrt(h); nulled but silent
    # states keep rho = -sqrt(h) so that the full-null branch reads as such
    rho = np.sqrt(h) * np.where(P > 0, r, -1.0)
    return CorrelatedJamProfile(rho, sig, J, lam, slack)


def jammer_best_response_two_user(model2: TwoUserFadingModel, P1, P2, PJ: float,
                                  cfg: ToleranceConfig = DEFAULT_TOL):
    """Two-user best response.

    Coefficients satisfy ``rho_i = sqrt(h_i) rho`` where ``rho`` is the
    single-user response to the received power ``q = h1 P1 + h2 P2``.
    Returns ``(rho1, rho2, profile)``; ``profile.rho`` is the unit-gain
    coefficient.
    """
    P1, P2 = _values(P1), _values(P2)
    q = model2.h1 * P1 + model2.h2 * P2
    r, sig, J, lam, slack = received_power_response(model2.w.ravel(), q.ravel(), PJ, cfg)
    shape = model2.shape
    r, sig, J = r.reshape(shape), sig.reshape(shape), J.reshape(shape)
    r = np.where(q > 0, r, -1.0)
    rho1 = np.sqrt(model2.h1) * r
    rho2 = np.sqrt(model2.h2) * r
    return rho1, rho2, CorrelatedJamProfile(r, sig, J, lam, slack)


def correlated_capacity(h, w, P, rho, sigmaNJ2, sigmaN2: float = 0.0) -> float:
    """``0.5 E[ln(1 + (sqrt h + rho)^2 P / (sigma_N^2 + sigma_NJ^2))]``.

    A state whose signal is fully cancelled contributes zero even without
    noise; a surviving signal over zero noise makes the capacity infinite.
    """
    h, P = np.asarray(h, dtype=float), np.asarray(P, dtype=float)
    sig = (np.sqrt(h) + np.asarray(rho)) ** 2 * P
    noise = sigmaN2 + np.asarray(sigmaNJ2, dtype=float)
    sig = np.where(sig <= 1e-15 * np.maximum(h * P, 1e-300), 0.0, sig)
    with np.errstate(divide="ignore", invalid="ignore"):
        per = np.where(sig > 0, np.where(noise > 0, 0.5 * np.log1p(sig / noise), np.inf), 0.0)
    from .numerics import expect
    return expect(np.asarray(w).ravel(), per.ravel(), infinite_aware=True)


def capacity_against_best_response(w, q, PJ: float, cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Capacity for received powers ``q`` once the jammer best-responds:
    ``0.5 E[1{q > 1/lam} ln(lam q)]``."""
    w = np.asarray(w).ravel()
    q = np.asarray(q, dtype=float).ravel()
    _, _, _, lam, _ = received_power_response(w, q, PJ, cfg)
    if lam == 0:
        return 0.0
    on = q * lam > 1
    return 0.5 * float(np.dot(w[on], np.log(lam * q[on])))


def maxmin_user(model: FadingModel, Pbar: float, PJ: float,
                capacity_variant: str = "derived",
                cfg: ToleranceConfig = DEFAULT_TOL) -> MaxMinSolution:
    """Max-min user allocation against a best-responding correlated jammer.

    The user transmits ``1/mu`` above ``h* = PJ/Pbar`` and the jammer answers
    with ``1/lam`` on the same states, where
    ``mu Pbar = lam PJ = Pr(h > h*)``.  The capacity is
    ``0.5 E[1{h > h*} ln(lam h P)]``; ``capacity_variant="printed"`` uses
    ``sqrt(h)`` in place of ``h`` inside the log for comparison.
    """
    if not (Pbar > 0 and PJ > 0):
        raise ValueError("Pbar and PJ must be positive")
    if capacity_variant not in ("derived", "printed"):
        raise ValueError(f"unknown capacity variant {capacity_variant!r}")
    thr = PJ / Pbar
    pr = float(model.sf(thr))
    if pr <= 0:
        raise NoTransmissionError(f"Pr(h > {thr}) = 0: no state can beat the jammer")
    mu, lam = pr / Pbar, pr / PJ
    grid = model.with_breakpoints(thr)
    h = grid.h
    on = h > thr
    P = np.where(on, 1.0 / mu, 0.0)
    gain = h if capacity_variant == "derived" else np.sqrt(h)
    per = np.where(on, 0.5 * np.log(np.where(on, lam * gain * P, 1.0)), 0.0)
    cap = grid.expect(per)
    user = PowerProfile(P, mu, grid.expect(P), Pbar)
    jam = jammer_best_response(grid, user, PJ, cfg)
    return MaxMinSolution(thr, 1.0 / mu, 1.0 / lam, lam, mu, cap, pr, grid, user, jam)


# ---------------------------------------------------------------------------
# two users


@dataclass
class MaxMinTwoUserSolution:
    thresholds: tuple[float, float]
    user_power_levels: tuple[float, float]
    jam_power_level: float
    lam: float
    mu1: float
    mu2: float
    capacity_nats: float
    grid_capacity_nats: float
    activity_probability: dict
    constraint_residuals: dict
    user1: PowerProfile = field(repr=False, default=None)
    user2: PowerProfile = field(repr=False, default=None)
    jammer: CorrelatedJamProfile = field(repr=False, default=None)
    rho1: np.ndarray = field(repr=False, default=None)
    rho2: np.ndarray = field(repr=False, default=None)
    active: np.ndarray = field(repr=False, default=None)


def _assign(h1, h2, t1, t2):
    """Active user per state: 1 or 2, 0 when nobody beats the jammer."""
    s1 = h1 / t1 if math.isfinite(t1) else np.zeros_like(h1)
    s2 = h2 / t2 if math.isfinite(t2) else np.zeros_like(h2)
    return np.where((s1 >= s2) & (s1 > 1), 1, np.where((s2 > s1) & (s2 > 1), 2, 0))


def _activity_exact(law1: FadingModel, law2: FadingModel, t1: float, t2: float):
    """``Pr(A_1), Pr(A_2)`` with ``A_i = {h_i/t_i > max(h_j/t_j, 1)}``."""
    def one(la, ta, lb, tb):
        if not math.isfinite(ta):
            return 0.0
        if not math.isfinite(tb):
            return float(la.sf(ta))
        f = lambda x: float(la.pdf(x) * lb.cdf(x * tb / ta))
        val, _ = integrate.quad(f, ta, math.inf, epsabs=1e-15, epsrel=1e-12, limit=500)
        return val
    return one(law1, t1, law2, t2), one(law2, t2, law1, t1)


def _capacity_exact(law1, law2, t1, t2):
    def one(la, ta, lb, tb):
        if not math.isfinite(ta):
            return 0.0
        F = (lambda x: 1.0) if not math.isfinite(tb) else (lambda x: float(lb.cdf(x * tb / ta)))
        f = lambda x: math.log(x / ta) * float(la.pdf(x)) * F(x)
        val, _ = integrate.quad(f, ta, math.inf, epsabs=1e-15, epsrel=1e-12, limit=500)
        return val
    return 0.5 * (one(law1, t1, law2, t2) + one(law2, t2, law1, t1))


def maxmin_two_user(model2: TwoUserFadingModel, Pbar1: float, Pbar2: float, PJ: float,
                    cfg: ToleranceConfig = DEFAULT_TOL) -> MaxMinTwoUserSolution:
    """Two-user max-min allocation against a best-responding correlated
    jammer.

    User ``i`` sends a flat level ``L_i = Pbar_i / Pr(A_i)`` on
    ``A_i = {h_i/t_i > max(h_j/t_j, 1)}``; the jammer answers with
    ``1/lam = PJ / (Pr(A_1) + Pr(A_2))`` there.  The per-state capacity is
    ``0.5 ln(h_i/t_i)``, and the thresholds solve the fixed point
    ``t_i = Pr(A_i) PJ / ((Pr(A_1) + Pr(A_2)) Pbar_i)``, which is a
    stationary point of the capacity over partitions.  Ties go to user 1.

    Thresholds come from the continuous laws; the grid profile uses the
    grid masses of the activity sets, so the grid constraints bind exactly.
    """
    if Pbar1 < 0 or Pbar2 < 0 or Pbar1 + Pbar2 <= 0 or not PJ > 0:
        raise ValueError("need non-negative budgets, one positive, and PJ > 0")
    law1, law2 = model2.law1, model2.law2
    if Pbar2 == 0 or Pbar1 == 0:
        first = Pbar2 == 0
        single = maxmin_user(law1 if first else law2, Pbar1 if first else Pbar2, PJ, cfg=cfg)
        t1, t2 = (single.threshold, math.inf) if first else (math.inf, single.threshold)
        cap = single.capacity_nats
        a1, a2 = (single.active_probability, 0.0) if first else (0.0, single.active_probability)
        res = {"user1": 0.0, "user2": 0.0, "fixed_point": 0.0}
    else:
        if not model2.continuous:
            raise ValueError("two-user max-min calibration needs continuous laws")

        def resid(z):
            t1, t2 = np.exp(z)
            a1, a2 = _activity_exact(law1, law2, t1, t2)
            a = a1 + a2
            return [math.log(a1 * PJ / (a * Pbar1)) - z[0], math.log(a2 * PJ / (a * Pbar2)) - z[1]]

        # plain iteration is a contraction here in practice; polish with a root solve
        z = np.log([PJ / (Pbar1 + Pbar2)] * 2)
        for _ in range(200):
            r = resid(z)
            z_new = z + np.asarray(r)
            if np.max(np.abs(z_new - z)) < 1e-13:
                z = z_new
                break
            z = z_new
        sol = optimize.root(lambda z: resid(z), z, method="hybr", options={"xtol": 1e-14})
        if np.max(np.abs(resid(sol.x))) <= np.max(np.abs(resid(z))):
            z = sol.x
        fp = float(np.max(np.abs(resid(z))))
        if fp > 1e-9:
            raise ConvergenceError("threshold fixed point did not converge",
                                   best=tuple(np.exp(z)), residuals={"fixed_point": fp})
        t1, t2 = map(float, np.exp(z))
        a1, a2 = _activity_exact(law1, law2, t1, t2)
        cap = _capacity_exact(law1, law2, t1, t2)
        res = {"fixed_point": fp}

    act = _assign(model2.h1, model2.h2, t1, t2)
    g1 = model2.expect(act == 1)
    g2 = model2.expect(act == 2)
    if g1 + g2 <= 0:
        raise ResolutionError("no grid state falls in an activity region")
    L1 = Pbar1 / g1 if g1 > 0 else 0.0
    L2 = Pbar2 / g2 if g2 > 0 else 0.0
    P1 = np.where(act == 1, L1, 0.0)
    P2 = np.where(act == 2, L2, 0.0)
    rho1, rho2, jam = jammer_best_response_two_user(model2, P1, P2, PJ, cfg)
    u1 = PowerProfile(P1, 1 / L1 if L1 else math.inf, model2.expect(P1), Pbar1)
    u2 = PowerProfile(P2, 1 / L2 if L2 else math.inf, model2.expect(P2), Pbar2)
    res["user1"] = abs(u1.mean_power - Pbar1) / Pbar1 if Pbar1 else 0.0
    res["user2"] = abs(u2.mean_power - Pbar2) / Pbar2 if Pbar2 else 0.0
    res["jammer"] = abs(model2.expect(jam.total) - PJ) / PJ
    q = model2.h1 * P1 + model2.h2 * P2
    grid_cap = capacity_against_best_response(model2.w, q, PJ, cfg)
    lam = (a1 + a2) / PJ
    levels = (Pbar1 / a1 if a1 else 0.0, Pbar2 / a2 if a2 else 0.0)
    return MaxMinTwoUserSolution(
        (t1, t2), levels, 1 / lam, lam,
        1 / levels[0] if levels[0] else math.inf, 1 / levels[1] if levels[1] else math.inf,
        cap, grid_cap, {"user1": a1, "user2": a2}, res, u1, u2, jam, rho1, rho2, act)


# ---------------------------------------------------------------------------
# non-equilibrium witness


@dataclass
class NoEquilibriumWitness:
    delta_c: float
    reverse_delta_c: float
    baseline_capacity: float
    deviated_capacity: float
    u_plus: float
    u_minus: float
    threshold: float
    epsilon: float
    sigma_reg: float
    profitable: bool


def demonstrate_no_equilibrium(model: FadingModel, Pbar: float, PJ: float, epsilon: float,
                               sigma_reg: float = 1e-6,
                               cfg: ToleranceConfig = DEFAULT_TOL) -> NoEquilibriumWitness:
    """Profitable user deviation against the frozen max-min jammer.

    The jammer keeps its per-state coefficients and noise powers from the
    max-min response; where it is silent it stays silent.  ``epsilon`` power
    is taken from the first state above ``h*`` and moved, budget-neutrally,
    to the last state below it.  ``reverse_delta_c`` is the change from
    moving it back.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if not sigma_reg > 0:
        raise ValueError("sigma_reg must be positive")
    sol = maxmin_user(model, Pbar, PJ, cfg=cfg)
    grid, thr = sol.model, sol.threshold
    h, w = grid.h, grid.w
    above = np.flatnonzero(h > thr)
    below = np.flatnonzero(h < thr)
    if above.size == 0 or below.size == 0:
        raise ResolutionError("no grid state on one side of the threshold")
    ip, im = int(above[0]), int(below[-1])
    if abs(h[ip] - thr) > 0.01 * thr or abs(h[im] - thr) > 0.01 * thr:
        raise ResolutionError(f"nearest states {h[im]!r}, {h[ip]!r} are not within 1% of {thr!r}")
    P0 = sol.user.values
    if epsilon > P0[ip]:
        raise ValueError("epsilon exceeds the power at the donor state")
    on = P0 > 0
    rho = np.where(on, sol.jammer.rho, 0.0)
    sig = np.where(on, sol.jammer.sigmaNJ2, 0.0)
    P1 = P0.copy()
    P1[ip] -= epsilon
    P1[im] += epsilon * w[ip] / w[im]
    c0 = correlated_capacity(h, w, P0, rho, sig, sigma_reg)
    c1 = correlated_capacity(h, w, P1, rho, sig, sigma_reg)
    dc = c1 - c0
    return NoEquilibriumWitness(dc, -dc, c0, c1, float(h[ip]), float(h[im]), thr,
                                epsilon, sigma_reg, dc > 0)


# ---------------------------------------------------------------------------
# brute-force oracles


def maxmin_oracle(model: FadingModel, Pbar: float, PJ: float, seed: int = 0,
                  maxiter: int = 400, cfg: ToleranceConfig = DEFAULT_TOL):
    """Search all user profiles on a small discrete law for the best
    capacity against the jammer best response.

    Profiles are ``Pbar * x / E[x]`` for ``x`` in the unit box, searched by
    differential evolution and then polished.  Returns ``(P, capacity)``.
    """
    h, w = model.h, model.w
    if h.size > 16:
        raise ValueError("oracle is meant for at most 16 states")

    def profile(x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, None)
        s = float(np.dot(w, x))
        return Pbar * x / s if s > 0 else np.full_like(h, Pbar)

    def neg(x):
        return -capacity_against_best_response(w, h * profile(x), PJ, cfg)

    res = optimize.differential_evolution(neg, [(0.0, 1.0)] * h.size, seed=seed,
                                          maxiter=maxiter, tol=1e-12, polish=True,
                                          init="sobol", updating="immediate")
    P = profile(res.x)
    return P, -float(res.fun)


def maxmin_two_user_oracle(model2: TwoUserFadingModel, Pbar1: float, Pbar2: float,
                           PJ: float, n_starts: int = 8, seed: int = 0,
                           cfg: ToleranceConfig = DEFAULT_TOL):
    """Multi-start local search over both users' full profiles on a small
    joint grid.

    Each profile is a weighted softmax of free logits so the budgets hold
    exactly; starts are random.  Returns ``(P1, P2, capacity)`` of the best
    start.
    """
    w = model2.w.ravel()
    h1, h2 = model2.h1.ravel(), model2.h2.ravel()
    n = w.size
    if n > 256:
        raise ValueError("oracle is meant for at most 256 joint states")

    def split(z):
        out = []
        for zi, pb in ((z[:n], Pbar1), (z[n:], Pbar2)):
            e = np.exp(zi - np.max(zi))
            out.append(pb * e / float(np.dot(w, e)))
        return out

    def neg(z):
        P1, P2 = split(z)
        return -capacity_against_best_response(w, h1 * P1 + h2 * P2, PJ, cfg)

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_starts):
        z0 = rng.normal(scale=3.0, size=2 * n)
        res = optimize.minimize(neg, z0, method="L-BFGS-B",
                                options={"maxiter": 5000, "maxfun": 10 ** 6})
        res = optimize.minimize(neg, res.x, method="Powell",
                                options={"maxiter": 20000, "xtol": 1e-8, "ftol": 1e-12})
        if best is None or res.fun < best.fun:
            best = res
    P1, P2 = split(best.x)
    return P1, P2, -float(best.fun)
