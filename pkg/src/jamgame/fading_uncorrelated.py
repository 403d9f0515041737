"""Fading channels with a jammer that is uncorrelated with the users.

Covers the blind jammer (no channel state at the transmitters), the joint
user/jammer power allocation when both know the channel state, and the
two-user reduction in which only the user with the larger normalised gain
transmits.  Multipliers follow the convention of the KKT conditions written
for ``ln`` (not ``0.5 ln``): at an active state ``h / (noise + hP) = lambda``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .fading import FadingModel, PowerProfile, TwoUserFadingModel
from .numerics import DEFAULT_TOL, ConvergenceError, ToleranceConfig, bisect

__all__ = [
    "NoTransmissionError",
    "JointCSISolution",
    "TwoUserCSISolution",
    "BlindJammerReport",
    "ComplexGaussianFading",
    "waterfill",
    "waterfill_blind_jammer",
    "uncorrelated_jammer_response",
    "joint_csi_profiles",
    "solve_joint_csi_single",
    "joint_csi_kkt_residuals",
    "alternating_best_response",
    "solve_joint_csi_two_user",
    "two_user_kkt_residuals",
    "capacity_fading_uncorrelated",
    "blind_jammer_objective",
    "verify_blind_jammer_zero_correlation",
]


class NoTransmissionError(ValueError):
    """No state of the law can carry any power."""


def _log_bisect(f, lo, hi, cfg):
    """Bisection in ``ln x`` after expanding ``[lo, hi]`` until ``f`` changes
    sign; ``f`` must be decreasing."""
    for _ in range(400):
        if f(lo) > 0:
            break
        lo /= 4
    else:
        raise ConvergenceError("could not bracket from below", best=lo)
    for _ in range(400):
        if f(hi) < 0:
            break
        hi *= 4
    else:
        raise ConvergenceError("could not bracket from above", best=hi)
    return math.exp(bisect(lambda t: f(math.exp(t)), math.log(lo), math.log(hi), cfg))


def waterfill(h: np.ndarray, w: np.ndarray, noise, Pbar: float,
              cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """``P(h) = (level - noise/h)^+`` with ``E[P] = Pbar``.

    ``noise`` may vary per state.  Returns the allocation and the water
    level ``1/lambda``.
    """
    h = np.asarray(h, dtype=float)
    noise = np.broadcast_to(np.asarray(noise, dtype=float), h.shape)
    live = (h > 0) & (w > 0)
    if not np.any(live):
        raise NoTransmissionError("all channel gains are zero")
    inv = np.full(h.shape, np.inf)
    inv[live] = noise[live] / h[live]

    def alloc(level):
        return np.maximum(level - inv, 0.0)

    def resid(level):
        return float(np.dot(w, alloc(level))) - Pbar

    lo = float(np.min(inv[live]))
    hi = float(np.max(inv[live])) + Pbar / float(np.sum(w[live]))
    level = bisect(resid, lo, hi, cfg)
    return alloc(level), level


def waterfill_blind_jammer(model: FadingModel, Pbar: float, sigmaN2: float,
                           gamma: float, PJ: float,
                           cfg: ToleranceConfig = DEFAULT_TOL) -> PowerProfile:
    """User allocation against a jammer that spreads ``PJ`` as noise over
    every state (it does not know the channel)."""
    if Pbar <= 0:
        raise ValueError("Pbar must be positive")
    p, level = waterfill(model.h, model.w, sigmaN2 + gamma * PJ, Pbar, cfg)
    return PowerProfile(p, 1.0 / level, model.expect(p), Pbar)


def uncorrelated_jammer_response(h: np.ndarray, w: np.ndarray, P: np.ndarray,
                                 PJ: float, sigmaN2: float, gamma: float,
                                 cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Jammer noise allocation minimising ``E[ln(1 + hP/(sigma^2 + gamma J))]``
    for a fixed user allocation.  Returns ``(J, mu)``."""
    hp = np.asarray(h) * np.asarray(P)
    # marginal damage of the first unit of jamming at each state
    slope0 = gamma * hp / (sigmaN2 * (sigmaN2 + hp))
    mu_max = float(np.max(np.where(w > 0, slope0, 0.0)))
    if PJ <= 0 or mu_max <= 0:
        return np.zeros_like(hp), mu_max

    def alloc(mu):
        c = gamma * hp / mu
        den = hp + np.sqrt(hp * hp + 4 * c)
        x = np.divide(2 * c, den, out=np.zeros_like(hp), where=den > 0)
        return np.maximum((x - sigmaN2) / gamma, 0.0)

    mu = _log_bisect(lambda m: float(np.dot(w, alloc(m))) - PJ, mu_max / 2, mu_max, cfg)
    return alloc(mu), mu


@dataclass
class JointCSISolution:
    user: PowerProfile
    jammer: PowerProfile
    lam: float
    mu: float
    threshold: float
    capacity_nats: float
    h: np.ndarray = field(repr=False, default=None)


def joint_csi_profiles(h, lam: float, mu: float, sigmaN2: float, gamma: float):
    """User and jammer allocations for given multipliers, plus the jamming
    threshold.

    Below ``h* = sigma^2 gamma lam / (gamma - sigma^2 mu)`` the jammer is
    silent and the user water-fills against ``sigma^2/h``; above it both are
    active with ``P = h / (lam (h + gamma lam/mu))`` and
    ``J = h / (mu (h + gamma lam/mu)) - sigma^2/gamma``.  Both pieces of
    ``P`` equal ``sigma^2 mu / (gamma lam)`` at the threshold.
    """
    h = np.asarray(h, dtype=float)
    if gamma > sigmaN2 * mu:
        thr = sigmaN2 * gamma * lam / (gamma - sigmaN2 * mu)
    else:
        thr = math.inf
    with np.errstate(divide="ignore"):
        wf = np.maximum(1.0 / lam - np.where(h > 0, sigmaN2 / np.where(h > 0, h, 1.0), np.inf), 0.0)
    k = gamma * lam / mu if mu > 0 else math.inf
    above = h >= thr
    P = np.where(above, h / (lam * (h + k)), wf)
    J = np.where(above, np.maximum(h / (mu * (h + k)) - sigmaN2 / gamma, 0.0), 0.0)
    return P, J, thr


def capacity_fading_uncorrelated(model, user, jammer, sigmaN2: float,
                                 gamma: float = 1.0) -> float:
    """``0.5 E[ln(1 + h P / (sigma^2 + gamma J))]`` in nats."""
    P = user.values if isinstance(user, PowerProfile) else np.asarray(user)
    J = jammer.values if isinstance(jammer, PowerProfile) else np.asarray(jammer)
    noise = sigmaN2 + gamma * J
    sig = model.h * P
    with np.errstate(divide="ignore", invalid="ignore"):
        per = np.where(sig > 0, 0.5 * np.log1p(sig / noise), 0.0)
    return model.expect(per)


def solve_joint_csi_single(model: FadingModel, Pbar: float, PJ: float,
                           sigmaN2: float, gamma: float,
                           cfg: ToleranceConfig = DEFAULT_TOL) -> JointCSISolution:
    """Saddle-point allocations of a user and an uncorrelated jammer that
    both know the fading state.

    The calibration solves, for each trial ``mu``, the user constraint for
    ``lam`` (always bracketed since ``E[P]`` falls from infinity to zero in
    ``lam``), then adjusts ``mu`` until the jammer constraint binds.
    """
    if Pbar <= 0 or PJ < 0 or sigmaN2 <= 0 or gamma <= 0:
        raise ValueError("need Pbar > 0, PJ >= 0, sigmaN2 > 0, gamma > 0")
    h, w = model.h, model.w
    if PJ == 0:
        user = waterfill_blind_jammer(model, Pbar, sigmaN2, gamma, 0.0, cfg)
        _, mu = uncorrelated_jammer_response(h, w, user.values, 0.0, sigmaN2, gamma, cfg)
        jam = PowerProfile(np.zeros_like(h), mu, 0.0, 0.0)
        cap = capacity_fading_uncorrelated(model, user, jam, sigmaN2, gamma)
        return JointCSISolution(user, jam, user.multiplier, mu, math.inf, cap, h)

    def lam_for(mu):
        def resid(lam):
            P, _, _ = joint_csi_profiles(h, lam, mu, sigmaN2, gamma)
            return float(np.dot(w, P)) - Pbar
        return _log_bisect(resid, 0.5 / Pbar, 2.0 / Pbar, cfg)

    mu_cap = gamma / sigmaN2

    def jam_resid(t):
        mu = mu_cap / (1.0 + math.exp(-t))
        lam = lam_for(mu)
        _, J, _ = joint_csi_profiles(h, lam, mu, sigmaN2, gamma)
        return float(np.dot(w, J)) - PJ

    # mu = mu_cap * logistic(t) keeps mu inside (0, gamma/sigma^2)
    lo, hi = -8.0, 8.0
    while jam_resid(lo) < 0:
        lo -= 8.0
        if lo < -700:
            raise ConvergenceError("jammer constraint cannot be met from below")
    while jam_resid(hi) > 0:
        hi += 8.0
        if hi > 60:
            raise ConvergenceError("jammer constraint cannot be met from above")
    t = bisect(jam_resid, lo, hi, cfg)
    mu = mu_cap / (1.0 + math.exp(-t))
    lam = lam_for(mu)
    P, J, thr = joint_csi_profiles(h, lam, mu, sigmaN2, gamma)
    user = PowerProfile(P, lam, model.expect(P), Pbar)
    jam = PowerProfile(J, mu, model.expect(J), PJ)
    resid = {"user": abs(user.mean_power - Pbar) / Pbar, "jammer": abs(jam.mean_power - PJ) / PJ}
    if max(resid.values()) > 1e-6:
        raise ConvergenceError("multiplier calibration did not bind both constraints",
                               best=(lam, mu), residuals=resid)
    cap = capacity_fading_uncorrelated(model, user, jam, sigmaN2, gamma)
    return JointCSISolution(user, jam, lam, mu, thr, cap, h)


def joint_csi_kkt_residuals(model: FadingModel, sol: JointCSISolution,
                            sigmaN2: float, gamma: float) -> dict:
    """Largest relative violation of each KKT condition over the grid.

    Stationarity is checked where the power is positive, the sign condition
    of the slack variable where it is zero.
    """
    h, P, J = model.h, sol.user.values, sol.jammer.values
    noise = sigmaN2 + gamma * J
    u_grad = h / (noise + h * P)
    j_grad = gamma * h * P / (noise * (noise + h * P))
    live = model.w > 0
    pos_p, pos_j = live & (P > 0), live & (J > 0)
    return {
        "user_stationarity": float(np.max(np.abs(u_grad[pos_p] - sol.lam), initial=0.0)) / sol.lam,
        "user_slackness": float(np.max(u_grad[live & ~pos_p] - sol.lam, initial=0.0)) / sol.lam,
        "jammer_stationarity": float(np.max(np.abs(j_grad[pos_j] - sol.mu), initial=0.0)) / sol.mu,
        "jammer_slackness": float(np.max(j_grad[live & ~pos_j] - sol.mu, initial=0.0)) / sol.mu,
    }


def alternating_best_response(model: FadingModel, Pbar: float, PJ: float,
                              sigmaN2: float, gamma: float, max_iter: int = 200,
                              tol: float = 1e-9, damping: float = 0.3,
                              cfg: ToleranceConfig = DEFAULT_TOL):
    """Alternate exact best responses from a silent jammer.

    Each round the user water-fills against the current jammer, then the
    jammer responds to that user allocation.  ``damping < 1`` averages the
    new jammer allocation with the previous one.  Returns
    ``(P, J, iterations, history)`` where ``history`` holds the sup-norm
    change per round.
    """
    h, w = model.h, model.w
    J = np.zeros_like(h)
    P = np.zeros_like(h)
    history = []
    for it in range(1, max_iter + 1):
        P_new, _ = waterfill(h, w, sigmaN2 + gamma * J, Pbar, cfg)
        J_br, _ = uncorrelated_jammer_response(h, w, P_new, PJ, sigmaN2, gamma, cfg)
        J_new = damping * J_br + (1 - damping) * J
        change = max(float(np.max(np.abs(P_new - P))), float(np.max(np.abs(J_new - J))))
        history.append(change)
        P, J = P_new, J_new
        if change < tol:
            return P, J, it, history
    return P, J, max_iter, history


# ---------------------------------------------------------------------------
# two users


@dataclass
class TwoUserCSISolution:
    user1: PowerProfile
    user2: PowerProfile
    jammer: PowerProfile
    lambda1: float
    lambda2: float
    mu: float
    threshold: float
    capacity_nats: float
    constraint_residuals: dict
    active: np.ndarray = field(repr=False, default=None)
    activity_probability: dict = field(default_factory=dict)


def _received_alloc(x, mu: float, sigmaN2: float):
    """Received user power ``q`` and jammer power ``J`` at effective gain
    ``x = max(h1/lambda1, h2/lambda2)``."""
    x = np.asarray(x, dtype=float)
    thr = sigmaN2 / (1 - sigmaN2 * mu) if sigmaN2 * mu < 1 else math.inf
    above = x >= thr
    q = np.where(above, x / (1 + 1 / (x * mu)) if mu > 0 else x, np.maximum(x - sigmaN2, 0.0))
    J = np.where(above, np.maximum(1 / (mu * (1 + 1 / (x * mu))) - sigmaN2, 0.0), 0.0)
    return q, J, thr


def _two_user_moments(law1: FadingModel, law2: FadingModel, lam1: float, lam2: float,
                      mu: float, sigmaN2: float) -> tuple[float, float, float]:
    """Exact ``E[P1], E[P2], E[J]`` for continuous independent laws.

    The winner's effective gain ``x`` has density
    ``lam1 f1(lam1 x) F2(lam2 x) + lam2 f2(lam2 x) F1(lam1 x)``; user ``i``
    sends ``q(x) / h_i = q(x) / (lam_i x)``.
    """
    thr = sigmaN2 / (1 - sigmaN2 * mu) if sigmaN2 * mu < 1 else math.inf

    def p1(x):
        q, _, _ = _received_alloc(x, mu, sigmaN2)
        return float(q / x * law1.pdf(lam1 * x) * law2.cdf(lam2 * x))

    def p2(x):
        q, _, _ = _received_alloc(x, mu, sigmaN2)
        return float(q / x * law2.pdf(lam2 * x) * law1.cdf(lam1 * x))

    def jm(x):
        _, J, _ = _received_alloc(x, mu, sigmaN2)
        dens = (lam1 * law1.pdf(lam1 * x) * law2.cdf(lam2 * x)
                + lam2 * law2.pdf(lam2 * x) * law1.cdf(lam1 * x))
        return float(J * dens)

    def integral(f, pieces):
        total = 0.0
        for a, b in pieces:
            if b <= a:
                continue
            val, _ = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-12, limit=500)
            total += val
        return total

    scale = max(law1.mean / lam1, law2.mean / lam2)
    cuts = sorted({sigmaN2, min(thr, 1e300)} | {sigmaN2 + k * scale for k in (1, 4, 16)})
    pieces = list(zip(cuts[:-1], cuts[1:])) + [(cuts[-1], math.inf)]
    pieces = [(a, b) for a, b in pieces if a >= sigmaN2]
    jp = [(a, b) for a, b in pieces if a >= thr]
    mp1 = integral(p1, [(max(a, sigmaN2), b) for a, b in pieces])
    mp2 = integral(p2, [(max(a, sigmaN2), b) for a, b in pieces])
    mj = integral(jm, jp) if math.isfinite(thr) else 0.0
    return mp1, mp2, mj


def solve_joint_csi_two_user(model2: TwoUserFadingModel, Pbar1: float, Pbar2: float,
                             PJ: float, sigmaN2: float,
                             cfg: ToleranceConfig = DEFAULT_TOL) -> TwoUserCSISolution:
    """Two users and an uncorrelated jammer, all knowing ``(h1, h2)``.

    The jammer link gain is one.  At each state only the user with the
    larger ``h_i / lambda_i`` transmits (ties go to user 1); allocations are
    those of one user seen through the effective gain
    ``x = max(h1/lambda1, h2/lambda2)``: received power ``q(x)`` is
    ``(x - sigma^2)^+`` below the jamming threshold
    ``sigma^2 / (1 - sigma^2 mu)`` and ``x / (1 + 1/(x mu))`` above it.

    Multipliers are calibrated on the continuous law through
    one-dimensional integrals over ``x``; the joint grid is used for the
    returned per-state profiles.
    """
    if Pbar1 < 0 or Pbar2 < 0 or Pbar1 + Pbar2 <= 0 or PJ < 0 or sigmaN2 <= 0:
        raise ValueError("need non-negative budgets, a positive user budget and sigmaN2 > 0")
    if Pbar2 == 0 or Pbar1 == 0:
        return _two_user_degenerate(model2, Pbar1, Pbar2, PJ, sigmaN2, cfg)
    if not model2.continuous:
        raise ValueError("two-user calibration needs continuous fading laws")
    law1, law2 = model2.law1, model2.law2

    # warm start: each user alone with half the jammer
    s1 = solve_joint_csi_single(law1.with_breakpoints(), Pbar1, PJ / 2 if PJ > 0 else 0.0,
                                sigmaN2, 1.0, cfg)
    s2 = solve_joint_csi_single(law2.with_breakpoints(), Pbar2, PJ / 2 if PJ > 0 else 0.0,
                                sigmaN2, 1.0, cfg)
    mu0 = min(s1.mu, s2.mu) if PJ > 0 else 1.0 / sigmaN2
    if PJ == 0:
        # silent jammer: mu sits at its cap and only the user budgets remain
        def residuals(z):
            lam1, lam2 = np.exp(z)
            e1, e2, _ = _two_user_moments(law1, law2, lam1, lam2, 1.0 / sigmaN2, sigmaN2)
            return [e1 / Pbar1 - 1, e2 / Pbar2 - 1]

        z0 = np.log([s1.lam, s2.lam])
    else:
        def residuals(z):
            lam1, lam2, mu = np.exp(z)
            e1, e2, ej = _two_user_moments(law1, law2, lam1, lam2, mu, sigmaN2)
            return [e1 / Pbar1 - 1, e2 / Pbar2 - 1, ej / PJ - 1]

        z0 = np.log([s1.lam, s2.lam, mu0])
    sol = optimize.root(residuals, z0, method="hybr", options={"xtol": 1e-13})
    r = np.abs(residuals(sol.x))
    if not np.all(r <= 1e-7):
        sol = optimize.root(residuals, z0, method="lm", options={"xtol": 1e-14, "ftol": 1e-14})
        r = np.abs(residuals(sol.x))
    mult = np.exp(sol.x)
    lam1, lam2 = float(mult[0]), float(mult[1])
    mu = float(mult[2]) if PJ > 0 else 1.0 / sigmaN2
    res = {"user1": float(r[0]), "user2": float(r[1]), "jammer": float(r[2]) if PJ > 0 else 0.0}
    if max(res.values()) > 1e-5:
        raise ConvergenceError("two-user multiplier calibration failed",
                               best=(lam1, lam2, mu), residuals=res)
    out = _two_user_on_grid(model2, lam1, lam2, mu, sigmaN2, Pbar1, Pbar2, PJ, res)
    out.activity_probability = _activity_probability(law1, law2, lam1, lam2, sigmaN2)
    return out


def _activity_probability(law1, law2, lam1, lam2, sigmaN2):
    """Exact ``Pr(user i transmits)`` from the continuous laws."""
    def share(f_a, lam_a, F_b, lam_b):
        val, _ = integrate.quad(lambda x: float(lam_a * f_a(lam_a * x) * F_b(lam_b * x)),
                                sigmaN2, math.inf, epsabs=1e-14, epsrel=1e-12, limit=500)
        return val
    return {"user1": share(law1.pdf, lam1, law2.cdf, lam2),
            "user2": share(law2.pdf, lam2, law1.cdf, lam1)}


def _two_user_on_grid(model2, lam1, lam2, mu, sigmaN2, Pbar1, Pbar2, PJ, res):
    h1, h2 = model2.h1, model2.h2
    x1 = h1 / lam1 if math.isfinite(lam1) else np.zeros_like(h1)
    x2 = h2 / lam2 if math.isfinite(lam2) else np.zeros_like(h2)
    first = x1 >= x2
    x = np.where(first, x1, x2)
    q, J, thr = _received_alloc(x, mu, sigmaN2)
    with np.errstate(divide="ignore", invalid="ignore"):
        P1 = np.where(first & (q > 0), q / h1, 0.0)
        P2 = np.where(~first & (q > 0), q / h2, 0.0)
    active = np.where(q > 0, np.where(first, 1, 2), 0)
    u1 = PowerProfile(P1, lam1, model2.expect(P1), Pbar1)
    u2 = PowerProfile(P2, lam2, model2.expect(P2), Pbar2)
    jam = PowerProfile(J, mu, model2.expect(J), PJ)
    with np.errstate(divide="ignore", invalid="ignore"):
        per = np.where(q > 0, 0.5 * np.log1p(q / (sigmaN2 + J)), 0.0)
    cap = model2.expect(per)
    return TwoUserCSISolution(u1, u2, jam, lam1, lam2, mu, thr, cap, res, active)


def _two_user_degenerate(model2, Pbar1, Pbar2, PJ, sigmaN2, cfg):
    """One silent user: the other faces the single-user game on its own
    marginal law, evaluated on the joint grid."""
    if Pbar2 == 0:
        law, pbar = model2.law1, Pbar1
    else:
        law, pbar = model2.law2, Pbar2
    single = solve_joint_csi_single(law, pbar, PJ, sigmaN2, 1.0, cfg)
    grid_h1 = model2.h1 if Pbar2 == 0 else model2.h2
    P, J, thr = joint_csi_profiles(grid_h1, single.lam, single.mu, sigmaN2, 1.0)
    zero = np.zeros(model2.shape)
    res = {"user1": 0.0, "user2": 0.0, "jammer": 0.0}
    if Pbar2 == 0:
        u1 = PowerProfile(P, single.lam, model2.expect(P), Pbar1)
        u2 = PowerProfile(zero, math.inf, 0.0, 0.0)
        lam1, lam2 = single.lam, math.inf
    else:
        u1 = PowerProfile(zero, math.inf, 0.0, 0.0)
        u2 = PowerProfile(P, single.lam, model2.expect(P), Pbar2)
        lam1, lam2 = math.inf, single.lam
    jam = PowerProfile(J, single.mu, model2.expect(J), PJ)
    active = np.where(P > 0, 1 if Pbar2 == 0 else 2, 0)
    return TwoUserCSISolution(u1, u2, jam, lam1, lam2, single.mu, thr,
                              single.capacity_nats, res, active)


def two_user_kkt_residuals(model2: TwoUserFadingModel, sol: TwoUserCSISolution,
                           sigmaN2: float) -> dict:
    """Relative KKT violations on the joint grid (jammer gain one)."""
    h1, h2 = model2.h1, model2.h2
    P1, P2, J = sol.user1.values, sol.user2.values, sol.jammer.values
    tot = sigmaN2 + J + h1 * P1 + h2 * P2
    g1, g2 = h1 / tot, h2 / tot
    q = h1 * P1 + h2 * P2
    gj = q / ((sigmaN2 + J) * tot)
    live = model2.w > 0
    out = {}
    for name, grad, P, lam in (("user1", g1, P1, sol.lambda1), ("user2", g2, P2, sol.lambda2)):
        if not math.isfinite(lam):
            out[f"{name}_stationarity"] = out[f"{name}_slackness"] = 0.0
            continue
        on = live & (P > 0)
        out[f"{name}_stationarity"] = float(np.max(np.abs(grad[on] - lam), initial=0.0)) / lam
        out[f"{name}_slackness"] = float(np.max(grad[live & ~on] - lam, initial=0.0)) / lam
    on = live & (J > 0)
    out["jammer_stationarity"] = float(np.max(np.abs(gj[on] - sol.mu), initial=0.0)) / sol.mu
    out["jammer_slackness"] = float(np.max(gj[live & ~on] - sol.mu, initial=0.0)) / sol.mu
    out["both_active"] = int(np.sum((P1 > 0) & (P2 > 0)))
    return out


# ---------------------------------------------------------------------------
# blind jammer with complex fading


@dataclass(frozen=True)
class ComplexGaussianFading:
    """Complex amplitude gains ``H_i ~ CN(mean_i, var_i)``; zero means give
    the circularly-symmetric case."""

    var1: float = 1.0
    var2: float = 1.0
    mean1: complex = 0.0
    mean2: complex = 0.0

    def sample(self, n: int, seed: int, antithetic: bool = True):
        rng = np.random.default_rng(seed)
        m = n // 2 if antithetic else n

        def draw(var):
            z = rng.normal(size=m) + 1j * rng.normal(size=m)
            z *= math.sqrt(var / 2)
            return np.concatenate([z, -z]) if antithetic else z

        return draw(self.var1) + self.mean1, draw(self.var2) + self.mean2


def blind_jammer_objective(H1, H2, rho1, rho2, P1, P2, PJ, sigmaN2, gamma):
    """Sample mean of ``0.5 ln(1 + (|H1 + sqrt(g) rho1|^2 P1 + |H2 + sqrt(g) rho2|^2 P2)
    / (gamma sigma_NJ^2 + sigma^2))`` with the remaining power spent on noise.

    ``rho1`` and ``rho2`` broadcast; infeasible points give ``inf``.
    """
    rho1 = np.asarray(rho1, dtype=float)[..., None]
    rho2 = np.asarray(rho2, dtype=float)[..., None]
    sg = math.sqrt(gamma)
    noise = PJ - rho1 ** 2 * P1 - rho2 ** 2 * P2
    sig = np.abs(H1 + sg * rho1) ** 2 * P1 + np.abs(H2 + sg * rho2) ** 2 * P2
    with np.errstate(invalid="ignore", divide="ignore"):
        val = 0.5 * np.mean(np.log1p(sig / (gamma * np.maximum(noise, 0.0) + sigmaN2)), axis=-1)
    return np.where(noise[..., 0] >= -1e-12, val, np.inf)


@dataclass
class BlindJammerReport:
    passed: bool
    argmin: tuple
    min_value: float
    value_at_zero: float
    cell: tuple
    n_samples: int
    note: str = ""


def verify_blind_jammer_zero_correlation(fading: ComplexGaussianFading, P1: float, P2: float,
                                         PJ: float, sigmaN2: float = 1.0, gamma: float = 1.0,
                                         grid: int = 41, n_samples: int = 100_000,
                                         seed: int = 0) -> BlindJammerReport:
    """Scan the jammer's average objective over real ``(rho1, rho2)``.

    Pass means the grid minimiser is within one cell of ``(0, 0)``.  Samples
    are antithetic, so a zero-mean law is exactly symmetric under ``H -> -H``.
    """
    if PJ == 0:
        H1, H2 = fading.sample(n_samples, seed)
        v = float(blind_jammer_objective(H1, H2, 0.0, 0.0, P1, P2, 0.0, sigmaN2, gamma))
        return BlindJammerReport(True, (0.0, 0.0), v, v, (0.0, 0.0), n_samples,
                                 "no jamming power; only rho = 0 is feasible")
    r1 = math.sqrt(PJ / P1) if P1 > 0 else 0.0
    r2 = math.sqrt(PJ / P2) if P2 > 0 else 0.0
    ax1 = np.linspace(-r1, r1, grid)
    ax2 = np.linspace(-r2, r2, grid)
    H1, H2 = fading.sample(n_samples, seed)
    vals = np.empty((grid, grid))
    for i, a in enumerate(ax1):
        vals[i] = blind_jammer_objective(H1, H2, a, ax2, P1, P2, PJ, sigmaN2, gamma)
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    cell = (float(ax1[1] - ax1[0]) if grid > 1 else 0.0, float(ax2[1] - ax2[0]) if grid > 1 else 0.0)
    am = (float(ax1[i]), float(ax2[j]))
    v0 = float(blind_jammer_objective(H1, H2, 0.0, 0.0, P1, P2, PJ, sigmaN2, gamma))
    passed = bool(abs(am[0]) <= cell[0] * (1 + 1e-9) and abs(am[1]) <= cell[1] * (1 + 1e-9))
    return BlindJammerReport(passed, am, float(vals[i, j]), v0, cell, n_samples)
