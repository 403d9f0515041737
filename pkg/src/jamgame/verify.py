"""Verification suites run by ``jamgame verify``.

Every check returns a name, a pass flag, the measured value and the
tolerance it was held to.  Reports carry no timestamp so that two runs with
the same configuration are byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from .channel import (ChannelParams, EavesdropParams, JammerCorrelationTriple,
                      LinearJammerFull, PowerBudget, equivalent_linear_jammer, lambda_det,
                      snr_full, z1j_feasible_bound, z_transform)
from .config import ScenarioConfig
from .fading import FadingModel
from .fading_correlated import (correlated_capacity, demonstrate_no_equilibrium,
                                jammer_best_response, maxmin_oracle, maxmin_two_user,
                                maxmin_user, received_power_response)
from .fading_uncorrelated import (ComplexGaussianFading, alternating_best_response,
                                  capacity_fading_uncorrelated, joint_csi_kkt_residuals,
                                  joint_csi_profiles, solve_joint_csi_single,
                                  solve_joint_csi_two_user, two_user_kkt_residuals,
                                  uncorrelated_jammer_response, verify_blind_jammer_zero_correlation,
                                  waterfill, waterfill_blind_jammer)
from .nonfading import (eavesdrop_oracle, full_info_oracle, region_boundaries,
                        solve_eavesdrop, solve_full_info, verify_saddle_nonfading)

SUITES = ("nonfading", "fading-uncorrelated", "fading-correlated")
FAULTS = ("closed-form", "maxmin-threshold")


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tol: float
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "value": _clean(self.value),
                "tol": _clean(self.tol), "detail": _clean(self.detail)}


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def _le(name, value, tol, **detail) -> Check:
    return Check(name, bool(value <= tol), float(value), float(tol), detail)


# ---------------------------------------------------------------------------
# non-fading


def _random_draw(rng):
    h1, h2 = rng.uniform(0.05, 10, 2)
    gamma, sigma = rng.uniform(0.05, 10, 2)
    P1, P2, PJ = rng.uniform(0.05, 10, 3)
    return ChannelParams(h1, h2, gamma, sigma), PowerBudget(P1, P2, PJ)


def nonfading_suite(cfg: ScenarioConfig, fault: Optional[str] = None) -> list[Check]:
    tol = cfg.tolerance()
    checks = []

    # reference points with the region picture parameters
    ref_budget = PowerBudget(10, 5, 5)
    worst, labels = 0.0, []
    for h, region, snr in ((0.2, "A", 0.0),
                           (0.4, "B", (1 - math.sqrt(5 / 6)) ** 2 * 6),
                           (1.0, "C", 1.5)):
        sol = solve_full_info(ChannelParams(h, h, 1, 1), ref_budget, cfg=tol)
        labels.append(sol.region.value)
        worst = max(worst, abs(sol.snr - snr), 0.0 if sol.region.value == region else math.inf)
    checks.append(_le("full_info_reference_points", worst, 1e-12, regions=labels))

    # branch continuity: solve just below / above each boundary
    params = cfg.channel_params()
    budget = cfg.power_budget()
    cont = 0.0
    if params.gamma > 0 and budget.PJ > 0:
        s = params.h1 * budget.P1 + params.h2 * budget.P2
        if s > 0:
            for target in region_boundaries(params, budget):
                vals = []
                for f in (1 - 1e-12, 1 + 1e-12):
                    k = target * f / s
                    p = ChannelParams(params.h1 * k, params.h2 * k, params.gamma, params.sigmaN2)
                    j = solve_full_info(p, budget, cfg=tol).jam
                    vals.append(np.array([j.rho1, j.rho2, j.sigmaNJ2]))
                cont = max(cont, float(np.max(np.abs(vals[0] - vals[1]))))
    checks.append(_le("full_info_branch_continuity", cont, 1e-9))

    rng = np.random.default_rng(cfg.solver.seed)
    raw_gap = pol_gap = 0.0
    for _ in range(cfg.verify.n_draws):
        p, b = _random_draw(rng)
        snr = solve_full_info(p, b, cfg=tol).snr
        if fault == "closed-form":
            j = solve_full_info(p, b, cfg=tol).jam
            snr = snr_full(p, b, LinearJammerFull(0.9 * j.rho1, 0.9 * j.rho2, j.sigmaNJ2))
        o = full_info_oracle(p, b, tol)
        raw_gap = max(raw_gap, abs(snr - o.grid_min))
        pol_gap = max(pol_gap, abs(snr - o.min))
    checks.append(_le("full_info_oracle_raw", raw_gap, 1e-4, draws=cfg.verify.n_draws))
    checks.append(_le("full_info_oracle_polished", pol_gap, 1e-8, draws=cfg.verify.n_draws))

    gap = 0.0
    for _ in range(cfg.verify.n_draws):
        p, b = _random_draw(rng)
        ep = EavesdropParams(*rng.uniform(0.05, 10, 3))
        snr = solve_eavesdrop(p, ep, b, cfg=tol).snr
        gap = max(gap, abs(snr - eavesdrop_oracle(p, ep, b, tol).grid_min))
    checks.append(_le("eavesdrop_oracle", gap, 1e-4, draws=cfg.verify.n_draws))

    ep = cfg.eavesdrop_params()
    sol = solve_full_info(params, budget, cfg=tol)
    rep = verify_saddle_nonfading(params, budget, sol, cfg.verify.n_samples, cfg.solver.seed)
    checks.append(Check("full_info_saddle", rep.passed,
                        max(rep.max_jammer_violation, rep.max_user_violation), rep.tol,
                        {"lambda_mismatch": rep.max_lambda_mismatch}))
    esol = solve_eavesdrop(params, ep, budget, cfg=tol)
    rep = verify_saddle_nonfading(params, budget, esol, cfg.verify.n_samples, cfg.solver.seed,
                                  ep=ep)
    checks.append(Check("eavesdrop_saddle", rep.passed,
                        max(rep.max_jammer_violation, rep.max_user_violation), rep.tol))

    # |E[Z1 J]| = |rho| sqrt(g1) E[Z1^2] against the LLSE bound
    if ep.g1 > 0:
        zt = z_transform(params, ep, budget)
        reach = abs(esol.jam.rho) * math.sqrt(ep.g1) * zt.EZ1sq
        checks.append(_le("eavesdrop_llse_bound",
                          reach - z1j_feasible_bound(ep, zt.EZ1sq, budget.PJ), 1e-9))

    # dominance along an h1 sweep
    dom = -math.inf
    for h1 in np.geomspace(0.01, 10, 50):
        p = ChannelParams(float(h1), params.h2, params.gamma, params.sigmaN2)
        dom = max(dom, solve_full_info(p, budget, cfg=tol).snr
                  - solve_eavesdrop(p, ep, budget, cfg=tol).snr)
    checks.append(_le("full_info_dominates_eavesdrop", dom, 1e-9))

    worst = 0.0
    for _ in range(cfg.verify.n_samples):
        p, b = _random_draw(rng)
        c = rng.normal(size=2) * np.sqrt([b.P1, b.P2]) * rng.uniform(0, 1)
        cp = c[0] ** 2 / b.P1 + c[1] ** 2 / b.P2
        corr = JammerCorrelationTriple(float(c[0]), float(c[1]), float(cp + rng.uniform(0, 5)))
        jam = equivalent_linear_jammer(corr, b)
        lin = JammerCorrelationTriple(jam.rho1 * b.P1, jam.rho2 * b.P2, jam.power(b))
        a, d = lambda_det(p, b, corr), lambda_det(p, b, lin)
        worst = max(worst, abs(a - d) / max(abs(a), 1e-300))
    checks.append(_le("lambda_equivalence", worst, 1e-10, samples=cfg.verify.n_samples))
    return checks


# ---------------------------------------------------------------------------
# fading, uncorrelated jammer


def fading_uncorrelated_suite(cfg: ScenarioConfig, fault: Optional[str] = None) -> list[Check]:
    tol = cfg.tolerance()
    b, c = cfg.budget, cfg.channel
    Pbar, PJ, s2, g = b.P1, b.PJ, c.sigmaN2, c.gamma
    checks = []

    _, level = waterfill(np.array([1.0, 4.0]), np.array([0.5, 0.5]), 1.0, 1.5, tol)
    checks.append(_le("waterfill_reference", abs(level - 2.125), 1e-10))

    model = cfg.fading_model()
    sol = solve_joint_csi_single(model, Pbar, PJ, s2, g, tol)
    if math.isfinite(sol.threshold) and model.continuous:
        model = model.with_breakpoints(sol.threshold)
        sol = solve_joint_csi_single(model, Pbar, PJ, s2, g, tol)
    P, J = sol.user.values, sol.jammer.values
    bind = abs(sol.user.mean_power - Pbar) / Pbar
    if PJ > 0:
        bind = max(bind, abs(sol.jammer.mean_power - PJ) / PJ)
    checks.append(_le("joint_constraints_bind", bind, 1e-6))
    kkt = joint_csi_kkt_residuals(model, sol, s2, g)
    checks.append(_le("joint_kkt", max(kkt.values()), 1e-6, **kkt))

    if math.isfinite(sol.threshold):
        lo, _, _ = joint_csi_profiles(np.array([sol.threshold * (1 - 1e-12)]), sol.lam, sol.mu, s2, g)
        hi, _, _ = joint_csi_profiles(np.array([sol.threshold]), sol.lam, sol.mu, s2, g)
        target = s2 * sol.mu / (g * sol.lam)
        checks.append(_le("joint_continuity",
                          max(abs(lo[0] - target), abs(hi[0] - target)) / target, 1e-9))
    mono = float(max(np.max(-np.diff(P), initial=0.0), np.max(-np.diff(J), initial=0.0)))
    checks.append(_le("joint_monotone", mono, 1e-12))
    both = (P > 0) & (J > 0)
    if np.any(both):
        ratio = (s2 + g * J[both]) / (g * P[both])
        spread = float(np.max(np.abs(ratio / (sol.lam / sol.mu) - 1)))
    else:
        spread = 0.0
    checks.append(_le("joint_noise_power_ratio", spread, 1e-6))
    checks.append(_le("jammer_active_implies_user_active", int(np.sum((J > 0) & (P <= 0))), 0))

    P_fix, _ = waterfill(model.h, model.w, s2 + g * J, Pbar, tol)
    J_fix, _ = uncorrelated_jammer_response(model.h, model.w, P, PJ, s2, g, tol)
    checks.append(_le("joint_saddle_user", float(np.max(np.abs(P_fix - P))), 1e-4))
    checks.append(_le("joint_saddle_jammer", float(np.max(np.abs(J_fix - J))), 1e-4))

    Pa, Ja, it, _ = alternating_best_response(model, Pbar, PJ, s2, g, cfg=tol)
    gap = max(float(np.max(np.abs(Pa - P))), float(np.max(np.abs(Ja - J))))
    checks.append(Check("alternating_best_response", bool(gap <= 1e-3 and it < 200), gap, 1e-3,
                        {"iterations": it}))

    free = waterfill_blind_jammer(model, Pbar, s2, g, 0.0, tol)
    c_free = capacity_fading_uncorrelated(model, free, np.zeros_like(P), s2, g)
    checks.append(Check("jammer_reduces_capacity", bool(sol.capacity_nats < c_free or PJ == 0),
                        sol.capacity_nats - c_free, 0.0))

    if model.continuous and PJ > 0:
        P2 = b.P2 if b.P2 > 0 else b.P1
        m2 = cfg.two_user_model()
        two = solve_joint_csi_two_user(m2, Pbar, P2, PJ, s2, tol)
        kkt2 = two_user_kkt_residuals(m2, two, s2)
        both = kkt2.pop("both_active")
        checks.append(_le("two_user_one_active", both, 0))
        checks.append(_le("two_user_kkt", max(kkt2.values()), 1e-6, **kkt2))
        checks.append(_le("two_user_constraints_bind", max(two.constraint_residuals.values()), 1e-5))

    f = ComplexGaussianFading()
    rep = verify_blind_jammer_zero_correlation(f, b.P1, b.P2 if b.P2 > 0 else b.P1, PJ, s2, g,
                                               n_samples=cfg.verify.blind_samples,
                                               seed=cfg.solver.seed)
    checks.append(Check("blind_jammer_zero_correlation", rep.passed,
                        max(abs(rep.argmin[0]), abs(rep.argmin[1])), max(rep.cell),
                        {"argmin": list(rep.argmin)}))
    return checks


# ---------------------------------------------------------------------------
# fading, correlated jammer


def fading_correlated_suite(cfg: ScenarioConfig, fault: Optional[str] = None) -> list[Check]:
    tol = cfg.tolerance()
    b = cfg.budget
    Pbar, PJ = b.P1, b.PJ
    checks = []

    _, _, J, lam, _ = received_power_response(np.array([0.5, 0.5]), np.array([0.5, 2.0]), 1.0, tol)
    checks.append(_le("best_response_reference",
                      max(abs(1 / lam - 1.5), float(np.max(np.abs(J - [0.5, 1.5])))), 1e-12))
    if PJ <= 0:
        checks.append(Check("jammer_power_positive", False, PJ, 0.0))
        return checks

    model = cfg.fading_model()
    flat = np.full_like(model.h, Pbar)
    jb = jammer_best_response(model, flat, PJ, tol)
    dev = float(np.max(np.abs(jb.total - np.minimum(model.h * flat, jb.level))))
    checks.append(_le("best_response_min_shape", dev, 1e-9))

    sol = maxmin_user(model, Pbar, PJ, cfg=tol)
    thr = sol.threshold * (1.01 if fault == "maxmin-threshold" else 1.0)
    pr = float(model.sf(thr))
    closed = max(abs(sol.mu * Pbar - pr), abs(sol.lam * PJ - pr))
    checks.append(_le("maxmin_closed_form", closed, 1e-10, threshold=sol.threshold,
                      user_level=sol.user_power_level, jam_level=sol.jam_power_level))
    g = sol.model
    general = correlated_capacity(g.h, g.w, sol.user.values, sol.jammer.rho, sol.jammer.sigmaNJ2)
    checks.append(_le("maxmin_capacity_identity", abs(general - sol.capacity_nats), 1e-9))
    on = sol.user.values > 0
    checks.append(_le("maxmin_activity_sets_coincide",
                      int(np.sum(on != (sol.jammer.total > 0))), 0))

    if model.continuous:
        q = FadingModel.exponential(model.mean, n_points=8, spacing="quantile")
        small = FadingModel.discrete(q.h, q.w)
    else:
        small = model
    if small.h.size <= 16:
        _, c_or = maxmin_oracle(small, Pbar, PJ, seed=cfg.solver.seed)
        c_flat = maxmin_user(small, Pbar, PJ, cfg=tol).capacity_nats
        rel = abs(c_or - c_flat) / max(abs(c_flat), 1e-300)
        checks.append(_le("maxmin_oracle", rel, 0.02, oracle=c_or, closed_form=c_flat))

    eps = cfg.verify.witness_epsilon * sol.user_power_level
    wit = demonstrate_no_equilibrium(model, Pbar, PJ, eps, cfg.verify.sigma_reg, tol)
    checks.append(Check("no_equilibrium_witness", bool(wit.delta_c > 0 and wit.reverse_delta_c < 0),
                        wit.delta_c, 0.0, {"reverse_delta_c": wit.reverse_delta_c,
                                           "u_plus": wit.u_plus, "u_minus": wit.u_minus}))

    if model.continuous:
        P2 = b.P2 if b.P2 > 0 else b.P1
        m2 = cfg.two_user_model()
        two = maxmin_two_user(m2, Pbar, P2, PJ, tol)
        both = int(np.sum((two.user1.values > 0) & (two.user2.values > 0)))
        checks.append(_le("maxmin_two_user_one_active", both, 0))
        prop = float(np.max(np.abs(two.rho1 / np.sqrt(m2.h1) - two.rho2 / np.sqrt(m2.h2))))
        checks.append(_le("maxmin_two_user_proportional", prop, 1e-9))
        checks.append(_le("maxmin_two_user_constraints_bind",
                          max(two.constraint_residuals.values()), 1e-5))
    return checks


_SUITES: dict[str, Callable] = {
    "nonfading": nonfading_suite,
    "fading-uncorrelated": fading_uncorrelated_suite,
    "fading-correlated": fading_correlated_suite,
}


def run_verification(cfg: ScenarioConfig, suite: str = "all",
                     fault: Optional[str] = None) -> dict:
    """Run one suite or all of them and return a JSON-ready report."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    names = SUITES if suite == "all" else (suite,)
    for n in names:
        if n not in _SUITES:
            raise ValueError(f"unknown suite {n!r}")
    suites = {}
    for n in names:
        suites[n] = [c.as_dict() for c in _SUITES[n](cfg, fault)]
    failed = [f"{n}/{c['name']}" for n, cs in suites.items() for c in cs if not c["passed"]]
    return {"tool_version": __version__, "config_hash": cfg.config_hash(), "suite": suite,
            "seed": cfg.solver.seed, "passed": not failed, "failed": failed, "suites": suites}


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
