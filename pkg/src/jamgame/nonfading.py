"""Optimal jamming in the non-fading two-user channel.

Closed-form full-information jammer with its three operating regions, the
eavesdropping jammer obtained from the roots of a low-degree stationarity
polynomial, brute-force grid oracles for both, and a sampling harness
that checks no unilateral deviation beats the computed saddle point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .channel import (
    ChannelParams,
    EavesdropParams,
    JammerCorrelationTriple,
    LinearJammerEaves,
    LinearJammerFull,
    PowerBudget,
    capacity_nats,
    equivalent_linear_jammer,
    snr_eaves,
    snr_full,
)
from .numerics import (
    DEFAULT_TOL,
    GridResult,
    ToleranceConfig,
    cubic_roots,
    grid_minimize,
    minimize_interval,
)

__all__ = [
    "RegionLabel",
    "NonfadingSolution",
    "SaddleReport",
    "classify_region",
    "region_boundaries",
    "solve_full_info",
    "solve_eavesdrop",
    "eavesdrop_stationarity_poly",
    "full_info_oracle",
    "eavesdrop_oracle",
    "verify_saddle_nonfading",
]


class RegionLabel(str, enum.Enum):
    """Operating regime of the full-information jammer.

    A: the signal is nulled exactly and power is left over for noise.
    B: all power goes to cancellation.
    C: power is split between cancellation and independent noise.
    """

    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class NonfadingSolution:
    jam: Union[LinearJammerFull, LinearJammerEaves]
    snr: float
    capacity_nats: float
    region: Optional[RegionLabel] = None
    oracle_gap: Optional[float] = None
    fallback: bool = False
    note: str = ""


def region_boundaries(params: ChannelParams, budget: PowerBudget) -> tuple[float, float]:
    """Values of ``S = h1 P1 + h2 P2`` at the A/B and B/C boundaries."""
    gpj = params.gamma * budget.PJ
    ab = gpj
    bc = (gpj + params.sigmaN2) ** 2 / gpj if gpj > 0 else math.inf
    return ab, bc


def classify_region(params: ChannelParams, budget: PowerBudget) -> RegionLabel:
    # ties go to the zero-capacity branch; adjacent branches coincide there
    s = params.h1 * budget.P1 + params.h2 * budget.P2
    ab, bc = region_boundaries(params, budget)
    if s <= ab:
        return RegionLabel.A
    if s <= bc:
        return RegionLabel.B
    return RegionLabel.C


def solve_full_info(params: ChannelParams, budget: PowerBudget,
                    verify: bool = False,
                    cfg: ToleranceConfig = DEFAULT_TOL) -> NonfadingSolution:
    """Optimal full-information linear jammer.

    The jamming coefficients are proportional to ``sqrt(h_i)``, so each user
    draws jamming power in proportion to its received power ``h_i P_i``.
    With ``verify`` set, ``oracle_gap`` holds the distance to the polished
    grid oracle.
    """
    s = params.h1 * budget.P1 + params.h2 * budget.P2
    if params.gamma == 0:
        jam = LinearJammerFull(0.0, 0.0, budget.PJ)
        snr = snr_full(params, budget, jam)
        return NonfadingSolution(jam, snr, capacity_nats(snr), classify_region(params, budget),
                                 note="jammer link is zero; jammer output is irrelevant")
    if s == 0:
        jam = LinearJammerFull(0.0, 0.0, budget.PJ)
        return NonfadingSolution(jam, 0.0, 0.0, RegionLabel.A,
                                 note="users are silent at the receiver")
    region = classify_region(params, budget)
    sg = math.sqrt(params.gamma)
    if region is RegionLabel.A:
        rho1 = -math.sqrt(params.h1) / sg
        rho2 = -math.sqrt(params.h2) / sg
        noise = budget.PJ - s / params.gamma
    else:
        rho = min(math.sqrt(budget.PJ / s),
                  (params.gamma * budget.PJ + params.sigmaN2) / (sg * s))
        rho1 = -rho * math.sqrt(params.h1)
        rho2 = -rho * math.sqrt(params.h2)
        noise = 0.0 if region is RegionLabel.B else budget.PJ - rho * rho * s
    jam = LinearJammerFull(rho1, rho2, max(noise, 0.0))
    snr = snr_full(params, budget, jam)
    gap = None
    if verify:
        gap = abs(snr - full_info_oracle(params, budget, cfg).min)
    return NonfadingSolution(jam, snr, capacity_nats(snr), region, gap)


def full_info_oracle(params: ChannelParams, budget: PowerBudget,
                     cfg: ToleranceConfig = DEFAULT_TOL,
                     resolution=None, polish: bool = True) -> GridResult:
    """Brute-force minimum SNR over every feasible linear jammer.

    The feasible set ``rho1^2 P1 + rho2^2 P2 + sigma^2 <= PJ`` is covered by
    ``(r, theta, s)`` with ``sqrt(P1) rho1 = r cos(theta)``,
    ``sqrt(P2) rho2 = r sin(theta)`` and ``sigma^2 = s (PJ - r^2)``.
    """
    if resolution is None:
        n = cfg.grid_resolution
        resolution = (n, 4 * n, 3)
    sg = math.sqrt(params.gamma)
    sh1, sh2 = math.sqrt(params.h1), math.sqrt(params.h2)
    p1, p2, pj = budget.P1, budget.P2, budget.PJ
    inv1 = 1 / math.sqrt(p1) if p1 > 0 else 0.0
    inv2 = 1 / math.sqrt(p2) if p2 > 0 else 0.0

    def objective(r, theta, s):
        rho1 = r * np.cos(theta) * inv1
        rho2 = r * np.sin(theta) * inv2
        noise = s * np.maximum(pj - r * r, 0.0)
        num = (sh1 + sg * rho1) ** 2 * p1 + (sh2 + sg * rho2) ** 2 * p2
        den = params.gamma * noise + params.sigmaN2
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(den > 0, num / np.where(den > 0, den, 1.0),
                           np.where(num > 0, np.inf, 0.0))
        return out

    box = [(0.0, math.sqrt(pj)), (-math.pi, math.pi), (0.0, 1.0)]
    return grid_minimize(objective, box, cfg, resolution=resolution, polish=polish)


def eavesdrop_stationarity_poly(params: ChannelParams, ep: EavesdropParams,
                                budget: PowerBudget) -> np.ndarray:
    """Coefficients (highest degree first, length 4) of the stationarity
    polynomial of the eavesdropping SNR along the active power constraint.

    With ``sigma_NJ^2 = PJ - rho^2 (g1 P1 + g2 P2 + sigma_e^2)`` substituted,
    the SNR is a ratio ``N(rho)/D(rho)`` of quadratics; the roots of
    ``N' D - N D'`` are its stationary points.  The cubic coefficient
    cancels identically.
    """
    g = params.gamma
    G = ep.g1 * budget.P1 + ep.g2 * budget.P2
    S = params.h1 * budget.P1 + params.h2 * budget.P2
    B = math.sqrt(g) * (math.sqrt(params.h1 * ep.g1) * budget.P1
                        + math.sqrt(params.h2 * ep.g2) * budget.P2)
    num = np.array([g * G, 2 * B, S])
    den = np.array([-g * G, 0.0, g * budget.PJ + params.sigmaN2])
    poly = np.polysub(np.polymul(np.polyder(num), den),
                      np.polymul(num, np.polyder(den)))
    return np.concatenate([np.zeros(4 - poly.size), poly])


def _eaves_rho_max(ep: EavesdropParams, budget: PowerBudget) -> float:
    k = ep.g1 * budget.P1 + ep.g2 * budget.P2 + ep.sigmaE2
    return math.sqrt(budget.PJ / k)


def _eaves_jammer(rho: float, ep: EavesdropParams, budget: PowerBudget) -> LinearJammerEaves:
    k = ep.g1 * budget.P1 + ep.g2 * budget.P2 + ep.sigmaE2
    return LinearJammerEaves(rho, max(budget.PJ - rho * rho * k, 0.0))


def solve_eavesdrop(params: ChannelParams, ep: EavesdropParams,
                    budget: PowerBudget, verify: bool = False,
                    cfg: ToleranceConfig = DEFAULT_TOL,
                    _force_fallback: bool = False) -> NonfadingSolution:
    """Optimal linear jammer that only sees ``Y_e = sqrt(g1) X1 + sqrt(g2) X2 + N_e``.

    The SNR decreases in the independent noise power, so the jammer's power
    constraint binds and the search is one-dimensional on
    ``|rho| <= sqrt(PJ / (g1 P1 + g2 P2 + sigma_e^2))``.  All real stationary
    points in range and both endpoints are compared.  If root finding fails
    a bounded scalar search is used instead and ``fallback`` is set.
    """
    def finish(jam, note="", fallback=False):
        snr = snr_eaves(params, ep, budget, jam)
        gap = None
        if verify:
            gap = abs(snr - eavesdrop_oracle(params, ep, budget, cfg).min)
        return NonfadingSolution(jam, snr, capacity_nats(snr), None, gap, fallback, note)

    if budget.PJ == 0:
        return finish(LinearJammerEaves(0.0, 0.0), "no jamming power")
    if params.gamma == 0:
        return finish(LinearJammerEaves(0.0, budget.PJ),
                      "jammer link is zero; jammer output is irrelevant")
    if ep.g1 * budget.P1 + ep.g2 * budget.P2 == 0:
        return finish(LinearJammerEaves(0.0, budget.PJ),
                      "eavesdropped signal carries no user component")

    rho_max = _eaves_rho_max(ep, budget)

    def f(rho):
        return snr_eaves(params, ep, budget, _eaves_jammer(rho, ep, budget))

    cands = [-rho_max, rho_max]
    fallback = _force_fallback
    if not fallback:
        try:
            poly = eavesdrop_stationarity_poly(params, ep, budget)
            roots = cubic_roots(*poly) if np.any(poly) else []
            cands += [r for r in roots if -rho_max <= r <= rho_max]
        except (ValueError, np.linalg.LinAlgError):
            fallback = True
    if fallback:
        x, _ = minimize_interval(f, -rho_max, rho_max, cfg)
        cands.append(x)
    best = min(cands, key=f)
    return finish(_eaves_jammer(best, ep, budget), fallback=fallback)


def eavesdrop_oracle(params: ChannelParams, ep: EavesdropParams,
                     budget: PowerBudget, cfg: ToleranceConfig = DEFAULT_TOL,
                     resolution=None, polish: bool = True) -> GridResult:
    """Brute-force minimum over ``(rho, sigma_NJ^2)`` of the eavesdropping SNR.

    The noise axis is the fraction ``s`` of the power left after the
    correlated part, so every grid point is feasible and the constraint is
    not assumed to bind.
    """
    k = ep.g1 * budget.P1 + ep.g2 * budget.P2 + ep.sigmaE2
    rho_max = math.sqrt(budget.PJ / k)
    g = params.gamma
    a1, a2 = math.sqrt(g * ep.g1), math.sqrt(g * ep.g2)
    sh1, sh2 = math.sqrt(params.h1), math.sqrt(params.h2)

    def objective(rho, s):
        noise = s * np.maximum(budget.PJ - rho * rho * k, 0.0)
        num = (sh1 + rho * a1) ** 2 * budget.P1 + (sh2 + rho * a2) ** 2 * budget.P2
        den = g * rho * rho * ep.sigmaE2 + g * noise + params.sigmaN2
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(den > 0, num / np.where(den > 0, den, 1.0),
                            np.where(num > 0, np.inf, 0.0))

    return grid_minimize(objective, [(-rho_max, rho_max), (0.0, 1.0)], cfg,
                         resolution=resolution, polish=polish)


@dataclass
class SaddleReport:
    passed: bool
    max_jammer_violation: float
    max_user_violation: float
    n_samples: int
    tol: float
    worst_jammer: Optional[tuple] = None
    worst_user: Optional[tuple] = None
    max_lambda_mismatch: float = 0.0
    details: dict = field(default_factory=dict)


def _sample_full_deviations(rng, budget: PowerBudget, n: int, jam0: LinearJammerFull):
    """Feasible full-information linear jammers: half global, half local."""
    p1, p2, pj = budget.P1, budget.P2, budget.PJ
    n_glob = n - n // 2
    theta = rng.uniform(-math.pi, math.pi, n_glob)
    r = math.sqrt(pj) * np.sqrt(rng.uniform(0, 1, n_glob))
    s = np.where(rng.uniform(0, 1, n_glob) < 0.5, 1.0, rng.uniform(0, 1, n_glob))
    rho1 = r * np.cos(theta) / math.sqrt(p1) if p1 > 0 else np.zeros(n_glob)
    rho2 = r * np.sin(theta) / math.sqrt(p2) if p2 > 0 else np.zeros(n_glob)
    noise = s * np.maximum(pj - r * r, 0.0)
    out = list(zip(rho1, rho2, noise))
    n_loc = n // 2
    scale = 1e-3 * (1 + abs(jam0.rho1) + abs(jam0.rho2))
    d = rng.normal(0, scale, (n_loc, 3))
    for dr1, dr2, dn in d:
        r1, r2 = jam0.rho1 + dr1, jam0.rho2 + dr2
        nz = max(jam0.sigmaNJ2 + dn * (1 + jam0.sigmaNJ2), 0.0)
        pw = r1 * r1 * p1 + r2 * r2 * p2 + nz
        if pw > pj:
            corr = r1 * r1 * p1 + r2 * r2 * p2
            if corr > pj:
                f = math.sqrt(pj / corr)
                r1, r2, nz = r1 * f, r2 * f, 0.0
            else:
                nz = pj - corr
        out.append((r1, r2, nz))
    return out


def _sample_triples(rng, budget: PowerBudget, n: int):
    pj = budget.PJ * rng.uniform(0, 1, n)
    theta = rng.uniform(-math.pi, math.pi, n)
    r = np.sqrt(pj * rng.uniform(0, 1, n))
    c1 = r * np.cos(theta) * math.sqrt(budget.P1)
    c2 = r * np.sin(theta) * math.sqrt(budget.P2)
    return [JammerCorrelationTriple(float(a), float(b), float(p))
            for a, b, p in zip(c1, c2, pj)]


def verify_saddle_nonfading(params: ChannelParams, budget: PowerBudget,
                            solution: NonfadingSolution, n_samples: int = 10_000,
                            seed: int = 0, ep: Optional[EavesdropParams] = None,
                            tol: float = 1e-6) -> SaddleReport:
    """Sample unilateral deviations around a computed saddle point.

    Jammer side: random feasible linear jammers (and, with full information,
    arbitrary correlation triples reduced to their equivalent linear jammer)
    must not push the SNR below the solution's.  User side: per-user power
    reductions against the fixed jammer must not raise the capacity.
    Violations above ``tol`` produce ``passed=False``; nothing is raised.
    """
    from .channel import lambda_det

    rng = np.random.default_rng(seed)
    jam_viol, worst_j = 0.0, None
    lam_mis = 0.0
    if budget.PJ > 0:
        if isinstance(solution.jam, LinearJammerEaves):
            if ep is None:
                raise ValueError("eavesdrop solution needs the eavesdrop parameters")
            rho_max = _eaves_rho_max(ep, budget)
            rhos = np.concatenate([
                rng.uniform(-rho_max, rho_max, n_samples - n_samples // 2),
                np.clip(solution.jam.rho + rng.normal(0, 1e-3 * (rho_max + 1e-12),
                                                      n_samples // 2), -rho_max, rho_max)])
            fracs = np.where(rng.uniform(0, 1, n_samples) < 0.5, 1.0,
                             rng.uniform(0, 1, n_samples))
            for rho, fr in zip(rhos, fracs):
                full = _eaves_jammer(float(rho), ep, budget)
                dev = LinearJammerEaves(full.rho, full.sigmaNJ2 * fr)
                v = solution.snr - snr_eaves(params, ep, budget, dev)
                if v > jam_viol:
                    jam_viol, worst_j = v, (dev.rho, dev.sigmaNJ2)
        else:
            for r1, r2, nz in _sample_full_deviations(rng, budget, n_samples, solution.jam):
                dev = LinearJammerFull(float(r1), float(r2), float(nz))
                v = solution.snr - snr_full(params, budget, dev)
                if v > jam_viol:
                    jam_viol, worst_j = v, (dev.rho1, dev.rho2, dev.sigmaNJ2)
            if budget.P1 > 0 and budget.P2 > 0:
                for corr in _sample_triples(rng, budget, n_samples):
                    dev = equivalent_linear_jammer(corr, budget)
                    v = solution.snr - snr_full(params, budget, dev)
                    if v > jam_viol:
                        jam_viol, worst_j = v, (corr.c1, corr.c2, corr.pj)
                    try:
                        d0 = lambda_det(params, budget, corr)
                        d1 = lambda_det(params, budget, JammerCorrelationTriple(
                            dev.rho1 * budget.P1, dev.rho2 * budget.P2, dev.power(budget)))
                        lam_mis = max(lam_mis, abs(d0 - d1) / max(abs(d0), 1e-300))
                    except ValueError:
                        pass

    # users scale their own power down against the frozen jammer coefficients
    user_viol, worst_u = 0.0, None
    base_c = solution.capacity_nats
    for f1, f2 in rng.uniform(0, 1, (n_samples, 2)):
        b = PowerBudget(budget.P1 * f1, budget.P2 * f2, budget.PJ)
        if b.P1 + b.P2 <= 0:
            continue
        if isinstance(solution.jam, LinearJammerEaves):
            c = capacity_nats(snr_eaves(params, ep, b, solution.jam))
        else:
            c = capacity_nats(snr_full(params, b, solution.jam))
        v = c - base_c
        if v > user_viol:
            user_viol, worst_u = v, (b.P1, b.P2)

    passed = jam_viol <= tol and user_viol <= tol and lam_mis <= 1e-8
    return SaddleReport(passed, jam_viol, user_viol, n_samples, tol, worst_j, worst_u,
                        lam_mis)
