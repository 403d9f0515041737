"""Game parameters, strategy types and the closed-form channel algebra.

All signals are real scalars and every quantity is a second moment, so a
strategy is fully described by a handful of numbers.  Capacities are in
nats: ``C = 0.5 * ln(1 + SNR)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FEAS_TOL",
    "ChannelParams",
    "EavesdropParams",
    "PowerBudget",
    "LinearJammerFull",
    "LinearJammerEaves",
    "JammerCorrelationTriple",
    "ZTransform",
    "InfeasibleCorrelationError",
    "InvalidMomentError",
    "capacity_nats",
    "snr_full",
    "snr_eaves",
    "lambda_det",
    "equivalent_linear_jammer",
    "z_transform",
    "z1j_feasible_bound",
]

FEAS_TOL = 1e-9


class InfeasibleCorrelationError(ValueError):
    """Jammer correlations violate the Cauchy-Schwarz power decomposition."""


class InvalidMomentError(ValueError):
    """The received-signal power is not positive."""


def _check_finite_nonneg(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value!r}")


@dataclass(frozen=True)
class ChannelParams:
    """Power gains of the user links (``h1``, ``h2``) and the jammer link,
    plus the receiver noise variance."""

    h1: float
    h2: float
    gamma: float
    sigmaN2: float

    def __post_init__(self):
        _check_finite_nonneg(self, ("h1", "h2", "gamma", "sigmaN2"))


@dataclass(frozen=True)
class EavesdropParams:
    g1: float
    g2: float
    sigmaE2: float

    def __post_init__(self):
        _check_finite_nonneg(self, ("g1", "g2", "sigmaE2"))
        if self.sigmaE2 <= 0:
            raise ValueError("sigmaE2 must be positive")


@dataclass(frozen=True)
class PowerBudget:
    P1: float
    P2: float
    PJ: float

    def __post_init__(self):
        _check_finite_nonneg(self, ("P1", "P2", "PJ"))
        if self.P1 + self.P2 <= 0:
            raise ValueError("at least one user must have positive power")


@dataclass(frozen=True)
class LinearJammerFull:
    """``J = rho1 X1 + rho2 X2 + N_J`` with ``E[N_J^2] = sigmaNJ2``."""

    rho1: float
    rho2: float
    sigmaNJ2: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.rho1, self.rho2, self.sigmaNJ2))):
            raise ValueError("jammer coefficients must be finite")
        if self.sigmaNJ2 < 0:
            raise ValueError("sigmaNJ2 must be non-negative")

    def power(self, budget: PowerBudget) -> float:
        return self.rho1 ** 2 * budget.P1 + self.rho2 ** 2 * budget.P2 + self.sigmaNJ2

    def is_feasible(self, budget: PowerBudget, tol: float = FEAS_TOL) -> bool:
        return self.power(budget) <= budget.PJ + tol


@dataclass(frozen=True)
class LinearJammerEaves:
    """``J = rho * Y_e + N_J`` where ``Y_e`` is the eavesdropped signal."""

    rho: float
    sigmaNJ2: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and math.isfinite(self.sigmaNJ2)):
            raise ValueError("jammer coefficients must be finite")
        if self.sigmaNJ2 < 0:
            raise ValueError("sigmaNJ2 must be non-negative")

    def power(self, ep: EavesdropParams, budget: PowerBudget) -> float:
        k = ep.g1 * budget.P1 + ep.g2 * budget.P2 + ep.sigmaE2
        return self.rho ** 2 * k + self.sigmaNJ2

    def is_feasible(self, ep: EavesdropParams, budget: PowerBudget,
                    tol: float = FEAS_TOL) -> bool:
        return self.power(ep, budget) <= budget.PJ + tol

    def as_full(self, ep: EavesdropParams) -> LinearJammerFull:
        """The same jammer seen as a full-information linear jammer; the
        eavesdropping noise becomes part of the independent noise."""
        return LinearJammerFull(self.rho * math.sqrt(ep.g1),
                                self.rho * math.sqrt(ep.g2),
                                self.rho ** 2 * ep.sigmaE2 + self.sigmaNJ2)


@dataclass(frozen=True)
class JammerCorrelationTriple:
    """Second moments ``E[X1 J]``, ``E[X2 J]`` and ``E[J^2]`` of an arbitrary
    jammer."""

    c1: float
    c2: float
    pj: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.c1, self.c2, self.pj))):
            raise ValueError("moments must be finite")
        if self.pj < 0:
            raise ValueError("pj must be non-negative")

    def correlated_power(self, budget: PowerBudget) -> float:
        total = 0.0
        for c, p in ((self.c1, budget.P1), (self.c2, budget.P2)):
            if p > 0:
                total += c * c / p
            elif c != 0:
                return math.inf
        return total

    def is_feasible(self, budget: PowerBudget, tol: float = FEAS_TOL) -> bool:
        return self.correlated_power(budget) <= self.pj + tol


def capacity_nats(snr: float) -> float:
    return 0.5 * math.log1p(snr) if math.isfinite(snr) else math.inf


def _ratio(num: float, den: float) -> float:
    if den > 0:
        return num / den
    # with no noise at all only a fully cancelled signal yields a finite SNR
    return 0.0 if num <= 0 else math.inf


def snr_full(params: ChannelParams, budget: PowerBudget,
             jam: LinearJammerFull) -> float:
    """Received SNR under a full-information linear jammer.

    Returns ``math.inf`` when the noise vanishes and some signal survives.
    """
    if not jam.is_feasible(budget):
        raise ValueError("jammer exceeds its power budget")
    sg = math.sqrt(params.gamma)
    num = ((math.sqrt(params.h1) + sg * jam.rho1) ** 2 * budget.P1
           + (math.sqrt(params.h2) + sg * jam.rho2) ** 2 * budget.P2)
    den = params.gamma * jam.sigmaNJ2 + params.sigmaN2
    return _ratio(num, den)


def snr_eaves(params: ChannelParams, ep: EavesdropParams, budget: PowerBudget,
              jam: LinearJammerEaves) -> float:
    if not jam.is_feasible(ep, budget):
        raise ValueError("jammer exceeds its power budget")
    a1 = math.sqrt(params.gamma * ep.g1)
    a2 = math.sqrt(params.gamma * ep.g2)
    num = ((math.sqrt(params.h1) + jam.rho * a1) ** 2 * budget.P1
           + (math.sqrt(params.h2) + jam.rho * a2) ** 2 * budget.P2)
    den = (params.gamma * jam.rho ** 2 * ep.sigmaE2 + params.gamma * jam.sigmaNJ2
           + params.sigmaN2)
    return _ratio(num, den)


def _output_moments(params: ChannelParams, budget: PowerBudget,
                    corr: JammerCorrelationTriple):
    sg = math.sqrt(params.gamma)
    ex1y = math.sqrt(params.h1) * budget.P1 + sg * corr.c1
    ex2y = math.sqrt(params.h2) * budget.P2 + sg * corr.c2
    ey2 = (params.h1 * budget.P1 + params.h2 * budget.P2
           + 2 * math.sqrt(params.h1 * params.gamma) * corr.c1
           + 2 * math.sqrt(params.h2 * params.gamma) * corr.c2
           + params.sigmaN2 + params.gamma * corr.pj)
    return ex1y, ex2y, ey2


def lambda_det(params: ChannelParams, budget: PowerBudget,
               corr: JammerCorrelationTriple) -> float:
    """Determinant of the error covariance of ``(X1 - a1 Y, X2 - a2 Y)`` with
    the LLSE coefficients ``a_i = E[X_i Y] / E[Y^2]``."""
    ex1y, ex2y, ey2 = _output_moments(params, budget, corr)
    if not ey2 > 0:
        raise InvalidMomentError(f"E[Y^2] = {ey2!r} is not positive")
    l11 = budget.P1 - ex1y ** 2 / ey2
    l22 = budget.P2 - ex2y ** 2 / ey2
    l12 = -ex1y * ex2y / ey2
    return l11 * l22 - l12 * l12


def equivalent_linear_jammer(corr: JammerCorrelationTriple,
                             budget: PowerBudget) -> LinearJammerFull:
    """Linear jammer with the same input correlations and total power.

    The residual ``J - sum_i X_i E[X_i J]/P_i`` is uncorrelated with both
    inputs; its power becomes the independent noise term.
    """
    cp = corr.correlated_power(budget)
    if cp > corr.pj + FEAS_TOL:
        raise InfeasibleCorrelationError(
            f"correlated power {cp!r} exceeds jammer power {corr.pj!r}")
    rho1 = corr.c1 / budget.P1 if budget.P1 > 0 else 0.0
    rho2 = corr.c2 / budget.P2 if budget.P2 > 0 else 0.0
    return LinearJammerFull(rho1, rho2, max(corr.pj - cp, 0.0))


@dataclass(frozen=True)
class ZTransform:
    """Decorrelated inputs ``Z1 = X1 + sqrt(g2/g1) X2`` and ``Z2`` such that
    the eavesdropper observes ``sqrt(g1) Z1 + N_e`` only."""

    u1: float
    u2: float
    EZ1sq: float
    EZ2sq: float


def z_transform(params: ChannelParams, ep: EavesdropParams,
                budget: PowerBudget) -> ZTransform:
    if ep.g1 <= 0:
        raise ValueError("z-transform undefined for g1 = 0; swap the users "
                         "or treat the user as invisible to the eavesdropper")
    g1, g2 = ep.g1, ep.g2
    p1, p2 = budget.P1, budget.P2
    s = g1 * p1 + g2 * p2
    u1 = math.sqrt(g1) / s * (math.sqrt(g1 * params.h1) * p1
                              + math.sqrt(g2 * params.h2) * p2)
    u2 = math.sqrt(params.h2) - math.sqrt(params.h1) * math.sqrt(g2 / g1)
    ez1 = p1 + g2 / g1 * p2
    ez2 = g1 * p1 * p2 / s
    return ZTransform(u1, u2, ez1, ez2)


def z1j_feasible_bound(ep: EavesdropParams, EZ1sq: float, PJ: float) -> float:
    """Largest ``|E[Z1 J]|`` any jammer built from the eavesdropped signal
    can reach with power ``PJ``; linear jamming attains it."""
    if EZ1sq < 0 or PJ < 0:
        raise ValueError("inputs must be non-negative")
    return math.sqrt(ep.g1 * EZ1sq ** 2 * PJ / (ep.sigmaE2 + ep.g1 * EZ1sq))
