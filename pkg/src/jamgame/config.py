"""Scenario configuration and solution records for the command-line tool."""

from __future__ import annotations

import hashlib
import json
import os
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import __version__
from .channel import ChannelParams, EavesdropParams, PowerBudget
from .fading import FadingModel, TwoUserFadingModel
from .numerics import ToleranceConfig

SCENARIOS = (
    "nonfading-full",
    "nonfading-eaves",
    "fading-blind",
    "fading-csi-uncorrelated",
    "fading-csi-uncorrelated-two-user",
    "fading-csi-correlated-maxmin",
    "fading-csi-correlated-maxmin-two-user",
)

Scenario = Literal[
    "nonfading-full",
    "nonfading-eaves",
    "fading-blind",
    "fading-csi-uncorrelated",
    "fading-csi-uncorrelated-two-user",
    "fading-csi-correlated-maxmin",
    "fading-csi-correlated-maxmin-two-user",
]


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ChannelBlock(_Block):
    h1: float = Field(1.0, ge=0, allow_inf_nan=False)
    h2: float = Field(1.0, ge=0, allow_inf_nan=False)
    gamma: float = Field(1.0, ge=0, allow_inf_nan=False)
    sigmaN2: float = Field(1.0, ge=0, allow_inf_nan=False)


class EavesdropBlock(_Block):
    g1: float = Field(1.0, ge=0, allow_inf_nan=False)
    g2: float = Field(1.0, ge=0, allow_inf_nan=False)
    sigmaE2: float = Field(1.0, gt=0, allow_inf_nan=False)


class BudgetBlock(_Block):
    P1: float = Field(ge=0, allow_inf_nan=False)
    P2: float = Field(0.0, ge=0, allow_inf_nan=False)
    PJ: float = Field(ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _some_user_power(self):
        if self.P1 + self.P2 <= 0:
            raise ValueError("P1 + P2 must be positive")
        return self


class FadingBlock(_Block):
    # "Rayleigh" fading of the amplitude: the power gain is exponential
    kind: Literal["exponential", "discrete"] = "exponential"
    mean: float = Field(1.0, gt=0, allow_inf_nan=False)
    support: list[float] = Field(default_factory=list)
    probs: list[float] = Field(default_factory=list)
    n_points: int = Field(4096, ge=2)
    two_user_n_points: int = Field(512, ge=2)
    spacing: Literal["log", "quantile"] = "log"

    @model_validator(mode="after")
    def _discrete_complete(self):
        if self.kind == "discrete":
            FadingModel.discrete(self.support, self.probs)
        return self


class SolverBlock(_Block):
    abs_tol: float = Field(1e-13, gt=0)
    rel_tol: float = Field(1e-13, gt=0)
    max_iter: int = Field(500, ge=1)
    grid_resolution: int = Field(512, ge=2)
    seed: int = Field(0, ge=0)


class VerifyBlock(_Block):
    n_samples: int = Field(10_000, ge=1)
    n_draws: int = Field(10, ge=1)
    blind_samples: int = Field(100_000, ge=2)
    witness_epsilon: float = Field(0.01, gt=0, description="fraction of the user level")
    sigma_reg: float = Field(1e-6, gt=0)


class ScenarioConfig(_Block):
    scenario: Scenario
    channel: ChannelBlock = Field(default_factory=ChannelBlock)
    eavesdrop: Optional[EavesdropBlock] = None
    budget: BudgetBlock
    fading: FadingBlock = Field(default_factory=FadingBlock)
    solver: SolverBlock = Field(default_factory=SolverBlock)
    verify: VerifyBlock = Field(default_factory=VerifyBlock)

    @model_validator(mode="after")
    def _eavesdrop_present(self):
        if self.scenario == "nonfading-eaves" and self.eavesdrop is None:
            raise ValueError("scenario nonfading-eaves needs an 'eavesdrop' block")
        return self

    # ---- conversions ------------------------------------------------------
    def channel_params(self) -> ChannelParams:
        c = self.channel
        return ChannelParams(c.h1, c.h2, c.gamma, c.sigmaN2)

    def eavesdrop_params(self) -> EavesdropParams:
        e = self.eavesdrop or EavesdropBlock()
        return EavesdropParams(e.g1, e.g2, e.sigmaE2)

    def power_budget(self) -> PowerBudget:
        b = self.budget
        return PowerBudget(b.P1, b.P2, b.PJ)

    def tolerance(self) -> ToleranceConfig:
        s = self.solver
        return ToleranceConfig(s.abs_tol, s.rel_tol, s.max_iter, s.grid_resolution, s.seed)

    def fading_model(self, n_points: Optional[int] = None) -> FadingModel:
        f = self.fading
        if f.kind == "discrete":
            return FadingModel.discrete(f.support, f.probs)
        return FadingModel.exponential(f.mean, n_points=n_points or f.n_points, spacing=f.spacing)

    def two_user_model(self) -> TwoUserFadingModel:
        return TwoUserFadingModel.iid(self.fading_model(self.fading.two_user_n_points))

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a JSON scenario file.

    ``JAMGAME_SEED`` in the environment replaces ``solver.seed``.  Raises
    ``json.JSONDecodeError`` or ``pydantic.ValidationError``.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    seed = os.environ.get("JAMGAME_SEED")
    if seed is not None and isinstance(raw, dict):
        solver = dict(raw.get("solver") or {})
        try:
            solver["seed"] = int(seed)
        except ValueError:
            raise ValueError(f"JAMGAME_SEED must be an integer, got {seed!r}") from None
        raw["solver"] = solver
    return ScenarioConfig.model_validate(raw)


class SolutionRecord(BaseModel):
    """Everything ``jamgame run`` knows about a solved scenario."""

    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    scenario: dict
    strategies: dict
    capacity_nats: float
    capacity_unit: Literal["nats"] = "nats"
    multipliers: dict = Field(default_factory=dict)
    verification: dict = Field(default_factory=dict)
    files: list[str] = Field(default_factory=list)
    tool_version: str = __version__
    config_hash: str
    timestamp: Optional[str] = None
