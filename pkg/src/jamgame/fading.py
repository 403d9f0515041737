"""Fading laws for the channel power gain and their discretisation.

A continuous law is discretised into cells: every cell carries its exact
probability mass as weight and its conditional mean as node, so weights
sum to one and the first moment is reproduced exactly.  ``breakpoints``
force extra cell edges; an indicator ``1{h > t}`` is then integrated exactly
whenever ``t`` is an edge.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

__all__ = ["FadingModel", "TwoUserFadingModel", "PowerProfile"]

LOW_QUANTILE = 1e-4
HIGH_QUANTILE = 1 - 1e-6


@dataclass(frozen=True)
class FadingModel:
    """Law of a channel power gain ``h >= 0``.

    ``kind="exponential"`` is the power gain of Rayleigh amplitude fading;
    ``mean`` is its expectation.  ``kind="discrete"`` takes an explicit
    ``support`` and ``probs``.
    """

    kind: str = "exponential"
    mean: float = 1.0
    support: tuple = ()
    probs: tuple = ()
    n_points: int = 4096
    spacing: str = "log"
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.kind == "exponential":
            if not (self.mean > 0 and math.isfinite(self.mean)):
                raise ValueError("exponential mean must be positive and finite")
            if self.n_points < 2:
                raise ValueError("n_points must be >= 2")
            if self.spacing not in ("log", "quantile"):
                raise ValueError(f"unknown spacing {self.spacing!r}")
        elif self.kind == "discrete":
            s = np.asarray(self.support, dtype=float)
            p = np.asarray(self.probs, dtype=float)
            if s.ndim != 1 or s.size == 0 or s.shape != p.shape:
                raise ValueError("support and probs must be equal-length, non-empty")
            if np.any(s < 0) or not np.all(np.isfinite(s)):
                raise ValueError("support must be finite and non-negative")
            if np.any(np.diff(s) <= 0):
                raise ValueError("support must be strictly increasing")
            if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
                raise ValueError("probs must be non-negative and sum to 1")
        else:
            raise ValueError(f"unknown fading kind {self.kind!r}")

    @classmethod
    def exponential(cls, mean: float = 1.0, n_points: int = 4096,
                    spacing: str = "log", breakpoints: Sequence[float] = ()) -> "FadingModel":
        return cls("exponential", mean, n_points=n_points, spacing=spacing,
                   breakpoints=tuple(float(b) for b in breakpoints))

    @classmethod
    def discrete(cls, support: Sequence[float], probs: Sequence[float]) -> "FadingModel":
        return cls("discrete", support=tuple(map(float, support)),
                   probs=tuple(map(float, probs)))

    @property
    def continuous(self) -> bool:
        return self.kind == "exponential"

    def with_breakpoints(self, *points: float) -> "FadingModel":
        if not self.continuous:
            return self
        pts = tuple(sorted(set(self.breakpoints) | {float(p) for p in points}))
        return dataclasses.replace(self, breakpoints=pts)

    # ---- law --------------------------------------------------------------
    def sf(self, t):
        """``Pr(h > t)``."""
        t = np.asarray(t, dtype=float)
        if self.continuous:
            return np.where(t <= 0, 1.0, np.exp(-np.maximum(t, 0) / self.mean))
        s = np.asarray(self.support)
        p = np.asarray(self.probs)
        return np.sum(np.where(s[None, :] > t.reshape(-1, 1), p, 0.0), axis=1).reshape(t.shape)

    def cdf(self, t):
        """``Pr(h <= t)``."""
        t = np.asarray(t, dtype=float)
        if self.continuous:
            return np.where(t <= 0, 0.0, -np.expm1(-np.maximum(t, 0) / self.mean))
        return 1.0 - self.sf(t)

    def pdf(self, t):
        if not self.continuous:
            raise ValueError("discrete law has no density")
        t = np.asarray(t, dtype=float)
        return np.where(t < 0, 0.0, np.exp(-np.maximum(t, 0) / self.mean) / self.mean)

    def quantile(self, q):
        if not self.continuous:
            raise ValueError("quantile is only defined here for continuous laws")
        return -self.mean * np.log1p(-np.asarray(q, dtype=float))

    # ---- grid -------------------------------------------------------------
    @cached_property
    def edges(self) -> np.ndarray:
        if not self.continuous:
            raise ValueError("discrete laws have no cell edges")
        if self.spacing == "log":
            lo, hi = self.quantile([LOW_QUANTILE, HIGH_QUANTILE])
            inner = np.geomspace(lo, hi, self.n_points - 1)
        else:
            inner = self.quantile(np.arange(1, self.n_points) / self.n_points)
        extra = np.array([b for b in self.breakpoints if b > 0 and math.isfinite(b)])
        inner = np.unique(np.concatenate([inner, extra]))
        return np.concatenate([[0.0], inner, [np.inf]])

    @cached_property
    def _grid(self):
        if not self.continuous:
            return np.asarray(self.support, dtype=float), np.asarray(self.probs, dtype=float)
        m = self.mean
        a, b = self.edges[:-2], self.edges[1:-1]
        d = b - a
        # mass and conditional mean of each finite cell, cancellation-free
        one_minus_e = -np.expm1(-d / m)
        node = np.append(a + m - d * np.exp(-d / m) / one_minus_e, self.edges[-2] + m)
        w = np.exp(-self.edges[:-1] / m) * np.append(one_minus_e, 1.0)
        return node, w / w.sum()

    @property
    def h(self) -> np.ndarray:
        """Grid nodes, strictly increasing."""
        return self._grid[0]

    @property
    def w(self) -> np.ndarray:
        """Quadrature weights, summing to one."""
        return self._grid[1]

    def expect(self, values, infinite_aware: bool = False) -> float:
        from .numerics import expect
        return expect(self.w, values, infinite_aware)


@dataclass(frozen=True)
class TwoUserFadingModel:
    """Independent gains ``(h1, h2)`` with a product grid."""

    law1: FadingModel
    law2: FadingModel

    @classmethod
    def iid(cls, law: FadingModel) -> "TwoUserFadingModel":
        return cls(law, law)

    @cached_property
    def h1(self) -> np.ndarray:
        return np.broadcast_to(self.law1.h[:, None], self.shape)

    @cached_property
    def h2(self) -> np.ndarray:
        return np.broadcast_to(self.law2.h[None, :], self.shape)

    @cached_property
    def w(self) -> np.ndarray:
        return np.outer(self.law1.w, self.law2.w)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.law1.h.size, self.law2.h.size)

    @property
    def continuous(self) -> bool:
        return self.law1.continuous and self.law2.continuous

    def expect(self, values, infinite_aware: bool = False) -> float:
        from .numerics import expect
        return expect(self.w.ravel(), np.broadcast_to(values, self.shape).ravel(),
                      infinite_aware)


@dataclass(frozen=True, eq=False)
class PowerProfile:
    """Power per grid state with the Lagrange multiplier of its average
    power constraint."""

    values: np.ndarray
    multiplier: float
    mean_power: float
    budget: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.asarray(self.values) < 0):
            raise ValueError("power profile must be non-negative")
