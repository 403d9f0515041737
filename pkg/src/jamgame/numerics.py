"""Deterministic numerical kernels shared by the solvers.

Root bracketing, real cubic roots, expectations over discretised fading
laws and the dense-grid-plus-polish minimisation used as a brute-force
oracle throughout the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

__all__ = [
    "ToleranceConfig",
    "ConvergenceError",
    "BracketError",
    "GridResult",
    "bisect",
    "cubic_roots",
    "expect",
    "grid_minimize",
    "minimize_interval",
]


@dataclass(frozen=True)
class ToleranceConfig:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-13
    max_iter: int = 500
    grid_resolution: int = 512
    seed: int = 0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be >= 2")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


DEFAULT_TOL = ToleranceConfig()


class BracketError(ValueError):
    """Raised when a root-finding bracket does not straddle a sign change."""


class ConvergenceError(RuntimeError):
    """Iterative search stopped before meeting its tolerance.

    ``best`` holds the last iterate and ``residuals`` whatever diagnostic
    residuals the caller attached.
    """

    def __init__(self, message, best=None, residuals=None):
        super().__init__(message)
        self.best = best
        self.residuals = residuals or {}


def bisect(f: Callable[[float], float], lo: float, hi: float,
           cfg: ToleranceConfig = DEFAULT_TOL) -> float:
    """Root of a scalar function on a sign-changing bracket.

    Backed by Brent's method, which keeps the bisection guarantee of never
    leaving the bracket while converging superlinearly on smooth residuals.

    Raises
    ------
    BracketError
        If ``f(lo)`` and ``f(hi)`` have the same strict sign.
    ConvergenceError
        If ``cfg.max_iter`` iterations do not meet the tolerance.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(
            f"bracket [{lo!r}, {hi!r}] does not straddle a root "
            f"(f(lo)={flo!r}, f(hi)={fhi!r})")
    root, info = optimize.brentq(
        f, lo, hi, xtol=cfg.abs_tol, rtol=max(cfg.rel_tol, 4 * np.finfo(float).eps),
        maxiter=cfg.max_iter, full_output=True, disp=False)
    if not info.converged:
        raise ConvergenceError(
            f"bisection did not converge in {cfg.max_iter} iterations",
            best=root, residuals={"f(best)": f(root)})
    return float(root)


def _polyval(coeffs, x):
    return np.polyval(coeffs, x)


def cubic_roots(a3: float, a2: float, a1: float, a0: float) -> list[float]:
    """Real roots of ``a3 x^3 + a2 x^2 + a1 x + a0``, sorted ascending.

    Leading zero coefficients degrade the problem to a quadratic or a
    linear equation.  Roots come from the companion-matrix eigenvalues and
    are then Newton-polished on the real line, which keeps the backward
    error at roundoff level.
    """
    coeffs = np.array([a3, a2, a1, a0], dtype=float)
    if not np.any(coeffs):
        raise ValueError("all polynomial coefficients are zero")
    nz = np.flatnonzero(coeffs)
    coeffs = coeffs[nz[0]:]
    if coeffs.size == 1:
        return []
    scale = np.max(np.abs(coeffs))
    dcoeffs = np.polyder(coeffs)
    out: list[float] = []
    for z in np.roots(coeffs):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        r = float(z.real)
        for _ in range(8):
            d = _polyval(dcoeffs, r)
            if d == 0.0:
                break
            step = _polyval(coeffs, r) / d
            r_new = r - step
            if abs(_polyval(coeffs, r_new)) >= abs(_polyval(coeffs, r)):
                break
            r = r_new
        if abs(_polyval(coeffs, r)) <= 1e-9 * scale * max(1.0, abs(r) ** 3):
            out.append(r)
    out.sort()
    deduped: list[float] = []
    for r in out:
        if not deduped or abs(r - deduped[-1]) > 1e-9 * max(1.0, abs(r)):
            deduped.append(r)
    return deduped


def expect(weights: np.ndarray, values, infinite_aware: bool = False) -> float:
    """Quadrature sum ``sum_i w_i f(h_i)`` over a discretised law.

    ``values`` are the per-state function values (already evaluated on the
    grid).  States with zero weight are ignored even if their value is not
    finite; a non-finite value on a positive-weight state raises unless
    ``infinite_aware`` is set, in which case ``inf`` propagates.
    """
    w = np.asarray(weights, dtype=float)
    v = np.broadcast_to(np.asarray(values, dtype=float), w.shape)
    live = w > 0
    bad = live & ~np.isfinite(v)
    if np.any(bad):
        if not infinite_aware:
            raise ValueError("integrand is not finite on a positive-weight state")
        if np.any(np.isnan(v[bad])):
            raise ValueError("integrand is NaN on a positive-weight state")
    return float(np.dot(w[live], v[live]))


@dataclass(frozen=True)
class GridResult:
    argmin: tuple[float, ...]
    min: float
    grid_argmin: tuple[float, ...]
    grid_min: float
    polished: bool


def grid_minimize(objective: Callable[..., np.ndarray],
                  box: Sequence[tuple[float, float]],
                  cfg: ToleranceConfig = DEFAULT_TOL,
                  resolution: int | Sequence[int] | None = None,
                  polish: bool = True) -> GridResult:
    """Dense grid scan of a box followed by a bounded local polish.

    ``objective`` must accept one broadcastable array per axis and return
    an array of values.  Ties on the grid resolve to the lowest flat index.
    The polish is a bounded Powell search started at the grid winner and is
    kept only when it improves on it.
    """
    box = [(float(lo), float(hi)) for lo, hi in box]
    ndim = len(box)
    if resolution is None:
        resolution = cfg.grid_resolution
    if np.isscalar(resolution):
        resolution = [int(resolution)] * ndim
    axes = [np.linspace(lo, hi, n) if hi > lo else np.array([lo])
            for (lo, hi), n in zip(box, resolution)]
    mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
    values = np.asarray(objective(*mesh), dtype=float)
    values = np.broadcast_to(values, tuple(a.size for a in axes))
    values = np.where(np.isnan(values), np.inf, values)
    flat = int(np.argmin(values))
    idx = np.unravel_index(flat, values.shape)
    x_grid = tuple(float(a[i]) for a, i in zip(axes, idx))
    f_grid = float(values[idx])
    if not polish or not np.isfinite(f_grid):
        return GridResult(x_grid, f_grid, x_grid, f_grid, False)

    def scalar(x):
        v = float(objective(*[np.float64(c) for c in x]))
        return np.inf if np.isnan(v) else v

    active = [hi > lo for lo, hi in box]
    x_best, f_best = np.array(x_grid), f_grid
    if any(active):
        bounds = [(lo, hi) for lo, hi in box]
        x0 = np.array(x_grid)
        for _ in range(3):
            res = optimize.minimize(
                scalar, x0, method="Powell", bounds=bounds,
                options={"xtol": 1e-12, "ftol": 1e-15, "maxiter": 20000})
            if res.fun < f_best:
                x_best, f_best = np.clip(res.x, [b[0] for b in bounds],
                                         [b[1] for b in bounds]), float(res.fun)
            if np.allclose(res.x, x0, rtol=0, atol=1e-13):
                break
            x0 = x_best
    polished = f_best < f_grid
    return GridResult(tuple(float(c) for c in x_best), f_best, x_grid, f_grid,
                      polished)


def minimize_interval(f: Callable[[float], float], lo: float, hi: float,
                      cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[float, float]:
    """Bounded scalar minimisation (Brent's method on ``[lo, hi]``).

    Both endpoints are also evaluated, so a minimiser sitting on the
    boundary is returned exactly.
    """
    if hi <= lo:
        return float(lo), float(f(lo))
    res = optimize.minimize_scalar(
        f, bounds=(lo, hi), method="bounded",
        options={"xatol": max(cfg.abs_tol, 1e-12 * (hi - lo)), "maxiter": cfg.max_iter})
    cands = [(float(res.fun), float(res.x)), (float(f(lo)), float(lo)),
             (float(f(hi)), float(hi))]
    fbest, xbest = min(cands)
    return xbest, fbest
