"""Figure data as CSV tables (no plotting)."""

from __future__ import annotations

import csv
import os
from typing import Iterable, Sequence

import numpy as np

from .channel import ChannelParams
from .config import ScenarioConfig
from .fading_correlated import jammer_best_response, maxmin_user
from .fading_uncorrelated import solve_joint_csi_single, waterfill_blind_jammer
from .nonfading import classify_region, solve_eavesdrop, solve_full_info

FIGURES = {
    "fig2": ("nonfading-full", ("h1", "h2", "region")),
    "fig4": ("nonfading-eaves", ("h1", "snr_full", "snr_eaves")),
    "fig5": ("fading-csi-uncorrelated", ("h", "P", "J", "P_nojammer")),
    "fig7": ("fading-csi-correlated-maxmin", ("hP", "J_best_response")),
    "fig8": ("fading-csi-correlated-maxmin", ("h", "P_maxmin", "J_response")),
}

FIG2_POINTS = 200
FIG4_POINTS = 200


class FigureMismatchError(ValueError):
    """The configuration describes a different scenario than the figure."""


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def fig2_rows(cfg: ScenarioConfig, n: int = FIG2_POINTS):
    """Region label on the grid ``(0, 2]^2`` with step ``2/n``."""
    c, b = cfg.channel, cfg.power_budget()
    axis = 2.0 * np.arange(1, n + 1) / n
    rows = []
    for h1 in axis:
        for h2 in axis:
            params = ChannelParams(float(h1), float(h2), c.gamma, c.sigmaN2)
            rows.append((h1, h2, classify_region(params, b).value))
    return rows


def fig4_rows(cfg: ScenarioConfig, n: int = FIG4_POINTS):
    c, b, ep = cfg.channel, cfg.power_budget(), cfg.eavesdrop_params()
    tol = cfg.tolerance()
    rows = []
    for h1 in np.geomspace(0.01, 10.0, n):
        params = ChannelParams(float(h1), c.h2, c.gamma, c.sigmaN2)
        full = solve_full_info(params, b, cfg=tol).snr
        eaves = solve_eavesdrop(params, ep, b, cfg=tol).snr
        rows.append((h1, full, eaves))
    return rows


def fig5_rows(cfg: ScenarioConfig):
    model, b, c = cfg.fading_model(), cfg.budget, cfg.channel
    tol = cfg.tolerance()
    sol = solve_joint_csi_single(model, b.P1, b.PJ, c.sigmaN2, c.gamma, tol)
    free = waterfill_blind_jammer(model, b.P1, c.sigmaN2, c.gamma, 0.0, tol)
    return list(zip(model.h, sol.user.values, sol.jammer.values, free.values))


def fig7_rows(cfg: ScenarioConfig):
    """Best response against the flat profile ``P = Pbar``; the received
    power ``hP`` then sweeps the whole grid."""
    model, b = cfg.fading_model(), cfg.budget
    P = np.full_like(model.h, b.P1)
    jam = jammer_best_response(model, P, b.PJ, cfg.tolerance())
    return list(zip(model.h * P, jam.total))


def fig8_rows(cfg: ScenarioConfig):
    b = cfg.budget
    sol = maxmin_user(cfg.fading_model(), b.P1, b.PJ, cfg=cfg.tolerance())
    return list(zip(sol.model.h, sol.user.values, sol.jammer.total))


_ROWS = {"fig2": fig2_rows, "fig4": fig4_rows, "fig5": fig5_rows,
         "fig7": fig7_rows, "fig8": fig8_rows}


def emit_figure(fig: str, cfg: ScenarioConfig, out_dir: str) -> str:
    """Write ``<out_dir>/<fig>.csv`` and return its path."""
    if fig not in FIGURES:
        raise ValueError(f"unknown figure {fig!r}; choose from {sorted(FIGURES)}")
    scenario, header = FIGURES[fig]
    if cfg.scenario != scenario:
        raise FigureMismatchError(
            f"{fig} needs scenario {scenario!r}, config has {cfg.scenario!r}")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{fig}.csv")
    write_csv(path, header, _ROWS[fig](cfg))
    return path
