"""``jamgame`` command-line entry point.

Exit status: 0 on success, 1 on bad input, 2 when a verification fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from typing import Optional

import numpy as np
from pydantic import ValidationError

from . import __version__
from .config import ScenarioConfig, SolutionRecord, load_config
from .fading_correlated import maxmin_two_user, maxmin_user
from .fading_uncorrelated import (capacity_fading_uncorrelated, joint_csi_kkt_residuals,
                                  solve_joint_csi_single, solve_joint_csi_two_user,
                                  two_user_kkt_residuals, waterfill_blind_jammer)
from .figures import FIGURES, FigureMismatchError, emit_figure, write_csv
from .nonfading import solve_eavesdrop, solve_full_info, verify_saddle_nonfading
from .verify import FAULTS, SUITES, dump_report, run_verification

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
ORACLE_TOL = 1e-6
RESIDUAL_TOL = 1e-6


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; 2 is reserved for failed verification
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _load(path: str) -> ScenarioConfig:
    try:
        return load_config(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    except ValidationError as exc:
        lines = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<root>"
            lines.append(f"{path}: field '{loc}': {err['msg']}")
        raise InputError("\n".join(lines)) from None
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# scenario runners: each returns (record fields, {csv name: (header, rows)})


def _run_nonfading_full(cfg):
    p, b, tol = cfg.channel_params(), cfg.power_budget(), cfg.tolerance()
    sol = solve_full_info(p, b, verify=True, cfg=tol)
    rep = verify_saddle_nonfading(p, b, sol, cfg.verify.n_samples, cfg.solver.seed)
    ok = sol.oracle_gap <= ORACLE_TOL and rep.passed
    fields = dict(
        strategies={"jammer": {"rho1": sol.jam.rho1, "rho2": sol.jam.rho2,
                               "sigmaNJ2": sol.jam.sigmaNJ2},
                    "region": sol.region.value, "snr": sol.snr, "note": sol.note},
        capacity_nats=sol.capacity_nats,
        verification={"passed": ok, "oracle_gap": sol.oracle_gap,
                      "saddle_max_violation": max(rep.max_jammer_violation,
                                                  rep.max_user_violation)})
    return fields, {}


def _run_nonfading_eaves(cfg):
    p, b, tol = cfg.channel_params(), cfg.power_budget(), cfg.tolerance()
    ep = cfg.eavesdrop_params()
    sol = solve_eavesdrop(p, ep, b, verify=True, cfg=tol)
    rep = verify_saddle_nonfading(p, b, sol, cfg.verify.n_samples, cfg.solver.seed, ep=ep)
    ok = sol.oracle_gap <= ORACLE_TOL and rep.passed
    fields = dict(
        strategies={"jammer": {"rho": sol.jam.rho, "sigmaNJ2": sol.jam.sigmaNJ2},
                    "snr": sol.snr, "fallback": sol.fallback, "note": sol.note},
        capacity_nats=sol.capacity_nats,
        verification={"passed": ok, "oracle_gap": sol.oracle_gap,
                      "saddle_max_violation": max(rep.max_jammer_violation,
                                                  rep.max_user_violation)})
    return fields, {}


def _run_fading_blind(cfg):
    b, c, tol = cfg.budget, cfg.channel, cfg.tolerance()
    model = cfg.fading_model()
    user = waterfill_blind_jammer(model, b.P1, c.sigmaN2, c.gamma, b.PJ, tol)
    J = np.full_like(model.h, b.PJ)
    cap = capacity_fading_uncorrelated(model, user, J, c.sigmaN2, c.gamma)
    resid = abs(user.mean_power - b.P1) / b.P1
    fields = dict(strategies={"user_water_level": 1 / user.multiplier, "jammer": "noise PJ"},
                  capacity_nats=cap, multipliers={"lambda": user.multiplier},
                  verification={"passed": resid <= RESIDUAL_TOL, "user_constraint": resid})
    return fields, {"profile.csv": (("h", "P", "J"), zip(model.h, user.values, J))}


def _run_fading_uncorrelated(cfg):
    b, c, tol = cfg.budget, cfg.channel, cfg.tolerance()
    model = cfg.fading_model()
    sol = solve_joint_csi_single(model, b.P1, b.PJ, c.sigmaN2, c.gamma, tol)
    kkt = joint_csi_kkt_residuals(model, sol, c.sigmaN2, c.gamma)
    fields = dict(strategies={"threshold": sol.threshold},
                  capacity_nats=sol.capacity_nats,
                  multipliers={"lambda": sol.lam, "mu": sol.mu},
                  verification={"passed": max(kkt.values()) <= RESIDUAL_TOL, **kkt})
    rows = zip(model.h, sol.user.values, sol.jammer.values)
    return fields, {"profile.csv": (("h", "P", "J"), rows)}


def _run_fading_uncorrelated_two(cfg):
    b, c, tol = cfg.budget, cfg.channel, cfg.tolerance()
    m2 = cfg.two_user_model()
    sol = solve_joint_csi_two_user(m2, b.P1, b.P2, b.PJ, c.sigmaN2, tol)
    kkt = two_user_kkt_residuals(m2, sol, c.sigmaN2)
    both = kkt.pop("both_active")
    ok = both == 0 and max(kkt.values()) <= RESIDUAL_TOL
    fields = dict(strategies={"threshold": sol.threshold,
                              "activity_probability": sol.activity_probability},
                  capacity_nats=sol.capacity_nats,
                  multipliers={"lambda1": sol.lambda1, "lambda2": sol.lambda2, "mu": sol.mu},
                  verification={"passed": ok, "both_active_states": both, **kkt,
                                **{f"constraint_{k}": v for k, v in sol.constraint_residuals.items()}})
    rows = zip(m2.h1.ravel(), m2.h2.ravel(), sol.user1.values.ravel(),
               sol.user2.values.ravel(), sol.jammer.values.ravel())
    return fields, {"profile.csv": (("h1", "h2", "P1", "P2", "J"), rows)}


def _run_fading_maxmin(cfg):
    b, tol = cfg.budget, cfg.tolerance()
    sol = maxmin_user(cfg.fading_model(), b.P1, b.PJ, cfg=tol)
    closed = max(abs(sol.mu * b.P1 - sol.active_probability),
                 abs(sol.lam * b.PJ - sol.active_probability))
    fields = dict(strategies={"threshold": sol.threshold,
                              "user_power_level": sol.user_power_level,
                              "jam_power_level": sol.jam_power_level},
                  capacity_nats=sol.capacity_nats,
                  multipliers={"lambda": sol.lam, "mu": sol.mu},
                  verification={"passed": closed <= 1e-10, "closed_form_residual": closed})
    g, j = sol.model, sol.jammer
    rows = zip(g.h, sol.user.values, j.total, j.rho, j.sigmaNJ2)
    return fields, {"profile.csv": (("h", "P", "J", "rho", "sigmaNJ2"), rows)}


def _run_fading_maxmin_two(cfg):
    b, tol = cfg.budget, cfg.tolerance()
    m2 = cfg.two_user_model()
    sol = maxmin_two_user(m2, b.P1, b.P2, b.PJ, tol)
    both = int(np.sum((sol.user1.values > 0) & (sol.user2.values > 0)))
    res = max(sol.constraint_residuals.values())
    fields = dict(strategies={"thresholds": list(sol.thresholds),
                              "user_power_levels": list(sol.user_power_levels),
                              "jam_power_level": sol.jam_power_level,
                              "activity_probability": sol.activity_probability},
                  capacity_nats=sol.capacity_nats,
                  multipliers={"lambda": sol.lam, "mu1": sol.mu1, "mu2": sol.mu2},
                  verification={"passed": both == 0 and res <= 1e-5, "both_active_states": both,
                                "grid_capacity_nats": sol.grid_capacity_nats,
                                **sol.constraint_residuals})
    rows = zip(m2.h1.ravel(), m2.h2.ravel(), sol.user1.values.ravel(),
               sol.user2.values.ravel(), sol.jammer.total.ravel())
    return fields, {"profile.csv": (("h1", "h2", "P1", "P2", "J"), rows)}


RUNNERS = {
    "nonfading-full": _run_nonfading_full,
    "nonfading-eaves": _run_nonfading_eaves,
    "fading-blind": _run_fading_blind,
    "fading-csi-uncorrelated": _run_fading_uncorrelated,
    "fading-csi-uncorrelated-two-user": _run_fading_uncorrelated_two,
    "fading-csi-correlated-maxmin": _run_fading_maxmin,
    "fading-csi-correlated-maxmin-two-user": _run_fading_maxmin_two,
}


def _plain(x):
    """numpy scalars and nested containers to JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def solve_scenario(cfg: ScenarioConfig) -> tuple[SolutionRecord, dict]:
    fields, tables = RUNNERS[cfg.scenario](cfg)
    fields = _plain(fields)
    record = SolutionRecord(scenario=cfg.model_dump(mode="json"), config_hash=cfg.config_hash(),
                            files=["solution.json", *sorted(tables)], **fields)
    return record, tables


def cmd_run(args) -> int:
    cfg = _load(args.config)
    try:
        record, tables = solve_scenario(cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    os.makedirs(args.out, exist_ok=True)
    for name, (header, rows) in tables.items():
        write_csv(os.path.join(args.out, name), header, rows)
    record.timestamp = None if args.no_timestamp else datetime.now(timezone.utc).isoformat()
    with open(os.path.join(args.out, "solution.json"), "w", encoding="utf-8") as fh:
        fh.write(record.model_dump_json(indent=2) + "\n")
    ok = bool(record.verification.get("passed", True))
    print(f"{cfg.scenario}: capacity {record.capacity_nats!r} nats"
          f"{'' if ok else ' (verification FAILED)'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_fig(args) -> int:
    cfg = _load(args.config)
    try:
        path = emit_figure(args.figure, cfg, args.out)
    except (FigureMismatchError, ValueError) as exc:
        raise InputError(str(exc)) from None
    print(path)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load(args.config)
    report = run_verification(cfg, args.suite, fault=args.inject_fault)
    text = dump_report(report)
    if args.out:
        os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for name in report["failed"]:
        print(f"FAILED: {name}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jamgame",
                     description="Jamming game solvers for Gaussian channels.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve a scenario and write solution.json")
    run.add_argument("config")
    run.add_argument("--out", required=True)
    run.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp so output is byte-stable")
    run.set_defaults(func=cmd_run)

    fig = sub.add_parser("fig", help="write figure data as CSV")
    fig.add_argument("figure", choices=sorted(FIGURES))
    fig.add_argument("config")
    fig.add_argument("--out", required=True)
    fig.set_defaults(func=cmd_fig)

    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument("config")
    ver.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    ver.add_argument("--out", help="write the report here instead of stdout")
    ver.add_argument("--inject-fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
