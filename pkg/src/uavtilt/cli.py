"""Command-line front end.

Subcommands::

    run       run one scenario; writes uav_report.csv, gue_report.csv,
              optimizer_trace.jsonl (optimal_hra only) and summary.json
    sweep     run one scenario per value of --axis; writes sweep.csv
    curves    single-site down-set received power vs distance (CSV columns:
              d2d_m, total_dbm, direct_only_dbm, reflected_only_dbm)
    pattern   vertical antenna pattern at 0.1 deg steps (CSV columns:
              theta_deg, element_db, array_db, total_db)
    optimize  GA only; prints the best tilts, writes optimizer_trace.jsonl

Report CSV columns: x_m, y_m, site, set, sir_usf_db, sir_csf_db (empty for
down-served points), rate_usf, rate_csf. Units: degrees, dB, meters.
Exit codes: 0 success, 1 usage/config error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from .antenna import AntennaArrayConfig, write_pattern_csv
from .channel import write_curves_csv
from .optimizer import TiltObjective, ga_optimize
from .scenario import (ConfigError, Scenario, SweepSpec, apply_overrides, build_budgets,
                       load_scenario, run_scenario, run_sweep, write_run, write_sweep_csv)

log = logging.getLogger("uavtilt")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _parse_set(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _scenario(args) -> Scenario:
    overrides = _parse_set(args.set)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.config:
        return load_scenario(args.config, overrides)
    return apply_overrides(Scenario(), overrides)


def _out_dir(args, s: Scenario) -> str:
    return args.out or os.path.join("runs", s.name)


def _common(p):
    p.add_argument("--config", help="INI scenario file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a scenario field (e.g. isd=1000, ga.iterations=10)")
    p.add_argument("--out", help="output directory (default runs/<name>)")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, help="fitness worker threads (results do not depend on it)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uavtilt", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    _common(sub.add_parser("run", help="run one scenario"))

    p = sub.add_parser("sweep", help="sweep one scenario field")
    _common(p)
    p.add_argument("--axis", required=True)
    p.add_argument("--values", required=True, help="comma-separated values")

    p = sub.add_parser("curves", help="received power vs distance CSV")
    p.add_argument("--h-uav", type=float, default=100.0)
    p.add_argument("--h-gbs", type=float, default=30.0)
    p.add_argument("--dt-angle", type=float, default=6.0)
    p.add_argument("--n-elements", type=int, default=8)
    p.add_argument("--d-min", type=float, default=10.0)
    p.add_argument("--d-max", type=float, default=2000.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--tx-power", type=float, default=46.0, help="dBm")
    p.add_argument("--out", required=True, help="CSV path")

    p = sub.add_parser("pattern", help="antenna pattern CSV")
    p.add_argument("--n-elements", type=int, default=8)
    p.add_argument("--tilt", type=float, default=-6.0, help="signed boresight elevation, deg")
    p.add_argument("--out", required=True, help="CSV path")

    _common(sub.add_parser("optimize", help="run the GA and print the best tilts"))
    return parser


def _cmd_run(args) -> None:
    s = _scenario(args)
    for p in write_run(run_scenario(s), _out_dir(args, s)):
        print(p)


def _cmd_sweep(args) -> None:
    s = _scenario(args)
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    rows = run_sweep(SweepSpec(s, args.axis, values))
    out = _out_dir(args, s)
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "sweep.csv")
    write_sweep_csv(rows, path)
    print(path)


def _cmd_curves(args) -> None:
    from .channel import ChannelParams
    d = np.arange(args.d_min, args.d_max + 0.5 * args.step, args.step)
    write_curves_csv(args.out, d, args.h_uav, cp=ChannelParams(tx_power_dbm=args.tx_power),
                     h_gbs=args.h_gbs, dt_angle=args.dt_angle, n_elements=args.n_elements)
    print(args.out)


def _cmd_pattern(args) -> None:
    write_pattern_csv(args.out, AntennaArrayConfig(args.n_elements, args.tilt))
    print(args.out)


def _cmd_optimize(args) -> None:
    s = _scenario(args)
    uav, _ = build_budgets(s)
    res = ga_optimize(TiltObjective(uav, threads=s.threads), uav.n_sites,
                      apply_overrides(s, {"ga.rng_seed": s.seed}).ga)
    out = _out_dir(args, s)
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "optimizer_trace.jsonl")
    res.write_trace(path)
    print(json.dumps({"best_fitness_db": round(res.best_fitness_db, 6),
                      "best_tilts": [round(float(t), 6) for t in res.best_tilts]}))
    print(path)


COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "curves": _cmd_curves,
            "pattern": _cmd_pattern, "optimize": _cmd_optimize}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
