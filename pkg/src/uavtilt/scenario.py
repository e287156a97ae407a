"""Scenario configuration, scheme execution, parameter sweeps and run output."""
from __future__ import annotations

import configparser
import csv
import dataclasses
import io
import json
import os
import zlib
from dataclasses import dataclass, field, fields, replace
from typing import Any, Sequence

import numpy as np

from .channel import ChannelParams
from .geometry import build_eval_grid, build_layout
from .optimizer import (GaConfig, OptResult, TiltObjective, ga_optimize, random_scheme,
                        single_angle_search)
from .radio import EicicConfig, LinkBudget, SirReport, evaluate_network

SCHEMES = ("optimal_hra", "hra_single", "random", "no_ut")
_SECTIONS = {"channel": ChannelParams, "eicic": EicicConfig, "ga": GaConfig}


class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""


@dataclass(frozen=True)
class Scenario:
    name: str = "default"
    isd: float = 500.0
    h_uav: float = 100.0
    h_gue: float = 1.5
    h_gbs_down: float = 30.0
    h_sep: float = 1.0
    dt_angle: float = 6.0
    n_elements: int = 8
    grid_resolution: float = 10.0
    scheme: str = "optimal_hra"
    seed: int = 0
    single_step: float = 1.0
    threads: int = 1
    channel: ChannelParams = field(default_factory=ChannelParams)
    eicic: EicicConfig = field(default_factory=EicicConfig)
    ga: GaConfig = field(default_factory=GaConfig)

    def __post_init__(self):
        for name in ("isd", "h_uav", "h_gue", "h_gbs_down", "grid_resolution", "single_step"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.h_sep < 0:
            raise ConfigError(f"h_sep must be non-negative, got {self.h_sep}")
        if self.dt_angle < 0:
            raise ConfigError(f"dt_angle must be non-negative, got {self.dt_angle}")
        if self.n_elements < 1:
            raise ConfigError(f"n_elements must be >= 1, got {self.n_elements}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _coerce(cls, name: str, raw: Any):
    types = {f.name: f.type for f in fields(cls)}
    if name not in types:
        raise ConfigError(f"unknown field {name!r} for {cls.__name__}")
    t = types[name]
    if not isinstance(raw, str):
        return raw
    try:
        if t == "int":
            return int(raw)
        if t == "float":
            return float(raw)
        return raw.strip()
    except ValueError:
        raise ConfigError(f"field {name!r}: cannot parse {raw!r} as {t}") from None


def apply_overrides(s: Scenario, overrides: dict[str, Any]) -> Scenario:
    """Return ``s`` with ``{"isd": "1000", "ga.iterations": 10, ...}`` applied."""
    top: dict[str, Any] = {}
    nested: dict[str, dict[str, Any]] = {}
    for key, raw in overrides.items():
        if "." in key:
            section, name = key.split(".", 1)
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section {section!r} in {key!r}")
            nested.setdefault(section, {})[name] = _coerce(_SECTIONS[section], name, raw)
        else:
            if key in _SECTIONS:
                raise ConfigError(f"{key!r} is a section; use {key}.<field>")
            top[key] = _coerce(Scenario, key, raw)
    try:
        for section, vals in nested.items():
            top[section] = replace(getattr(s, section), **vals)
        return replace(s, **top)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario(path, overrides: dict[str, Any] | None = None) -> Scenario:
    """Read an INI scenario file.

    Keys of the ``[scenario]`` section are :class:`Scenario` field names;
    ``[channel]``, ``[eicic]`` and ``[ga]`` sections hold the nested fields.
    ``overrides`` are applied after the file.
    """
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    values: dict[str, Any] = {}
    for section in parser.sections():
        if section == "scenario":
            values.update(parser.items(section))
        elif section in _SECTIONS:
            values.update({f"{section}.{k}": v for k, v in parser.items(section)})
        else:
            raise ConfigError(f"unknown config section [{section}]")
    values.update(overrides or {})
    return apply_overrides(Scenario(), values)


def dump_scenario(s: Scenario) -> str:
    parser = configparser.ConfigParser()
    d = s.to_dict()
    parser["scenario"] = {k: str(v) for k, v in d.items() if k not in _SECTIONS}
    for section in _SECTIONS:
        parser[section] = {k: str(v) for k, v in d[section].items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


@dataclass
class ScenarioResult:
    scenario: Scenario
    tilts: np.ndarray | None
    uav: SirReport
    gue: SirReport
    gue_no_ut: SirReport
    opt: OptResult | None = None
    baselines: dict = field(default_factory=dict)

    def summary(self) -> dict:
        # worker count is an execution setting; leaving it out keeps reports
        # byte-identical across --threads values
        scenario = self.scenario.to_dict()
        scenario.pop("threads")
        out = {
            "scenario": scenario,
            "tilts": None if self.tilts is None else [round(float(t), 6) for t in self.tilts],
            "uav": self.uav.summary(),
            "gue": self.gue.summary(),
            "gue_median_shift_db": self.gue.median_sir_usf_db - self.gue_no_ut.median_sir_usf_db,
            "baselines": self.baselines,
        }
        if self.opt is not None:
            out["optimizer"] = {"best_fitness_db": self.opt.best_fitness_db,
                                "evaluations": self.opt.evaluations,
                                "source": self.opt.source,
                                "fitness_history": self.opt.fitness_history}
        return out


def build_budgets(s: Scenario):
    layout = build_layout(s.isd, tiers=2, h_down=s.h_gbs_down, h_sep=s.h_sep, dt_angle=s.dt_angle)
    uav_grid = build_eval_grid(layout, s.h_uav, s.grid_resolution)
    gue_grid = build_eval_grid(layout, s.h_gue, s.grid_resolution)
    uav = LinkBudget(layout, uav_grid, s.channel, s.n_elements)
    gue = LinkBudget(layout, gue_grid, s.channel, s.n_elements)
    return uav, gue


def resolve_tilts(s: Scenario, uav: LinkBudget, objective: TiltObjective | None = None):
    """Tilt vector chosen by ``s.scheme`` (None for no_ut), plus optimizer output."""
    n = uav.n_sites
    objective = objective or TiltObjective(uav, threads=s.threads)
    if s.scheme == "no_ut":
        return None, None, {}
    if s.scheme == "hra_single":
        angle, fit = single_angle_search(objective, n, s.single_step)
        return np.full(n, angle), None, {"hra_single": {"angle": angle, "fitness_db": fit}}
    if s.scheme == "random":
        tilts, fit = random_scheme(objective, n, s.seed)
        return tilts, None, {"random": {"fitness_db": fit}}
    angle, single_fit = single_angle_search(objective, n, s.single_step)
    rnd, rnd_fit = random_scheme(objective, n, s.seed)
    ga_cfg = replace(s.ga, rng_seed=s.seed)
    res = ga_optimize(objective, n, ga_cfg, candidates=[np.full(n, angle), rnd])
    baselines = {"hra_single": {"angle": angle, "fitness_db": single_fit},
                 "random": {"fitness_db": rnd_fit}}
    return res.best_tilts, res, baselines


def run_scenario(s: Scenario, budgets=None) -> ScenarioResult:
    uav, gue = budgets or build_budgets(s)
    tilts, opt, baselines = resolve_tilts(s, uav)
    mode = "no_ut" if tilts is None else "dual_antenna"
    uav_rep = evaluate_network(uav, tilts, mode=mode, serving="any", eicic=s.eicic)
    gue_rep = evaluate_network(gue, tilts, mode=mode, serving="down", eicic=s.eicic)
    gue_ref = evaluate_network(gue, None, mode="no_ut", serving="down", eicic=s.eicic)
    return ScenarioResult(s, tilts, uav_rep, gue_rep, gue_ref, opt, baselines)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))


def write_run(result: ScenarioResult, out_dir) -> list[str]:
    """Write ``uav_report.csv``, ``gue_report.csv``, ``summary.json`` (and the GA trace)."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    p = os.path.join(out_dir, "uav_report.csv")
    result.uav.write_csv(p)
    paths.append(p)
    p = os.path.join(out_dir, "gue_report.csv")
    result.gue.write_csv(p)
    paths.append(p)
    if result.opt is not None:
        p = os.path.join(out_dir, "optimizer_trace.jsonl")
        result.opt.write_trace(p)
        paths.append(p)
    p = os.path.join(out_dir, "summary.json")
    with open(p, "w") as fh:
        json.dump(result.summary(), fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    paths.append(p)
    return paths


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    axis: str
    values: Sequence[Any]

    def __post_init__(self):
        head = self.axis.split(".", 1)
        names = {f.name for f in fields(Scenario)}
        if head[0] not in names or (len(head) == 1 and head[0] in _SECTIONS):
            raise ConfigError(f"sweep axis {self.axis!r} is not a scenario field")


def derived_seed(master: int, axis: str, value) -> int:
    """Stable per-cell seed from the master seed and the (axis, value) pair."""
    return zlib.crc32(f"{master}:{axis}:{value}".encode()) & 0x7FFFFFFF


SWEEP_COLUMNS = ["value", "scheme", "seed", "min_sir_usf_db", "median_sir_usf_db",
                 "min_sir_csf_db", "median_sir_csf_db", "min_rate_usf", "median_rate_usf",
                 "sum_rate_usf", "min_rate_csf", "median_rate_csf", "sum_rate_csf",
                 "gue_median_sir_db"]


def run_sweep(spec: SweepSpec) -> list[dict]:
    rows = []
    values = sorted(spec.values, key=lambda v: float(v) if _is_number(v) else str(v))
    for v in values:
        seed = derived_seed(spec.base.seed, spec.axis, v)
        s = apply_overrides(spec.base, {spec.axis: v, "seed": seed})
        r = run_scenario(s)
        ru, rc = r.uav.rate_stats("usf"), r.uav.rate_stats("csf")
        rows.append({
            "value": v, "scheme": s.scheme, "seed": seed,
            "min_sir_usf_db": r.uav.min_sir_usf_db, "median_sir_usf_db": r.uav.median_sir_usf_db,
            "min_sir_csf_db": r.uav.min_sir_csf_db, "median_sir_csf_db": r.uav.median_sir_csf_db,
            "min_rate_usf": ru["min"], "median_rate_usf": ru["median"], "sum_rate_usf": ru["sum"],
            "min_rate_csf": rc["min"], "median_rate_csf": rc["median"], "sum_rate_csf": rc["sum"],
            "gue_median_sir_db": r.gue.median_sir_usf_db,
            "_result": r,
        })
    return rows


def _is_number(v) -> bool:
    try:
        float(v)
        return True
    except (TypeError, ValueError):
        return False


def write_sweep_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([r[c] if isinstance(r[c], (str, int)) else f"{r[c]:.6f}"
                        for c in SWEEP_COLUMNS])
