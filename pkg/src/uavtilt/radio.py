"""Association, USF/CSF SIR, eICIC rates and network-wide reports."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .antenna import ElementParams, array_factor_power_sines
from .channel import ChannelParams, link_fields
from .geometry import EvalGrid, NetworkLayout, link_geometry

Mode = Literal["dual_antenna", "no_ut"]
Serving = Literal["any", "down"]


@dataclass(frozen=True)
class EicicConfig:
    beta: float = 0.5  # USF duty cycle

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")


@dataclass(frozen=True)
class Association:
    site_id: int
    antenna_set: str
    rsrp_dbm: float


@dataclass(frozen=True)
class SirSample:
    point: int
    assoc: Association
    sir_usf_db: float
    sir_csf_db: float | None
    rate_usf: float
    rate_csf: float


def _num(x: float):
    return None if np.isnan(x) else x


def db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


class LinkBudget:
    """Received-power tables from every site to every point of one grid.

    Down-set powers do not depend on the up-tilt angles and are computed once;
    up-set powers are rebuilt per tilt vector from cached geometry.
    """

    def __init__(self, layout: NetworkLayout, grid: EvalGrid, channel: ChannelParams = ChannelParams(),
                 n_elements: int = 8, element: ElementParams = ElementParams()):
        self.layout = layout
        self.grid = grid
        self.channel = channel
        self.n_elements = n_elements
        self.element = element
        n_pts, n_sites = len(grid.points), len(layout.sites)
        k = channel.tx_power_mw * channel.friis_factor

        self.down_mw = np.empty((n_pts, n_sites))
        self._up_sin = np.empty((n_pts, n_sites))
        self._up_static = np.empty((n_pts, n_sites))
        self._up_alpha = np.empty(n_sites)
        theta3 = element.theta_3db
        for j, site in enumerate(layout.sites):
            gd = link_geometry(site, "down", grid.points, grid.height)
            direct, reflected, alpha = link_fields(gd, "down", channel, n_elements,
                                                   site.tilt("down"), element)
            self.down_mw[:, j] = k * np.abs(direct + reflected) ** alpha

            gu = link_geometry(site, "up", grid.points, grid.height)
            ge = element.g_max - np.minimum(12.0 * (gu.theta / theta3) ** 2, element.sll_limit)
            self._up_sin[:, j] = np.sin(np.deg2rad(gu.theta))
            self._up_static[:, j] = 10.0 ** (ge / 10.0) / gu.l
            self._up_alpha[j] = float(np.asarray(
                link_fields(gu, "up", channel, 1, 0.0, element)[2]))
        self._k = k
        self._up_scale = k * self._up_static ** self._up_alpha[None, :]
        self._alpha_is_2 = bool(np.all(self._up_alpha == 2.0))

    @property
    def n_sites(self) -> int:
        return self.down_mw.shape[1]

    def up_mw(self, tilts) -> np.ndarray:
        tilts = np.asarray(tilts, dtype=float)
        if tilts.shape != (self.n_sites,):
            raise ValueError(f"expected {self.n_sites} tilt angles, got shape {tilts.shape}")
        x = self._up_sin - np.sin(np.deg2rad(tilts))[None, :]
        af2 = array_factor_power_sines(x, self.n_elements)
        if self._alpha_is_2:
            return self._up_scale * (af2 * af2)
        return self._up_scale * af2 ** self._up_alpha[None, :]


@dataclass
class SirReport:
    points: np.ndarray
    site: np.ndarray          # serving site id
    is_up: np.ndarray         # serving set is the up-tilted array
    rsrp_dbm: np.ndarray
    sir_usf_db: np.ndarray
    sir_csf_db: np.ndarray    # nan where served by a down-tilted array
    rate_usf: np.ndarray
    rate_csf: np.ndarray
    beta: float

    def __len__(self):
        return len(self.site)

    @property
    def min_sir_usf_db(self) -> float:
        return float(np.min(self.sir_usf_db))

    @property
    def min_sir_csf_db(self) -> float:
        """Minimum CSF SIR over up-served points (nan if none)."""
        v = self.sir_csf_db[self.is_up]
        return float(np.min(v)) if v.size else float("nan")

    @property
    def median_sir_usf_db(self) -> float:
        return float(np.median(self.sir_usf_db))

    @property
    def median_sir_csf_db(self) -> float:
        v = self.sir_csf_db[self.is_up]
        return float(np.median(v)) if v.size else float("nan")

    def cdf(self, which: str = "usf") -> np.ndarray:
        v = self.sir_usf_db if which == "usf" else self.sir_csf_db[self.is_up]
        return np.sort(v)

    def histogram(self, edges, which: str = "usf") -> np.ndarray:
        """Counts per SIR bin; outer bins are open so counts sum to the sample count."""
        v = self.cdf(which)
        e = np.asarray(edges, dtype=float).copy()
        e[0], e[-1] = -np.inf, np.inf
        return np.histogram(v, bins=e)[0]

    def rate_stats(self, which: str = "usf") -> dict:
        r = self.rate_usf if which == "usf" else self.rate_csf
        return {"min": float(np.min(r)), "median": float(np.median(r)), "sum": float(np.sum(r))}

    def samples(self) -> Iterator[SirSample]:
        for i in range(len(self)):
            a = Association(int(self.site[i]), "up" if self.is_up[i] else "down",
                            float(self.rsrp_dbm[i]))
            csf = float(self.sir_csf_db[i]) if self.is_up[i] else None
            yield SirSample(i, a, float(self.sir_usf_db[i]), csf,
                            float(self.rate_usf[i]), float(self.rate_csf[i]))

    def summary(self) -> dict:
        return {
            "n_points": len(self),
            "n_up_served": int(np.sum(self.is_up)),
            "min_sir_usf_db": self.min_sir_usf_db,
            "median_sir_usf_db": self.median_sir_usf_db,
            "min_sir_csf_db": _num(self.min_sir_csf_db),
            "median_sir_csf_db": _num(self.median_sir_csf_db),
            "rate_usf": self.rate_stats("usf"),
            "rate_csf": self.rate_stats("csf"),
            "beta": self.beta,
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x_m", "y_m", "site", "set", "sir_usf_db", "sir_csf_db",
                        "rate_usf", "rate_csf"])
            for i in range(len(self)):
                csf = f"{self.sir_csf_db[i]:.6f}" if self.is_up[i] else ""
                w.writerow([f"{self.points[i, 0]:.2f}", f"{self.points[i, 1]:.2f}",
                            int(self.site[i]), "up" if self.is_up[i] else "down",
                            f"{self.sir_usf_db[i]:.6f}", csf,
                            f"{self.rate_usf[i]:.6f}", f"{self.rate_csf[i]:.6f}"])

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


def associate_tables(down_mw: np.ndarray, up_mw: np.ndarray | None, serving: Serving = "any"):
    """Highest-RSRP association over (site, set) candidates.

    Returns (site ids, is_up, serving power in mW). Ties go to the lower site
    id, then to the down set, because candidates are ordered (site, down/up)
    and argmax keeps the first maximum.
    """
    if up_mw is None or serving == "down":
        j = np.argmax(down_mw, axis=1)
        rows = np.arange(len(j))
        return j, np.zeros(len(j), dtype=bool), down_mw[rows, j]
    cand = np.stack([down_mw, up_mw], axis=2).reshape(len(down_mw), -1)
    idx = np.argmax(cand, axis=1)
    return idx // 2, (idx % 2).astype(bool), cand[np.arange(len(idx)), idx]


def sir_tables(down_mw, up_mw, site, is_up):
    """USF and CSF SIR (linear) for the given associations.

    USF interference is every other antenna set in the network, including the
    co-site one. CSF interference is every other site's up-tilted array; CSF is
    nan for down-served points.
    """
    rows = np.arange(len(site))
    if up_mw is None:
        up_mw = np.zeros_like(down_mw)
    serv = np.where(is_up, up_mw[rows, site], down_mw[rows, site])
    down_i = down_mw.copy()
    up_i = up_mw.copy()
    down_i[rows[~is_up], site[~is_up]] = 0.0
    up_i[rows[is_up], site[is_up]] = 0.0
    interf = down_i.sum(axis=1) + up_i.sum(axis=1)
    if np.any(interf <= 0):
        raise ValueError("zero interference: SIR undefined")
    usf = serv / interf
    csf = np.full(len(site), np.nan)
    if np.any(is_up):
        up_other = up_i[is_up].sum(axis=1)
        with np.errstate(divide="ignore"):
            csf[is_up] = serv[is_up] / up_other
    return usf, csf


def rates(sir_usf, sir_csf, is_up, beta: float):
    """Spectral efficiency per subframe type; down-served users get beta times USF."""
    c_usf = np.log2(1.0 + sir_usf)
    up_csf = np.log2(1.0 + np.where(is_up, sir_csf, 0.0))
    rate_usf = np.where(is_up, c_usf, beta * c_usf)
    rate_csf = np.where(is_up, up_csf, beta * c_usf)
    return rate_usf, rate_csf


def evaluate_powers(points, down_mw, up_mw, serving: Serving = "any",
                    eicic: EicicConfig = EicicConfig()) -> SirReport:
    site, is_up, serv = associate_tables(down_mw, up_mw, serving)
    usf, csf = sir_tables(down_mw, up_mw, site, is_up)
    r_usf, r_csf = rates(usf, csf, is_up, eicic.beta)
    return SirReport(points=np.asarray(points), site=site, is_up=is_up, rsrp_dbm=db(serv),
                     sir_usf_db=db(usf), sir_csf_db=db(csf), rate_usf=r_usf, rate_csf=r_csf,
                     beta=eicic.beta)


def evaluate_network(budget: LinkBudget, tilts=None, mode: Mode = "dual_antenna",
                     serving: Serving = "any", eicic: EicicConfig = EicicConfig()) -> SirReport:
    """Associate every grid point and compute SIRs and rates.

    ``serving="down"`` restricts association to down-tilted arrays (ground
    users); up-tilted arrays then act only as interferers. ``mode="no_ut"``
    removes the up-tilted arrays altogether.
    """
    if mode not in ("dual_antenna", "no_ut"):
        raise ValueError(f"unknown mode {mode!r}")
    if tilts is None:
        tilts = budget.layout.ut_angles
    up = budget.up_mw(tilts) if mode == "dual_antenna" else None
    return evaluate_powers(budget.grid.points, budget.down_mw, up, serving, eicic)


def min_sir_usf_db(budget: LinkBudget, tilts) -> float:
    """Objective used by the tilt optimisers (UAV association over both sets)."""
    down = budget.down_mw
    up = budget.up_mw(tilts)
    site, is_up, _ = associate_tables(down, up, "any")
    usf, _ = sir_tables(down, up, site, is_up)
    return float(db(np.min(usf)))


def associate(point, layout: NetworkLayout, height: float, channel: ChannelParams = ChannelParams(),
              tilts=None, n_elements: int = 8, serving: Serving = "any") -> Association:
    """Association of a single receiver (brute-force over all candidates)."""
    grid = EvalGrid(points=np.atleast_2d(np.asarray(point, dtype=float)), height=height, resolution=0.0)
    budget = LinkBudget(layout, grid, channel, n_elements)
    tilts = layout.ut_angles if tilts is None else tilts
    site, is_up, serv = associate_tables(budget.down_mw, budget.up_mw(tilts), serving)
    return Association(int(site[0]), "up" if is_up[0] else "down", float(db(serv[0])))


def sir_usf(down_mw, up_mw, assoc: Association) -> float:
    """USF SIR in dB of one receiver given its per-site power rows (mW)."""
    down = np.atleast_2d(down_mw)
    up = np.atleast_2d(up_mw)
    usf, _ = sir_tables(down, up, np.array([assoc.site_id]), np.array([assoc.antenna_set == "up"]))
    return float(db(usf[0]))


def sir_csf(down_mw, up_mw, assoc: Association) -> float:
    if assoc.antenna_set != "up":
        raise ValueError("CSF SIR is undefined for a down-served receiver (down arrays are muted)")
    down = np.atleast_2d(down_mw)
    up = np.atleast_2d(up_mw)
    _, csf = sir_tables(down, up, np.array([assoc.site_id]), np.array([True]))
    return float(db(csf[0]))


def rate(sir_usf_db: float, sir_csf_db: float | None, antenna_set: str,
         eicic: EicicConfig = EicicConfig()) -> tuple[float, float]:
    g_usf = 10.0 ** (sir_usf_db / 10.0)
    if antenna_set == "up":
        return float(np.log2(1 + g_usf)), float(np.log2(1 + 10.0 ** (sir_csf_db / 10.0)))
    c = eicic.beta * float(np.log2(1 + g_usf))
    return c, c
