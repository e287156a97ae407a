"""Height-dependent two-ray ground-reflection received power model."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .antenna import AntennaArrayConfig, ElementParams, total_gain_linear
from .geometry import AntennaSet, GbsSite, LinkGeometry, link_geometry_from_heights


@dataclass(frozen=True)
class ChannelParams:
    wavelength: float = 0.15
    eps_r: float = 15.0
    alpha0: float = 3.5
    h_tc: float = 500.0
    tx_power_dbm: float = 46.0

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if self.eps_r < 1:
            raise ValueError("eps_r must be >= 1")
        if self.alpha0 < 2:
            raise ValueError("alpha0 must be >= 2")
        if self.h_tc <= 0:
            raise ValueError("h_tc must be positive")

    @property
    def tx_power_mw(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 10.0)

    @property
    def friis_factor(self) -> float:
        return (self.wavelength / (4.0 * np.pi)) ** 2


@dataclass(frozen=True)
class RxPower:
    power_dbm: np.ndarray
    direct_only_dbm: np.ndarray
    reflected_only_dbm: np.ndarray


def fresnel_reflection(psi, eps_r: float = 15.0):
    """Reflection coefficient for cross-polarised antennas, ``(R_H - R_V) / 2``.

    ``psi`` is the grazing angle in degrees, lossless ground of relative
    permittivity ``eps_r``.
    """
    psi = np.asarray(psi, dtype=float)
    if np.any(psi <= 0) or np.any(psi > 90):
        raise ValueError("grazing angle must lie in (0, 90] degrees")
    s = np.sin(np.deg2rad(psi))
    c2 = np.cos(np.deg2rad(psi)) ** 2
    root = np.sqrt(eps_r - c2)
    r_h = (s - root) / (s + root)
    r_v = (eps_r * s - root) / (eps_r * s + root)
    return 0.5 * (r_h - r_v)


def reflected_path_gain(h, g_incident, h_gbs_down: float = 30.0, h_tc: float = 500.0):
    """Height schedule of the reflected-path gain applied to the incident gain."""
    h = np.asarray(h, dtype=float)
    g = np.asarray(g_incident, dtype=float)
    h_t = 2.0 * h_gbs_down + 2.0
    taper = g / 2.0 - h / (2.0 * h_tc) * (g - 1.0)
    return np.select(
        [h < h_t, h < 2.0 * h_t, h < 500.0],
        [g, g / 2.0, taper],
        default=np.full_like(taper, 0.5),
    )


def propagation_exponent(h, h_array: float, alpha0: float = 3.5):
    """Exponent applied to the field modulus. Dips below 2 on (h_array, 2 h_array) as written."""
    h = np.asarray(h, dtype=float)
    return np.where(h < 2.0 * h_array, alpha0 - h * (alpha0 - 2.0) / h_array, 2.0)


def _to_dbm(mw):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(mw)


def link_fields(geom: LinkGeometry, antenna_set: AntennaSet, cp: ChannelParams,
                n_elements: int, tilt, element: ElementParams = ElementParams(),
                dt_angle: float | None = None, h_down: float | None = None):
    """Direct and reflected complex field terms inside the modulus, plus the exponent.

    For the up set the reflected term is zero. ``dt_angle``/``h_down`` describe
    the reflecting down-tilted array (defaults: this array's own tilt/height).
    """
    direct = total_gain_linear(geom.theta, n_elements, tilt, element) / geom.l
    if antenna_set == "up":
        reflected = np.zeros_like(direct, dtype=complex)
    else:
        down_tilt = tilt if dt_angle is None else -dt_angle
        h_gbs = geom.tx_height if h_down is None else h_down
        g_inc = total_gain_linear(-geom.psi, n_elements, down_tilt, element)
        g_ref = reflected_path_gain(geom.rx_height, g_inc, h_gbs, cp.h_tc)
        phase = 2.0 * np.pi * geom.delta_d / cp.wavelength
        r = fresnel_reflection(geom.psi, cp.eps_r)
        reflected = r * g_ref * np.exp(1j * phase) / (geom.r1 + geom.r2)
    alpha = propagation_exponent(geom.rx_height, geom.tx_height, cp.alpha0)
    return direct, reflected, alpha


def received_power(site: GbsSite, antenna_set: AntennaSet, geom: LinkGeometry,
                   cp: ChannelParams, arrays: dict[str, AntennaArrayConfig]) -> RxPower:
    """Mean received power of one antenna set at the receiver(s) described by ``geom``."""
    cfg = arrays[antenna_set]
    tilt = site.tilt(antenna_set)
    direct, reflected, alpha = link_fields(geom, antenna_set, cp, cfg.n_elements, tilt, cfg.element)
    k = cp.tx_power_mw * cp.friis_factor
    total = k * np.abs(direct + reflected) ** alpha
    d_only = k * np.abs(direct) ** alpha
    r_only = k * np.abs(reflected) ** alpha
    return RxPower(power_dbm=_to_dbm(total), direct_only_dbm=_to_dbm(d_only),
                   reflected_only_dbm=_to_dbm(r_only))


def power_vs_distance(d2d, h_rx: float, cp: ChannelParams = ChannelParams(),
                      h_gbs: float = 30.0, dt_angle: float = 6.0, n_elements: int = 8,
                      element: ElementParams = ElementParams()) -> RxPower:
    """Down-set power curve of a single site versus horizontal distance."""
    site = GbsSite(id=0, position=(0.0, 0.0), h_down=h_gbs, dt_angle=dt_angle)
    geom = link_geometry_from_heights(d2d, h_gbs, h_rx)
    arrays = {"down": AntennaArrayConfig(n_elements, -dt_angle, element)}
    return received_power(site, "down", geom, cp, arrays)


def write_curves_csv(path, d2d, h_rx: float, **kwargs) -> int:
    d2d = np.asarray(d2d, dtype=float)
    rx = power_vs_distance(d2d, h_rx, **kwargs)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["d2d_m", "total_dbm", "direct_only_dbm", "reflected_only_dbm"])
        for row in zip(d2d, rx.power_dbm, rx.direct_only_dbm, rx.reflected_only_dbm):
            w.writerow([f"{row[0]:.2f}"] + [f"{v:.6f}" for v in row[1:]])
    return len(d2d)


def reflection_onset(d2d, rx: RxPower, min_run: float = 100.0) -> float:
    """First distance from which the reflected term out-powers the direct term for
    at least ``min_run`` meters. Short wins inside direct-pattern nulls are skipped.
    Returns nan if there is no such run.
    """
    d2d = np.asarray(d2d, dtype=float)
    wins = np.asarray(rx.reflected_only_dbm > rx.direct_only_dbm)
    start = None
    for i, w in enumerate(wins):
        if w and start is None:
            start = i
        elif not w and start is not None:
            if d2d[i - 1] - d2d[start] >= min_run:
                return float(d2d[start])
            start = None
    if start is not None and d2d[-1] - d2d[start] >= min_run:
        return float(d2d[start])
    return float("nan")
