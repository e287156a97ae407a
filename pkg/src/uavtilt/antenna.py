"""Vertical radiation pattern of a uniform linear array of directional elements."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class ElementParams:
    g_max: float = 8.0       # dBi
    theta_3db: float = 65.0  # deg
    sll_limit: float = 30.0  # dB

    def __post_init__(self):
        if not np.isfinite(self.g_max):
            raise ValueError("g_max must be finite")
        if self.theta_3db <= 0 or self.sll_limit <= 0:
            raise ValueError("theta_3db and sll_limit must be positive")


@dataclass(frozen=True)
class AntennaArrayConfig:
    n_elements: int = 8
    tilt: float = 0.0  # signed boresight elevation, deg
    element: ElementParams = field(default_factory=ElementParams)
    spacing: float = 0.5  # wavelengths

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError(f"n_elements must be >= 1, got {self.n_elements}")
        if not -90.0 <= self.tilt <= 90.0:
            raise ValueError(f"tilt must lie in [-90, 90], got {self.tilt}")

    def with_tilt(self, tilt: float) -> "AntennaArrayConfig":
        return replace(self, tilt=tilt)


def _check_theta(theta):
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) > 90.0 + 1e-9):
        raise ValueError("elevation angle must lie in [-90, 90] degrees")
    return theta


def element_gain_db(theta, p: ElementParams = ElementParams()):
    theta = _check_theta(theta)
    return p.g_max - np.minimum(12.0 * (theta / p.theta_3db) ** 2, p.sll_limit)


def array_factor_power(theta, n_elements: int, tilt, spacing: float = 0.5):
    """Squared normalised array factor ``|A_f|^2`` (linear); broadcasts over theta and tilt.

    The removable singularity where the element phases align is replaced by
    its limit ``n_elements``.
    """
    x = np.sin(np.deg2rad(theta)) - np.sin(np.deg2rad(tilt))
    return array_factor_power_sines(x, n_elements, spacing)


def array_factor_power_sines(x, n_elements: int, spacing: float = 0.5):
    """``|A_f|^2`` as a function of ``x = sin(theta) - sin(tilt)``."""
    half = np.pi * spacing * np.asarray(x, dtype=float)
    den = np.sin(half)
    num = np.sin(n_elements * half)
    den = den * den
    num = num * num
    aligned = den < 1e-24
    if np.any(aligned):
        num = np.where(aligned, float(n_elements), num)
        den = np.where(aligned, 1.0 / n_elements, den)
    return num / (n_elements * den)


def array_factor_power_db(theta, cfg: AntennaArrayConfig):
    theta = _check_theta(theta)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(array_factor_power(theta, cfg.n_elements, cfg.tilt, cfg.spacing))


def total_gain_db(theta, cfg: AntennaArrayConfig):
    return element_gain_db(theta, cfg.element) + array_factor_power_db(theta, cfg)


def total_gain_linear(theta, n_elements: int, tilt, element: ElementParams = ElementParams(),
                      spacing: float = 0.5):
    """Linear power gain, element factor times ``|A_f|^2``. No range check (hot path)."""
    ge = element.g_max - np.minimum(12.0 * (np.asarray(theta) / element.theta_3db) ** 2,
                                    element.sll_limit)
    return 10.0 ** (ge / 10.0) * array_factor_power(theta, n_elements, tilt, spacing)


def hpbw_deg(cfg: AntennaArrayConfig, tol: float = 0.01, step: float = 0.05) -> float:
    """Numeric -3 dB main-lobe width of the total pattern around boresight."""
    if cfg.n_elements < 2:
        raise ValueError("half-power beam width needs at least two elements")
    peak = float(total_gain_db(cfg.tilt, cfg))

    def below(t):
        return float(total_gain_db(t, cfg)) < peak - 3.0

    def edge(direction):
        inner = cfg.tilt
        outer = float(np.clip(inner + direction * step, -90.0, 90.0))
        while not below(outer):
            if abs(outer) >= 90.0:
                raise ValueError("no -3 dB crossing within [-90, 90] degrees")
            inner = outer
            outer = float(np.clip(outer + direction * step, -90.0, 90.0))
        while abs(outer - inner) > tol:
            mid = 0.5 * (inner + outer)
            if below(mid):
                outer = mid
            else:
                inner = mid
        return 0.5 * (inner + outer)

    return edge(+1.0) - edge(-1.0)


def pattern_table(cfg: AntennaArrayConfig, step: float = 0.1):
    """Rows of (theta, element dB, array dB, total dB) from -90 to 90 degrees."""
    n = int(round(180.0 / step))
    theta = np.linspace(-90.0, 90.0, n + 1)
    ge = element_gain_db(theta, cfg.element)
    ga = array_factor_power_db(theta, cfg)
    return np.column_stack([theta, ge, ga, ge + ga])


def write_pattern_csv(path, cfg: AntennaArrayConfig, step: float = 0.1) -> int:
    table = pattern_table(cfg, step)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta_deg", "element_db", "array_db", "total_db"])
        for row in table:
            w.writerow([f"{row[0]:.1f}"] + [f"{v:.6f}" for v in row[1:]])
    return len(table)
