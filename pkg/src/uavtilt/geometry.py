"""Hexagonal site layout, evaluation grids and link/reflection geometry.

Angles are in degrees and lengths in meters throughout. Elevation is signed:
0 is the horizon, +90 the zenith.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from typing import Literal, Sequence

import numpy as np

AntennaSet = Literal["down", "up"]

# Direction of the first tier-1 neighbour. 0 puts neighbours at 0, 60, ..., 300
# degrees; 30 gives the rotated tiling.
HEX_ORIENTATION_DEG = 0.0

SQRT3 = np.sqrt(3.0)


@dataclass
class GbsSite:
    id: int
    position: tuple[float, float]
    h_down: float = 30.0
    h_sep: float = 1.0
    dt_angle: float = 6.0
    ut_angle: float = 45.0

    def __post_init__(self):
        if self.h_down <= 0:
            raise ValueError(f"h_down must be positive, got {self.h_down}")
        if self.h_sep < 0:
            raise ValueError(f"h_sep must be non-negative, got {self.h_sep}")
        if not 0.0 <= self.ut_angle <= 90.0:
            raise ValueError(f"ut_angle must lie in [0, 90], got {self.ut_angle}")
        if self.dt_angle < 0:
            raise ValueError(f"dt_angle must be non-negative, got {self.dt_angle}")

    @property
    def h_up(self) -> float:
        return self.h_down + self.h_sep

    def height(self, antenna_set: AntennaSet) -> float:
        if antenna_set == "down":
            return self.h_down
        if antenna_set == "up":
            return self.h_up
        raise ValueError(f"unknown antenna set {antenna_set!r}")

    def tilt(self, antenna_set: AntennaSet) -> float:
        """Signed boresight elevation of one array (down-tilt is negative)."""
        return -self.dt_angle if antenna_set == "down" else self.ut_angle


@dataclass
class NetworkLayout:
    sites: list[GbsSite]
    isd: float
    tiers: int = 2
    center_site_index: int = 0
    orientation: float = HEX_ORIENTATION_DEG

    def __len__(self):
        return len(self.sites)

    @property
    def positions(self) -> np.ndarray:
        return np.array([s.position for s in self.sites], dtype=float)

    @property
    def ut_angles(self) -> np.ndarray:
        return np.array([s.ut_angle for s in self.sites], dtype=float)

    def with_tilts(self, tilts: Sequence[float]) -> "NetworkLayout":
        tilts = np.asarray(tilts, dtype=float)
        if tilts.shape != (len(self.sites),):
            raise ValueError(f"expected {len(self.sites)} tilt angles, got shape {tilts.shape}")
        sites = [replace(s, ut_angle=float(t)) for s, t in zip(self.sites, tilts)]
        return replace(self, sites=sites)

    def circumradius(self) -> float:
        return self.isd / SQRT3

    def to_json(self) -> str:
        rows = []
        for s in self.sites:
            d = asdict(s)
            d["x"], d["y"] = d.pop("position")
            d["h_up"] = s.h_up
            rows.append(d)
        return json.dumps({"isd": self.isd, "tiers": self.tiers, "sites": rows}, indent=2)


def _ring(radius: float, count: int, offset_deg: float) -> list[tuple[float, float]]:
    out = []
    for k in range(count):
        a = np.deg2rad(offset_deg + k * 360.0 / count)
        out.append((radius * np.cos(a), radius * np.sin(a)))
    return out


def build_layout(isd: float, tiers: int = 2, h_down: float = 30.0, h_sep: float = 1.0,
                 dt_angle: float = 6.0, ut_angle: float = 45.0,
                 orientation: float = HEX_ORIENTATION_DEG) -> NetworkLayout:
    """Sites of a hexagonal grid around the origin.

    Ordering is the centre site, then tier 1 counter-clockwise from the
    orientation axis, then tier 2 (alternating 2*isd and sqrt(3)*isd rings).
    ``tiers=0`` and ``tiers=1`` give 1- and 7-site layouts for small tests.
    """
    if isd <= 0:
        raise ValueError(f"isd must be positive, got {isd}")
    if tiers not in (0, 1, 2):
        raise ValueError(f"tiers must be 0, 1 or 2, got {tiers}")
    points = [(0.0, 0.0)]
    if tiers >= 1:
        points += _ring(isd, 6, orientation)
    if tiers >= 2:
        far = _ring(2 * isd, 6, orientation)
        mid = _ring(SQRT3 * isd, 6, orientation + 30.0)
        for a, b in zip(far, mid):
            points += [a, b]
    sites = [
        GbsSite(id=i, position=(float(x), float(y)), h_down=h_down, h_sep=h_sep,
                dt_angle=dt_angle, ut_angle=ut_angle)
        for i, (x, y) in enumerate(points)
    ]
    # snap -0.0 / 1e-13 noise so JSON dumps are stable
    for s in sites:
        s.position = tuple(0.0 if abs(c) < 1e-9 else c for c in s.position)
    return NetworkLayout(sites=sites, isd=float(isd), tiers=tiers, orientation=orientation)


def in_center_cell(points: np.ndarray, isd: float, orientation: float = HEX_ORIENTATION_DEG,
                   tol: float = 1e-9) -> np.ndarray:
    """Mask of points inside (or on) the Voronoi hexagon of the centre site."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    angles = np.deg2rad(orientation + np.array([0.0, 60.0, 120.0]))
    normals = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    proj = np.abs(points @ normals.T)
    return np.all(proj <= isd / 2 + tol, axis=1)


@dataclass
class EvalGrid:
    points: np.ndarray  # (N, 2)
    height: float
    resolution: float

    def __len__(self):
        return len(self.points)


def build_eval_grid(layout: NetworkLayout, height: float, resolution: float = 10.0) -> EvalGrid:
    """Axis-aligned lattice (through the origin) clipped to the centre cell."""
    if resolution <= 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    if resolution > layout.circumradius():
        raise ValueError(
            f"resolution {resolution} m exceeds the cell circumradius {layout.circumradius():.1f} m"
        )
    n = int(np.floor(layout.circumradius() / resolution)) + 1
    ticks = np.arange(-n, n + 1) * resolution
    xx, yy = np.meshgrid(ticks, ticks, indexing="xy")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    pts = pts[in_center_cell(pts, layout.isd, layout.orientation, tol=1e-6 * resolution)]
    return EvalGrid(points=pts, height=float(height), resolution=float(resolution))


@dataclass(frozen=True)
class LinkGeometry:
    """Direct and specular ground-reflected path between an array and receivers.

    Fields are floats for a single link or arrays broadcast over receivers.
    """
    d2d: np.ndarray
    l: np.ndarray
    theta: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    psi: np.ndarray
    delta_d: np.ndarray
    tx_height: float = field(default=0.0)
    rx_height: float = field(default=0.0)


def link_geometry_from_heights(d2d, tx_height: float, rx_height: float) -> LinkGeometry:
    d2d = np.asarray(d2d, dtype=float)
    dh = rx_height - tx_height
    if np.any((d2d == 0) & (dh == 0)):
        raise ValueError("degenerate link: receiver coincides with the array")
    hs = tx_height + rx_height
    l = np.hypot(d2d, dh)
    unfolded = np.hypot(d2d, hs)
    psi = np.rad2deg(np.arctan2(hs, d2d))
    sin_psi = hs / unfolded
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(sin_psi > 0, tx_height / sin_psi, d2d)
        r2 = unfolded - r1
    # (a - b) = (a^2 - b^2) / (a + b), avoids cancellation at long range
    delta_d = 4.0 * tx_height * rx_height / (unfolded + l)
    theta = np.rad2deg(np.arctan2(dh, d2d))
    return LinkGeometry(d2d=d2d, l=l, theta=theta, r1=r1, r2=r2, psi=psi, delta_d=delta_d,
                        tx_height=float(tx_height), rx_height=float(rx_height))


def link_geometry(site: GbsSite, antenna_set: AntennaSet, point, rx_height: float) -> LinkGeometry:
    """Geometry from one array of ``site`` to receiver(s) at ``point`` (shape (2,) or (N, 2))."""
    p = np.asarray(point, dtype=float)
    d2d = np.hypot(p[..., 0] - site.position[0], p[..., 1] - site.position[1])
    return link_geometry_from_heights(d2d, site.height(antenna_set), rx_height)


def gr_visibility_band(h_gbs: float, h_uav: float, dt_angle: float,
                       hpbw: float) -> tuple[float, float]:
    """Horizontal range ``(d1, d2)`` where the reflected main lobe reaches height ``h_uav``.

    ``d1`` is ``inf`` when the upper half-power edge of the down-tilted beam
    is at or above the horizon, in which case it never hits the ground.
    """
    hs = h_gbs + h_uav
    upper = dt_angle - hpbw / 2
    lower = dt_angle + hpbw / 2
    if lower >= 90:
        d2 = 0.0
    else:
        d2 = hs / np.tan(np.deg2rad(lower))
    d1 = np.inf if upper <= 0 else hs / np.tan(np.deg2rad(upper))
    return float(d1), float(d2)


def main_lobe_ground_distance(h_gbs: float, dt_angle: float) -> float:
    """Distance at which the down-tilted boresight ray hits the ground."""
    if dt_angle <= 0:
        return np.inf
    return h_gbs / np.tan(np.deg2rad(dt_angle))
