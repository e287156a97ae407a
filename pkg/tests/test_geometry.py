import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from uavtilt.geometry import (GbsSite, build_eval_grid, build_layout, gr_visibility_band,
                              link_geometry, link_geometry_from_heights,
                              main_lobe_ground_distance)


def point_in_convex_polygon(p, vertices):
    """Brute-force oracle: p is inside (or on) a CCW convex polygon."""
    n = len(vertices)
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        cross = (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax)
        if cross < -1e-7:
            return False
    return True


def center_hexagon(isd):
    r = isd / math.sqrt(3)
    return [(r * math.cos(math.radians(30 + 60 * k)), r * math.sin(math.radians(30 + 60 * k)))
            for k in range(6)]


class TestLayout:
    def test_site_count_and_origin(self):
        lay = build_layout(500)
        assert len(lay) == 19
        assert lay.sites[0].position == (0.0, 0.0)

    def test_nearest_neighbour_distance(self):
        pos = build_layout(500).positions
        d = np.hypot(pos[1:, 0], pos[1:, 1])
        assert d.min() == pytest.approx(500.0)

    def test_tier_radii(self):
        pos = build_layout(500).positions
        r = np.hypot(pos[:, 0], pos[:, 1])
        assert_allclose(r[1:7], 500.0)
        tier2 = np.sort(r[7:])
        assert_allclose(tier2[:6], 500 * math.sqrt(3))
        assert_allclose(tier2[6:], 1000.0)

    def test_max_extent_isd_1000(self):
        pos = build_layout(1000).positions
        assert np.hypot(pos[:, 0], pos[:, 1]).max() == pytest.approx(2000.0)

    def test_ordering_tier1_ccw_from_x(self):
        pos = build_layout(500).positions[1:7]
        ang = np.degrees(np.arctan2(pos[:, 1], pos[:, 0])) % 360
        assert_allclose(ang, [0, 60, 120, 180, 240, 300], atol=1e-9)

    def test_rotation_symmetry(self):
        pos = build_layout(500).positions
        a = np.radians(60)
        rot = pos @ np.array([[math.cos(a), math.sin(a)], [-math.sin(a), math.cos(a)]])
        for p in rot:
            assert np.min(np.hypot(*(pos - p).T)) < 1e-6

    def test_small_layouts(self):
        assert len(build_layout(500, tiers=0)) == 1
        assert len(build_layout(500, tiers=1)) == 7

    def test_invalid_isd(self):
        with pytest.raises(ValueError):
            build_layout(0)

    def test_json_dump(self):
        d = json.loads(build_layout(500).to_json())
        assert len(d["sites"]) == 19
        assert d["sites"][0]["h_up"] == pytest.approx(31.0)
        assert {"id", "x", "y", "h_down", "h_sep", "dt_angle", "ut_angle"} <= set(d["sites"][0])

    def test_with_tilts(self):
        lay = build_layout(500).with_tilts(np.arange(19.0))
        assert lay.sites[5].ut_angle == 5.0
        with pytest.raises(ValueError):
            build_layout(500).with_tilts([1.0, 2.0])

    def test_site_validation(self):
        with pytest.raises(ValueError):
            GbsSite(0, (0, 0), ut_angle=95)
        with pytest.raises(ValueError):
            GbsSite(0, (0, 0), h_down=0)


class TestGrid:
    def test_points_within_circumradius(self):
        g = build_eval_grid(build_layout(500), 100, 10)
        assert np.hypot(g.points[:, 0], g.points[:, 1]).max() <= 500 / math.sqrt(3) + 1e-9

    def test_count_matches_brute_force(self):
        lay = build_layout(500)
        g = build_eval_grid(lay, 100, 10)
        hexv = center_hexagon(500)
        brute = sum(
            point_in_convex_polygon((x, y), hexv)
            for x in np.arange(-300, 301, 10.0) for y in np.arange(-300, 301, 10.0)
        )
        assert len(g) == brute
        assert abs(len(g) - 2165) / 2165 < 0.05

    def test_membership_matches_oracle(self):
        lay = build_layout(1000)
        g = build_eval_grid(lay, 1.5, 25)
        hexv = center_hexagon(1000)
        assert all(point_in_convex_polygon(p, hexv) for p in g.points)

    def test_spacing_and_height(self):
        g = build_eval_grid(build_layout(500), 100, 10)
        assert g.height == 100
        xs = np.unique(g.points[:, 0])
        assert_allclose(np.diff(xs), 10.0)

    def test_resolution_too_coarse(self):
        with pytest.raises(ValueError):
            build_eval_grid(build_layout(500), 100, 300)
        with pytest.raises(ValueError):
            build_eval_grid(build_layout(500), 100, 0)


class TestLinkGeometry:
    def test_reflection_example(self):
        g = link_geometry_from_heights(400.0, 30.0, 100.0)
        assert float(g.psi) == pytest.approx(math.degrees(math.atan(130 / 400)), abs=1e-9)
        assert float(g.psi) == pytest.approx(18.00, abs=0.01)
        assert float(g.r1 + g.r2) == pytest.approx(math.hypot(400, 130))
        assert float(g.r1 + g.r2) == pytest.approx(420.59, abs=0.01)

    def test_direct_example(self):
        g = link_geometry_from_heights(400.0, 30.0, 100.0)
        assert float(g.l) == pytest.approx(406.08, abs=0.01)
        oracle = math.hypot(400, 130) - math.hypot(400, 70)
        assert float(g.delta_d) == pytest.approx(oracle, rel=1e-12)
        assert float(g.delta_d) == pytest.approx(14.5, abs=0.05)

    def test_equal_heights_horizon(self):
        assert float(link_geometry_from_heights(500.0, 30.0, 30.0).theta) == 0.0

    def test_signed_elevation(self):
        assert float(link_geometry_from_heights(100.0, 30.0, 1.5).theta) < 0
        assert float(link_geometry_from_heights(0.0, 30.0, 100.0).theta) == pytest.approx(90.0)

    def test_site_link_uses_set_height(self):
        site = GbsSite(0, (0.0, 0.0), h_down=30, h_sep=2)
        gd = link_geometry(site, "down", (100.0, 0.0), 100.0)
        gu = link_geometry(site, "up", (100.0, 0.0), 100.0)
        assert float(gd.l) == pytest.approx(math.hypot(100, 70))
        assert float(gu.l) == pytest.approx(math.hypot(100, 68))

    def test_degenerate(self):
        site = GbsSite(0, (0.0, 0.0))
        with pytest.raises(ValueError):
            link_geometry(site, "down", (0.0, 0.0), 30.0)

    @settings(max_examples=200, deadline=None)
    @given(d=st.floats(0.1, 5000), ht=st.floats(1, 100), hr=st.floats(0.0, 400))
    def test_mirror_inequality(self, d, ht, hr):
        g = link_geometry_from_heights(d, ht, hr)
        assert float(g.r1 + g.r2) >= float(g.l) - 1e-9
        assert float(g.delta_d) >= 0
        assert 0 < float(g.psi) <= 90
        assert float(g.l) == pytest.approx(math.hypot(d, hr - ht))
        assert float(g.r1 + g.r2) == pytest.approx(math.hypot(d, ht + hr))
        assert float(g.delta_d) == pytest.approx(float(g.r1 + g.r2 - g.l), abs=1e-6)

    def test_equality_at_ground(self):
        g = link_geometry_from_heights(300.0, 30.0, 0.0)
        assert float(g.r1 + g.r2) == pytest.approx(float(g.l))
        assert float(g.delta_d) == 0.0


class TestVisibilityBand:
    def test_example(self):
        d1, d2 = gr_visibility_band(30, 100, 6, 4)
        assert d1 == pytest.approx(130 / math.tan(math.radians(4)))
        assert d1 == pytest.approx(1858.9, abs=0.5)
        assert d2 == pytest.approx(924.9, abs=0.5)
        assert d1 > d2 > 0

    def test_unbounded(self):
        d1, d2 = gr_visibility_band(30, 100, 6, 12)
        assert math.isinf(d1)
        assert d2 == pytest.approx(130 / math.tan(math.radians(12)))

    def test_main_lobe_ground_distance(self):
        assert main_lobe_ground_distance(30, 6) == pytest.approx(285.4, abs=0.05)

    @given(a=st.floats(3, 40), b=st.floats(3, 40))
    def test_monotone_in_tilt(self, a, b):
        lo, hi = sorted((a, b))
        if hi - lo < 1e-3:
            return
        d1a, d2a = gr_visibility_band(30, 100, lo, 4)
        d1b, d2b = gr_visibility_band(30, 100, hi, 4)
        assert d1b < d1a and d2b < d2a
