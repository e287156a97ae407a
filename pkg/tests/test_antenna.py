import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from uavtilt.antenna import (AntennaArrayConfig, ElementParams, array_factor_power_db,
                             element_gain_db, hpbw_deg, pattern_table, total_gain_db,
                             write_pattern_csv)


def af_db_direct(theta, n, tilt):
    """Explicit element-sum oracle: |sum_k exp(j*pi*k*x)|^2 / n."""
    x = math.sin(math.radians(theta)) - math.sin(math.radians(tilt))
    s = sum(complex(math.cos(math.pi * k * x), math.sin(math.pi * k * x)) for k in range(n))
    return 10 * math.log10(abs(s) ** 2 / n)


class TestElement:
    @pytest.mark.parametrize("theta, expected", [(0, 8.0), (65, -4.0), (90, -15.006), (-90, -15.006)])
    def test_examples(self, theta, expected):
        assert float(element_gain_db(theta)) == pytest.approx(expected, abs=1e-3)

    def test_sll_floor(self):
        p = ElementParams(sll_limit=10)
        assert float(element_gain_db(90, p)) == pytest.approx(-2.0)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            element_gain_db(91)

    @given(t=st.floats(-90, 90))
    def test_even_and_max_at_zero(self, t):
        assert float(element_gain_db(t)) == pytest.approx(float(element_gain_db(-t)))
        assert float(element_gain_db(t)) <= 8.0


class TestArrayFactor:
    @pytest.mark.parametrize("n", [1, 2, 4, 8, 16, 32])
    def test_boresight(self, n):
        cfg = AntennaArrayConfig(n, -6.0)
        assert float(array_factor_power_db(-6.0, cfg)) == pytest.approx(10 * math.log10(n), abs=1e-9)

    def test_single_element(self):
        cfg = AntennaArrayConfig(1, 20.0)
        assert_allclose(array_factor_power_db(np.linspace(-90, 90, 19), cfg), 0.0, atol=1e-12)

    def test_doubling(self):
        g8 = float(array_factor_power_db(0, AntennaArrayConfig(8, 0)))
        g16 = float(array_factor_power_db(0, AntennaArrayConfig(16, 0)))
        assert g16 - g8 == pytest.approx(3.0103, abs=1e-4)

    @pytest.mark.parametrize("theta, n, tilt", [(10, 8, -6), (45, 8, 30), (-70, 16, 6), (89, 4, 0)])
    def test_matches_element_sum(self, theta, n, tilt):
        assert float(array_factor_power_db(theta, AntennaArrayConfig(n, tilt))) == pytest.approx(
            af_db_direct(theta, n, tilt), abs=1e-9)

    @given(t=st.floats(-90, 90), tilt=st.floats(-90, 90), n=st.sampled_from([2, 4, 8, 16]))
    def test_bounded_by_boresight(self, t, tilt, n):
        cfg = AntennaArrayConfig(n, tilt)
        assert float(array_factor_power_db(t, cfg)) <= 10 * math.log10(n) + 1e-9

    @given(t=st.floats(-90, 90), tilt=st.floats(-90, 90))
    def test_mirror_symmetry(self, t, tilt):
        a = float(array_factor_power_db(t, AntennaArrayConfig(8, tilt)))
        b = float(array_factor_power_db(-t, AntennaArrayConfig(8, -tilt)))
        if np.isfinite(a) and a > -200:
            assert a == pytest.approx(b, abs=1e-6)


class TestTotal:
    def test_boresight_sum(self):
        assert float(total_gain_db(0, AntennaArrayConfig(8, 0))) == pytest.approx(17.031, abs=1e-3)

    def test_single_element_total(self):
        assert float(total_gain_db(0, AntennaArrayConfig(1, 0))) == pytest.approx(8.0)

    def test_zenith_with_downtilt(self):
        got = float(total_gain_db(90, AntennaArrayConfig(8, -6)))
        assert got == pytest.approx(-15.00592 + af_db_direct(90, 8, -6), abs=1e-4)

    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_doubling_total(self, n):
        a = float(total_gain_db(6, AntennaArrayConfig(n, 6)))
        b = float(total_gain_db(6, AntennaArrayConfig(2 * n, 6)))
        assert b - a == pytest.approx(10 * math.log10(2), abs=1e-9)


def hpbw_sweep(cfg, step=0.001):
    t = np.arange(-90, 90 + step / 2, step)
    g = total_gain_db(t, cfg)
    peak = float(total_gain_db(cfg.tilt, cfg))
    i0 = int(np.argmin(np.abs(t - cfg.tilt)))
    above = g >= peak - 3
    hi = i0
    while hi + 1 < len(t) and above[hi + 1]:
        hi += 1
    lo = i0
    while lo - 1 >= 0 and above[lo - 1]:
        lo -= 1
    return t[hi] - t[lo]


class TestHpbw:
    def test_matches_dense_sweep(self):
        cfg = AntennaArrayConfig(8, 0)
        hp = hpbw_deg(cfg)
        assert 10 < hp < 16
        assert hp == pytest.approx(hpbw_sweep(cfg), abs=0.03)

    def test_narrows_with_elements(self):
        widths = [hpbw_deg(AntennaArrayConfig(n, -6)) for n in (8, 16, 32)]
        assert widths[0] > widths[1] > widths[2]

    def test_tilt_invariant_small_tilt(self):
        assert hpbw_deg(AntennaArrayConfig(8, -6)) == pytest.approx(hpbw_deg(AntennaArrayConfig(8, 0)), abs=0.5)

    def test_requires_two_elements(self):
        with pytest.raises(ValueError):
            hpbw_deg(AntennaArrayConfig(1, 0))

    def test_no_crossing(self):
        # boresight at the zenith: nothing beyond +90 to cross
        with pytest.raises(ValueError, match="crossing"):
            hpbw_deg(AntennaArrayConfig(2, 90.0))


def test_pattern_rows(tmp_path):
    cfg = AntennaArrayConfig(8, -6)
    t = pattern_table(cfg)
    assert t.shape == (1801, 4)
    assert t[0, 0] == -90 and t[-1, 0] == 90
    n = write_pattern_csv(tmp_path / "p.csv", cfg)
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert n == 1801 and len(lines) == 1802
    assert lines[0] == "theta_deg,element_db,array_db,total_db"


def test_config_validation():
    with pytest.raises(ValueError):
        AntennaArrayConfig(0, 0)
    with pytest.raises(ValueError):
        AntennaArrayConfig(8, 100)
