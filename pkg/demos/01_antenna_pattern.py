"""
Vertical pattern of an eight-element array
==========================================

Element gain, array factor and their sum for a down-tilted and an
up-tilted array, and how the half-power beamwidth shrinks with more elements.
"""
import numpy as np

from uavtilt.antenna import AntennaArrayConfig, element_gain_db, hpbw_deg, total_gain_db

# A down-tilted array points its boresight 6 degrees below the horizon,
# i.e. at a signed elevation of -6 degrees.
down = AntennaArrayConfig(n_elements=8, tilt=-6.0)
up = AntennaArrayConfig(n_elements=8, tilt=30.0)

theta = np.array([-90, -30, -12, -6, 0, 6, 12, 30, 45, 90], dtype=float)
print(f"{'theta':>6} {'element':>8} {'down':>8} {'up':>8}   (dBi)")
for t, e, d, u in zip(theta, element_gain_db(theta), total_gain_db(theta, down), total_gain_db(theta, up)):
    print(f"{t:6.0f} {e:8.2f} {d:8.2f} {u:8.2f}")

# Peak gain grows by 3 dB per doubling; the beam narrows accordingly.
print()
for n in (4, 8, 16, 32):
    cfg = AntennaArrayConfig(n, 0.0)
    print(f"N={n:2d}: peak {float(total_gain_db(0.0, cfg)):5.2f} dBi, HPBW {hpbw_deg(cfg):5.2f} deg")
