"""
Worst-case aerial SIR without optimisation
==========================================

19 sites at 500 m spacing, aerial users at 100 m over the centre cell. Compare
no up-tilted arrays, one common up-tilt for all sites, and random tilts.
"""
import numpy as np

from uavtilt.geometry import build_eval_grid, build_layout
from uavtilt.optimizer import TiltObjective, random_scheme, single_angle_search
from uavtilt.radio import LinkBudget, evaluate_network

layout = build_layout(isd=500.0)
grid = build_eval_grid(layout, height=100.0, resolution=20.0)
budget = LinkBudget(layout, grid)
objective = TiltObjective(budget)
print(f"{len(layout)} sites, {len(grid)} evaluation points")

no_ut = evaluate_network(budget, mode="no_ut")
print(f"down-tilted arrays only: min SIR {no_ut.min_sir_usf_db:6.2f} dB, median {no_ut.median_sir_usf_db:6.2f} dB")

# One angle for every site, searched on a 1 degree lattice.
angle, fit = single_angle_search(objective, len(layout), step=1.0)
print(f"common up-tilt {angle:.0f} deg: min SIR {fit:6.2f} dB")

# Random tilts vary a lot from draw to draw.
draws = [random_scheme(objective, len(layout), seed)[1] for seed in range(10)]
print(f"random tilts: min SIR median {np.median(draws):6.2f} dB, range [{min(draws):.2f}, {max(draws):.2f}] dB")
