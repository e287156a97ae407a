"""Cellular network simulator for UAVs served by dedicated up-tilted antenna arrays."""
from .antenna import (AntennaArrayConfig, ElementParams, array_factor_power_db, element_gain_db,
                      hpbw_deg, total_gain_db)
from .channel import (ChannelParams, RxPower, fresnel_reflection, propagation_exponent,
                      received_power, reflected_path_gain)
from .geometry import (EvalGrid, GbsSite, LinkGeometry, NetworkLayout, build_eval_grid,
                       build_layout, gr_visibility_band, link_geometry)
from .optimizer import (GaConfig, OptResult, TiltObjective, fitness, ga_optimize, random_scheme,
                        single_angle_search)
from .radio import EicicConfig, LinkBudget, SirReport, evaluate_network
from .scenario import Scenario, SweepSpec, load_scenario, run_scenario, run_sweep

__version__ = "0.1.0"
