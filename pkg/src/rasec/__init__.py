"""Secrecy capacity and outage analysis for a single rotatable antenna.

The boresight is steered along the line through the eavesdropper and the
legitimate user; :mod:`rasec.avg_secrecy` optimises the average secrecy
capacity over that line, :mod:`rasec.los_solver` gives the closed-form
line-of-sight optimum and :mod:`rasec.outage` the outage probability.
"""
from .avg_secrecy import (CapacityEstimate, OptResult, avg_cs_mc, avg_cs_quad,
                          optimize_alpha)
from .channel import (FadingParams, fading_params, instant_secrecy_capacity, large_scale,
                      pdf_channel_power, sample_channel_power)
from .config import ExperimentConfig, parse_config
from .errors import (AlphaMaxUndefined, CollinearGeometry, ConfigError, DegenerateDensity,
                     DegenerateGeometry, NonConvergent, ParseError, RasecError, ValidationError)
from .geometry import (Boresight, Scenario, alpha_max, boresight_from_alpha, default_scenario,
                       phi_inv, position, psi)
from .los_solver import Branch, LosSolution, compute_coefficients, cs_los, gamma0, solve_near_optimal
from .outage import SopPoint, gamma_th, sop_mc, sop_theory
from .specfun import QuadratureSpec, bessel_i0, bessel_i1, marcum_q1

__version__ = "0.1.0"
