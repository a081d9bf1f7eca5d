"""Electrodynamics and photon-gas thermodynamics with a Planck momentum cutoff.

All quantities are in natural units hbar = c = k_B = 1 with the Planck
energy, length and momentum set to one (see :mod:`planckqed.units`).
"""

__version__ = "0.1.0"

from .coulomb import ChargeConfig, config_energy, kernel, self_energy
from .exceptions import ConvergenceError, DomainError, IntegrationError
from .fieldmodes import Mode, ModeHistory, ModeSet, ModeState, Trajectory, integrate
from .modesum import (McEstimate, kernel_mc_oracle, kernel_quadrature_oracle,
                      state_count, zero_point_energy, zero_point_to_self_energy_ratio)
from .photongas import StateFunctions, ThermoPoint, free_energy, state_functions
from .specfun import QuadratureResult, integrate_adaptive, sine_integral
from .units import PlanckScale, make_scale, to_display

__all__ = [
    "ChargeConfig", "ConvergenceError", "DomainError", "IntegrationError",
    "McEstimate", "Mode", "ModeHistory", "ModeSet", "ModeState", "PlanckScale",
    "QuadratureResult", "StateFunctions", "ThermoPoint", "Trajectory",
    "config_energy", "free_energy", "integrate", "integrate_adaptive", "kernel",
    "kernel_mc_oracle", "kernel_quadrature_oracle", "make_scale", "self_energy",
    "sine_integral", "state_count", "state_functions", "to_display",
    "zero_point_energy", "zero_point_to_self_energy_ratio",
]
