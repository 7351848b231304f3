"""Simulated relativistic qubit motion in circuit QED.

A transmon coupled to a cavity mode through a flux-tunable coupler; modulating
the flux as if the qubit were moving along a trajectory reproduces the
radiation signatures of actual relativistic motion.
"""

from .analysis import (PerturbativeResult, anti_jc_evolution,
                       effective_coupling, perturbative_result, r_absorption,
                       r_emission)
from .config import Config, ConfigError, parse_config
from .dynamics import (IntegrationError, SimResult, TimeGrid, evolve_lindblad,
                       evolve_schrodinger, propagate_piecewise_exact)
from .model import (GROUP_VELOCITY, AccelTrajectory, HarmonicDrive,
                    SystemParams, accel_profile, constant_profile, hamiltonian,
                    harmonic_profile)
from .qcore import DimensionError, StateError

__version__ = "0.1.0"

__all__ = [
    "AccelTrajectory", "Config", "ConfigError", "DimensionError",
    "GROUP_VELOCITY", "HarmonicDrive", "IntegrationError",
    "PerturbativeResult", "SimResult", "StateError", "SystemParams",
    "TimeGrid", "accel_profile", "anti_jc_evolution", "constant_profile",
    "effective_coupling", "evolve_lindblad", "evolve_schrodinger",
    "hamiltonian", "harmonic_profile", "parse_config",
    "perturbative_result", "propagate_piecewise_exact", "r_absorption",
    "r_emission",
]
