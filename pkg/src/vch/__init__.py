"""Pseudo-spectral laboratory for a viscous nonlinear shallow-water-type PDE.

The equation is u_t + F(u) = d/dx (a(x) u_x) - mu u + g on a periodic
interval, where F is the quadratic nonlocal transport term of the
Camassa-Holm family.  The package provides the spatial discretization,
a second-order implicit-explicit time integrator, energy/frequency
diagnostics, ensemble experiments over balls of initial data, and a CLI.
"""

from .config import (
    ConfigError,
    SimulationConfig,
    parse_config,
    parse_config_file,
)
from .diagnostics import (
    DiagnosticsRecord,
    DissipationReport,
    dissipation_monitor,
    h1_energy,
)
from .ensemble import EnsembleReport, EnsembleSpec, run_ensemble
from .integrator import NonFiniteState, TrajectoryState, advance_to, step
from .operators import (
    ForcingTerm,
    Mode,
    ProfileError,
    StructuralFlag,
    ViscosityProfile,
    ch_nonlinearity,
    validate_profile,
)
from .simulate import run, run_from_state
from .spectral import SpectralField, analyze, from_coeffs, from_function

__all__ = [
    "ConfigError",
    "SimulationConfig",
    "parse_config",
    "parse_config_file",
    "DiagnosticsRecord",
    "DissipationReport",
    "dissipation_monitor",
    "h1_energy",
    "EnsembleReport",
    "EnsembleSpec",
    "run_ensemble",
    "NonFiniteState",
    "TrajectoryState",
    "advance_to",
    "step",
    "ForcingTerm",
    "Mode",
    "ProfileError",
    "StructuralFlag",
    "ViscosityProfile",
    "ch_nonlinearity",
    "validate_profile",
    "run",
    "run_from_state",
    "SpectralField",
    "analyze",
    "from_coeffs",
    "from_function",
]

__version__ = "0.1.0"
