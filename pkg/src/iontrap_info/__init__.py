"""Information-theoretic measures of a single ion in a lattice-modified Paul trap."""

__version__ = "0.1.0"

from .oscillator import (DomainError, EffectiveOscillator, TrapConfig, effective_oscillator,
                         energy_level, full_potential, truncated_potential)
from .eigenstates import Eigenstate, fourier_check, momentum_density, position_density
from .measures import (MeasureSet, compute_measures, fisher_closed, fisher_numeric,
                       fisher_shannon, moments_closed, moments_numeric, shannon_closed_ground,
                       shannon_numeric)
from .truncation import discretize, lowest_eigenpairs, validate_truncation
from .sweep import SweepResult, SweepSpec, export, run_sweep

__all__ = [
    "DomainError", "EffectiveOscillator", "TrapConfig", "effective_oscillator", "energy_level",
    "full_potential", "truncated_potential", "Eigenstate", "fourier_check", "momentum_density",
    "position_density", "MeasureSet", "compute_measures", "fisher_closed", "fisher_numeric",
    "fisher_shannon", "moments_closed", "moments_numeric", "shannon_closed_ground",
    "shannon_numeric", "discretize", "lowest_eigenpairs", "validate_truncation", "SweepResult",
    "SweepSpec", "export", "run_sweep",
]
