"""Two coplanar polar molecules in a tilted static field: spectra, Bell-like
states and concurrence."""

from planar_dipoles.errors import (
    EigensolverError,
    FeatureNotFound,
    GuardRejected,
    NonPhysicalState,
)
from planar_dipoles.rotor import (
    DipoleFactors,
    RotorEigensystem,
    RotorParams,
    build_rotor_hamiltonian,
    dipole_factors,
    level_gap,
    solve_rotor,
    two_level_guard,
)
from planar_dipoles.pair import (
    PairEigensystem,
    PairParams,
    build_pair_hamiltonian,
    solve_pair,
    track_labels,
)
from planar_dipoles.entanglement import (
    DensityMatrix4,
    pure_concurrence,
    thermal_concurrence,
    thermal_density_matrix,
    wootters_concurrence,
)
from planar_dipoles.analytic import (
    AngleCase,
    BellLikeSolution,
    ReducedParams,
    analytic_concurrence_14,
    bell_solution,
    reduce,
)

__version__ = "0.1.0"

__all__ = [
    "AngleCase",
    "BellLikeSolution",
    "DensityMatrix4",
    "DipoleFactors",
    "EigensolverError",
    "FeatureNotFound",
    "GuardRejected",
    "NonPhysicalState",
    "PairEigensystem",
    "PairParams",
    "ReducedParams",
    "RotorEigensystem",
    "RotorParams",
    "analytic_concurrence_14",
    "bell_solution",
    "build_pair_hamiltonian",
    "build_rotor_hamiltonian",
    "dipole_factors",
    "level_gap",
    "pure_concurrence",
    "reduce",
    "solve_pair",
    "solve_rotor",
    "thermal_concurrence",
    "thermal_density_matrix",
    "track_labels",
    "two_level_guard",
    "wootters_concurrence",
]
