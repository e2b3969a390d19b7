"""Numerical solvers for the coupled NLS system"""
from app.solver.analysis import (
    barycenter,
    comparison_check,
    constrained_search,
    drift_trace,
    existence_hypothesis,
    gamma_profile,
    r0_threshold,
    split_energy,
)
from app.solver.energy import (
    EnergyLandscape,
    nehari_project,
    nehari_value,
    phi_energy,
    phi_gradient,
)
from app.solver.grid import default_grid, make_grid
from app.solver.ground_state import (
    NehariDescent,
    build_synchronized,
    continuation_kappa,
    solve_ground_state,
    synchronized_energy,
)
from app.solver.scalar_soliton import solve_scalar
from app.solver.spectrum import (
    decouple,
    nondegeneracy_check,
    weighted_eigenvalues,
)

__all__ = [
    "barycenter",
    "comparison_check",
    "constrained_search",
    "drift_trace",
    "existence_hypothesis",
    "gamma_profile",
    "r0_threshold",
    "split_energy",
    "EnergyLandscape",
    "nehari_project",
    "nehari_value",
    "phi_energy",
    "phi_gradient",
    "default_grid",
    "make_grid",
    "NehariDescent",
    "build_synchronized",
    "continuation_kappa",
    "solve_ground_state",
    "synchronized_energy",
    "solve_scalar",
    "decouple",
    "nondegeneracy_check",
    "weighted_eigenvalues",
]
