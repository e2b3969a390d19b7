"""Coupling and perturbation admissibility checks"""
from typing import Callable, Optional

import numpy as np

from app.errors import ConfigError
from app.models.couplings import KAPPA_CONDITION, Couplings, FieldPair, PerturbationProfile
from app.models.grid import RadialGrid


class CouplingValidator:
    """
    Validates couplings, perturbations and field pairs before a solve.

    Every method returns (is_valid, error_message) so callers can collect
    messages; ``require`` turns the first failure into a ConfigError.
    """

    @staticmethod
    def validate_exponent(couplings: Couplings, grid: RadialGrid) -> tuple[bool, Optional[str]]:
        """2 < p < 2N/(N-2)"""
        if not couplings.admits_exponent(grid.dimension):
            return False, (
                f"exponent p={couplings.p} is not subcritical in dimension {grid.dimension} "
                "(need 2 < p < 2N/(N-2))"
            )
        return True, None

    @staticmethod
    def validate_modulation(couplings: Couplings, grid: RadialGrid) -> tuple[bool, Optional[str]]:
        if couplings.periodic is not None and grid.dimension != 1:
            return False, "periodic a₀(x), b₀(x) are supported only for N=1"
        return True, None

    @staticmethod
    def validate_perturbation(
        couplings: Couplings,
        perturbation: PerturbationProfile,
    ) -> tuple[bool, Optional[str]]:
        """
        Check the pointwise conditions on the perturbed coefficients.

        Validates:
        - a₀ + inf a > 0 and b₀ + inf b > 0
        - κ₀ + inf κ > 0 (≥ 0 when κ₀ = 0)
        - κ₀ + sup κ < 1 (A₀)
        """
        grid = perturbation.grid
        factor_a, factor_b = (
            couplings.periodic.factors(grid.r)
            if couplings.periodic is not None
            else (1.0, 1.0)
        )
        if np.min(couplings.a0 * factor_a + perturbation.a) <= 0:
            return False, "a₀+inf a must be positive"
        if np.min(couplings.b0 * factor_b + perturbation.b) <= 0:
            return False, "b₀+inf b must be positive"

        kappa_min = couplings.kappa0 + float(np.min(perturbation.kappa))
        kappa_max = couplings.kappa0 + float(np.max(perturbation.kappa))
        if kappa_max >= 1:
            return False, f"{KAPPA_CONDITION} (got {kappa_max:.6g})"
        if kappa_min < 0 or (couplings.kappa0 > 0 and kappa_min <= 0):
            return False, "κ₀+inf κ must be positive"
        return True, None

    @staticmethod
    def validate_same_grid(pair: FieldPair, grid: RadialGrid) -> tuple[bool, Optional[str]]:
        if pair.grid != grid:
            return False, "grid mismatch between field pair and perturbation"
        return True, None

    @staticmethod
    def validate_synchronized(couplings: Couplings) -> tuple[bool, Optional[str]]:
        """Preconditions of the synchronized ansatz"""
        if couplings.p != 4:
            return False, "synchronized solutions require p=4"
        if couplings.mu is None:
            return False, "synchronized ansatz requires μ=a₀=b₀"
        if couplings.beta0 <= -couplings.mu:
            return False, "synchronized ansatz requires β₀ > -μ"
        return True, None

    @staticmethod
    def require(*checks: Callable[[], tuple[bool, Optional[str]]]) -> None:
        """Run checks in order and raise on the first failure"""
        for check in checks:
            is_valid, error = check()
            if not is_valid:
                raise ConfigError(error)
