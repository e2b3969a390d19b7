"""Energy functional, gradient and Nehari projection of the coupled system.

With Q(z) = ‖u‖² + ‖v‖² - 2∫(κ₀+κ)uv and
P(z) = ∫(a₀+a)|u|^p + (b₀+b)|v|^p + 2(β₀+β)|u|^{p/2}|v|^{p/2},
the energy is Φ(z) = Q(z)/2 - P(z)/p and Φ'(z)z = Q(z) - P(z).
"""
import logging
from typing import Optional

import numpy as np

from app.errors import ConfigError, NumericalError
from app.models.couplings import Couplings, FieldPair, PerturbationProfile
from app.models.grid import RadialGrid
from app.solver.grid import stiffness_apply
from app.validation import CouplingValidator


logger = logging.getLogger("app.solver.energy")


class EnergyLandscape:
    """Φ for one (grid, couplings, perturbation), evaluated on raw arrays.

    Coefficient profiles are assembled once so that iterative solvers can call
    ``parts``, ``energy``, ``gradient`` and ``project`` without re-validating.
    """

    def __init__(
        self,
        grid: RadialGrid,
        couplings: Couplings,
        perturbation: Optional[PerturbationProfile] = None,
    ):
        if perturbation is None:
            perturbation = PerturbationProfile.zero(grid)
        CouplingValidator.require(
            lambda: CouplingValidator.validate_exponent(couplings, grid),
            lambda: CouplingValidator.validate_modulation(couplings, grid),
            lambda: (perturbation.grid == grid, "grid mismatch between field pair and perturbation"),
            lambda: CouplingValidator.validate_perturbation(couplings, perturbation),
        )
        self.grid = grid
        self.couplings = couplings
        self.perturbation = perturbation
        self.p = couplings.p
        self.weights = grid.weights

        factor_a, factor_b = (
            couplings.periodic.factors(grid.r) if couplings.periodic is not None else (1.0, 1.0)
        )
        self.coef_a = couplings.a0 * factor_a + perturbation.a
        self.coef_b = couplings.b0 * factor_b + perturbation.b
        self.coef_beta = couplings.beta0 + perturbation.beta
        self.coef_kappa = couplings.kappa0 + perturbation.kappa

    def check_pair(self, z: FieldPair) -> None:
        if z.grid != self.grid:
            raise ConfigError("grid mismatch between field pair and perturbation")

    def h1(self, u: np.ndarray, v: np.ndarray) -> float:
        """‖u‖² + ‖v‖²"""
        q = self.weights
        return float(
            np.dot(u, stiffness_apply(self.grid, u))
            + np.dot(v, stiffness_apply(self.grid, v))
            + np.dot(q, u * u + v * v)
        )

    def parts(self, u: np.ndarray, v: np.ndarray) -> tuple[float, float]:
        """(Q, P)"""
        q = self.weights
        p = self.p
        au, av = np.abs(u), np.abs(v)
        quadratic = self.h1(u, v) - 2.0 * float(np.dot(q, self.coef_kappa * u * v))
        homogeneous = float(np.dot(
            q,
            self.coef_a * au ** p
            + self.coef_b * av ** p
            + 2.0 * self.coef_beta * (au * av) ** (0.5 * p),
        ))
        return quadratic, homogeneous

    def energy(self, u: np.ndarray, v: np.ndarray) -> float:
        quadratic, homogeneous = self.parts(u, v)
        return 0.5 * quadratic - homogeneous / self.p

    def gradient(self, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Strong-form gradient; Φ'(z)[d] = Σ q·(g_u d_u + g_v d_v) exactly"""
        q = self.weights
        p = self.p
        au, av = np.abs(u), np.abs(v)
        half = 0.5 * p
        cross_u = np.sign(u) * au ** (half - 1.0) * av ** half
        cross_v = np.sign(v) * av ** (half - 1.0) * au ** half
        grad_u = (
            stiffness_apply(self.grid, u) / q + u
            - self.coef_a * au ** (p - 2.0) * u
            - self.coef_beta * cross_u
            - self.coef_kappa * v
        )
        grad_v = (
            stiffness_apply(self.grid, v) / q + v
            - self.coef_b * av ** (p - 2.0) * v
            - self.coef_beta * cross_v
            - self.coef_kappa * u
        )
        return grad_u, grad_v

    def gradient_norm(self, grad_u: np.ndarray, grad_v: np.ndarray) -> float:
        """Sup-norm over interior nodes"""
        mask = self.grid.interior
        return float(max(np.max(np.abs(grad_u[mask])), np.max(np.abs(grad_v[mask]))))

    def projection_factor(self, u: np.ndarray, v: np.ndarray) -> float:
        quadratic, homogeneous = self.parts(u, v)
        if not homogeneous > 0 or not quadratic > 0:
            raise NumericalError(
                f"degenerate direction: Q={quadratic:.6g}, P={homogeneous:.6g}"
            )
        return (quadratic / homogeneous) ** (1.0 / (self.p - 2.0))

    def project(self, u: np.ndarray, v: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        t = self.projection_factor(u, v)
        return t, t * u, t * v

    def mountain_pass_level(self, u: np.ndarray, v: np.ndarray) -> float:
        """max_{t>0} Φ(tz) = (½-1/p)(Q^p/P²)^{1/(p-2)}"""
        quadratic, homogeneous = self.parts(u, v)
        if not homogeneous > 0 or not quadratic > 0:
            raise NumericalError(
                f"degenerate direction: Q={quadratic:.6g}, P={homogeneous:.6g}"
            )
        p = self.p
        return (0.5 - 1.0 / p) * (quadratic ** p / homogeneous ** 2) ** (1.0 / (p - 2.0))


def _landscape(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile]) -> EnergyLandscape:
    if pert is not None and pert.grid != z.grid:
        raise ConfigError("grid mismatch between field pair and perturbation")
    return EnergyLandscape(z.grid, c, pert)


def phi_energy(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    """Φ(z); the zero perturbation gives the limit functional Φ₀"""
    return _landscape(z, c, pert).energy(z.u.values, z.v.values)


def phi_gradient(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> FieldPair:
    grad_u, grad_v = _landscape(z, c, pert).gradient(z.u.values, z.v.values)
    return FieldPair.from_arrays(z.grid, grad_u, grad_v)


def quadratic_part(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    """Q(z)"""
    return _landscape(z, c, pert).parts(z.u.values, z.v.values)[0]


def homogeneous_part(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    """P(z)"""
    return _landscape(z, c, pert).parts(z.u.values, z.v.values)[1]


def kappa_norm_sq(z: FieldPair, c: Couplings) -> float:
    """‖u‖² + ‖v‖² - 2κ₀∫uv"""
    landscape = _landscape(z, c, None)
    u, v = z.u.values, z.v.values
    return landscape.h1(u, v) - 2.0 * c.kappa0 * float(np.dot(z.grid.weights, u * v))


def energy_norm_sq(z: FieldPair) -> float:
    """‖z‖²_E = ‖u‖² + ‖v‖²"""
    grid = z.grid
    u, v = z.u.values, z.v.values
    return float(
        np.dot(u, stiffness_apply(grid, u))
        + np.dot(v, stiffness_apply(grid, v))
        + np.dot(grid.weights, u * u + v * v)
    )


def nehari_value(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    """G(z) = Φ'(z)z = Q(z) - P(z)"""
    if z.is_zero:
        raise ConfigError("nehari_value is undefined for the zero pair")
    quadratic, homogeneous = _landscape(z, c, pert).parts(z.u.values, z.v.values)
    return quadratic - homogeneous


def nehari_project(
    z: FieldPair,
    c: Couplings,
    pert: Optional[PerturbationProfile] = None,
) -> tuple[float, FieldPair]:
    """Unique t > 0 with t·z on the Nehari manifold"""
    t, u, v = _landscape(z, c, pert).project(z.u.values, z.v.values)
    return t, FieldPair.from_arrays(z.grid, u, v)


def limit_projection_factor(z: FieldPair, c: Couplings) -> float:
    """t with t·z on the limit manifold 𝒩₀"""
    return nehari_project(z, c, None)[0]


def mountain_pass_level(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    return _landscape(z, c, pert).mountain_pass_level(z.u.values, z.v.values)


def manifold_energy(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    """Φ on 𝒩 through the quadratic form, (½-1/p)·Q(z)"""
    return (0.5 - 1.0 / c.p) * quadratic_part(z, c, pert)


def coercivity_bound(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    """(½-1/p)(1-(κ₀+sup κ))‖z‖²_E, a lower bound for Φ on 𝒩"""
    kappa_sup = c.kappa0 + (float(np.max(pert.kappa)) if pert is not None else 0.0)
    return (0.5 - 1.0 / c.p) * (1.0 - kappa_sup) * energy_norm_sq(z)
