"""Coupling constants, perturbation profiles and field pairs"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.grid import RadialGrid, ScalarField, _frozen_array


KAPPA_CONDITION = "(A₀): κ₀+sup κ must be < 1"

PROFILE_NAMES = ("a", "b", "beta", "kappa")


class PeriodicModulation(BaseModel):
    """1-periodic modulation a₀(x)=a₀(1+εₐcos 2πx/ℓ), b₀(x)=b₀(1+ε_b cos 2πx/ℓ) (N=1)"""
    amplitude_a: float = Field(0.0, gt=-1, lt=1)
    amplitude_b: float = Field(0.0, gt=-1, lt=1)
    period: float = Field(1.0, gt=0)

    def factors(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        phase = np.cos(2.0 * np.pi * x / self.period)
        return 1.0 + self.amplitude_a * phase, 1.0 + self.amplitude_b * phase


class Couplings(BaseModel):
    """Limit constants (a₀, b₀, β₀, κ₀, p) of the coupled system"""
    model_config = ConfigDict(frozen=True)

    a0: float = 1.0
    b0: float = 1.0
    beta0: float = 0.0
    kappa0: float = 0.5
    p: float = 4.0
    periodic: Optional[PeriodicModulation] = None

    @field_validator("a0", "b0")
    @classmethod
    def validate_self_interaction(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("a₀ and b₀ must be positive")
        return v

    @field_validator("kappa0")
    @classmethod
    def validate_linear_coupling(cls, v: float) -> float:
        if v >= 1:
            raise ValueError(KAPPA_CONDITION)
        if v < 0:
            raise ValueError("κ₀ must be non-negative")
        return v

    @field_validator("p")
    @classmethod
    def validate_exponent(cls, v: float) -> float:
        if not v > 2:
            raise ValueError("exponent p must exceed 2")
        return v

    @property
    def mu(self) -> Optional[float]:
        """Common self-interaction μ=a₀=b₀, or None when they differ"""
        if self.a0 == self.b0 and self.periodic is None:
            return self.a0
        return None

    def admits_exponent(self, dimension: int) -> bool:
        """2 < p < 2N/(N-2)"""
        if dimension <= 2:
            return True
        return self.p < 2 * dimension / (dimension - 2)

    def with_kappa(self, kappa0: float) -> "Couplings":
        return self.model_copy(update={"kappa0": kappa0})


class PerturbationProfile(BaseModel):
    """Spatial perturbations a(x), b(x), β(x), κ(x) on one grid"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: RadialGrid
    a: np.ndarray
    b: np.ndarray
    beta: np.ndarray
    kappa: np.ndarray
    decaying: bool = True

    @field_validator("a", "b", "beta", "kappa", mode="before")
    @classmethod
    def freeze_profiles(cls, v):
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_profiles(self) -> "PerturbationProfile":
        for name in PROFILE_NAMES:
            values = getattr(self, name)
            if values.shape != (self.grid.nodes,):
                raise ValueError(f"perturbation {name} does not match the grid")
            if not np.all(np.isfinite(values)):
                raise ValueError(f"perturbation {name} contains non-finite values")
            if self.decaying and np.max(np.abs(values[~self.grid.interior])) >= 1e-8:
                raise ValueError(
                    f"perturbation {name} must go to zero as |x| → ∞ "
                    "(boundary values must be below 1e-8)"
                )
        return self

    def __eq__(self, other):
        if not isinstance(other, PerturbationProfile):
            return False
        return self.grid == other.grid and all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in PROFILE_NAMES
        )

    __hash__ = None

    @classmethod
    def zero(cls, grid: RadialGrid) -> "PerturbationProfile":
        zeros = np.zeros(grid.nodes)
        return cls(grid=grid, a=zeros, b=zeros, beta=zeros, kappa=zeros)

    @classmethod
    def from_fields(cls, grid: RadialGrid, **fields: np.ndarray) -> "PerturbationProfile":
        """Build from any subset of a, b, beta, kappa; missing ones are zero"""
        unknown = set(fields) - set(PROFILE_NAMES)
        if unknown:
            raise ValueError(f"unknown perturbation profiles: {sorted(unknown)}")
        zeros = np.zeros(grid.nodes)
        values = {name: fields.get(name, zeros) for name in PROFILE_NAMES}
        return cls(grid=grid, **values)

    @property
    def is_zero(self) -> bool:
        return all(not np.any(getattr(self, n)) for n in PROFILE_NAMES)

    def sup_abs(self, name: str) -> float:
        return float(np.max(np.abs(getattr(self, name))))

    def is_non_positive(self) -> bool:
        return all(np.all(getattr(self, n) <= 0) for n in PROFILE_NAMES)


class FieldPair(BaseModel):
    """The system state (u, v)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: ScalarField
    v: ScalarField

    @model_validator(mode="after")
    def validate_shared_grid(self) -> "FieldPair":
        if self.u.grid != self.v.grid:
            raise ValueError("u and v must live on the same grid")
        return self

    def __eq__(self, other):
        if not isinstance(other, FieldPair):
            return False
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    @classmethod
    def from_arrays(cls, grid: RadialGrid, u: np.ndarray, v: np.ndarray) -> "FieldPair":
        return cls(u=ScalarField(grid=grid, values=u), v=ScalarField(grid=grid, values=v))

    @property
    def grid(self) -> RadialGrid:
        return self.u.grid

    def scaled(self, t: float) -> "FieldPair":
        return FieldPair.from_arrays(self.grid, t * self.u.values, t * self.v.values)

    def swapped(self) -> "FieldPair":
        return FieldPair(u=self.v, v=self.u)

    @property
    def is_zero(self) -> bool:
        return not (np.any(self.u.values) or np.any(self.v.values))
