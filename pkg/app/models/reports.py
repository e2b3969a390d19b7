"""Result models returned by the solver modules"""
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.couplings import FieldPair
from app.models.enums import Branch, Conclusion, Hypothesis, SolitonMethod, Verdict
from app.models.grid import ScalarField


class SolitonSolution(BaseModel):
    """Positive radial solution w of -Δw + w = w³"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    profile: ScalarField
    peak: float = Field(..., gt=0, description="w(0)")
    residual: float = Field(..., ge=0, description="Discrete residual sup-norm on interior nodes")
    method: SolitonMethod

    @model_validator(mode="after")
    def validate_shape(self) -> "SolitonSolution":
        grid = self.profile.grid
        values = self.profile.values
        if not np.all(values[grid.interior] > 0):
            raise ValueError("soliton must be positive on interior nodes")
        outward = values[grid.center_index:]
        significant = outward > 1e-8 * outward[0]
        if not np.all(np.diff(outward)[significant[1:]] < 0):
            raise ValueError("soliton must be strictly decreasing in r")
        return self

    @property
    def grid(self):
        return self.profile.grid


class SynchronizedSolution(BaseModel):
    """Explicit solution (a₁w(a₃x), a₂w(a₃x))"""
    model_config = ConfigDict(frozen=True)

    branch: Branch
    a1: float
    a2: float
    a3: float = Field(..., gt=0)
    pair: FieldPair

    @model_validator(mode="after")
    def validate_signs(self) -> "SynchronizedSolution":
        expected = {
            Branch.Z1: (1, 1),
            Branch.Z2: (-1, -1),
            Branch.Z3: (1, -1),
            Branch.Z4: (-1, 1),
        }[self.branch]
        if (math.copysign(1, self.a1), math.copysign(1, self.a2)) != expected:
            raise ValueError(f"amplitude signs do not match branch {self.branch.value}")
        if not math.isclose(abs(self.a1), abs(self.a2), rel_tol=1e-12):
            raise ValueError("synchronized amplitudes must satisfy a₂ = ±a₁")
        return self

    @property
    def profile_values(self) -> np.ndarray:
        """Unit-amplitude profile w(a₃x)"""
        return self.pair.u.values / self.a1


class DescentTrace(BaseModel):
    """Per-iteration history of a Nehari descent"""
    energies: list[float] = Field(default_factory=list)
    gradient_norms: list[float] = Field(default_factory=list)
    steps: list[float] = Field(default_factory=list)
    norm_sq: list[float] = Field(default_factory=list)


class GroundStateReport(BaseModel):
    """Outcome of a Nehari-manifold minimization"""
    model_config = ConfigDict(frozen=True)

    pair: FieldPair
    energy: float
    gradient_norm: float = Field(..., ge=0)
    nehari_residual: float = Field(..., ge=0)
    norm_sq: float = Field(..., gt=0, description="Quadratic part Q(z)")
    iterations: int = Field(..., ge=0)
    converged: bool
    tol: float = Field(..., gt=0)
    trace: DescentTrace = Field(default_factory=DescentTrace)

    @model_validator(mode="after")
    def validate_convergence(self) -> "GroundStateReport":
        if self.converged:
            if not self.gradient_norm < self.tol:
                raise ValueError("converged report must have gradient sup-norm below tol")
            if not self.nehari_residual < self.tol * self.norm_sq:
                raise ValueError("converged report must lie on the Nehari manifold")
        return self

    @property
    def peak_u(self) -> float:
        return self.pair.u.sup_norm()

    @property
    def peak_v(self) -> float:
        return self.pair.v.sup_norm()


class ContinuationRecord(BaseModel):
    """One κ₀ step of a continuation sweep"""
    kappa0: float
    energy: float
    peak_u: float
    peak_v: float
    iterations: int
    converged: bool


class ScalarProblem(BaseModel):
    """Decoupled scalar problem -ΔΨ + Ψ = (coefficient·w² - shift)Ψ"""
    model_config = ConfigDict(frozen=True)

    label: str
    coefficient: float
    shift: float
    potential: ScalarField


class SpectrumReport(BaseModel):
    """Weighted eigenvalues and the nondegeneracy verdict"""
    eigenvalues: list[float] = Field(default_factory=list)
    k_indicator: float
    verdict: Verdict
    beta0: float
    mu: float = 1.0
    kernel_dimension: Optional[int] = None
    singular_values: dict[str, float] = Field(default_factory=dict)
    consistent: Optional[bool] = Field(
        None, description="False when a nondegenerate verdict meets a discrete kernel; None without a soliton"
    )

    @field_validator("eigenvalues")
    @classmethod
    def validate_ascending(cls, v: list[float]) -> list[float]:
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("eigenvalues must be strictly ascending")
        return v

    @model_validator(mode="after")
    def validate_verdict(self) -> "SpectrumReport":
        expected = (
            Verdict.NONDEGENERATE
            if self.beta0 >= 3 * self.mu or self.k_indicator <= 0
            else Verdict.INCONCLUSIVE
        )
        if self.verdict != expected:
            raise ValueError("verdict disagrees with the K-indicator rule")
        return self


class Barycenter(BaseModel):
    """Barycenter ξ(u, v) in R^N"""
    point: list[float]

    @field_validator("point")
    @classmethod
    def validate_finite(cls, v: list[float]) -> list[float]:
        if not all(math.isfinite(x) for x in v):
            raise ValueError("barycenter must be finite")
        return v

    @property
    def norm(self) -> float:
        return math.sqrt(sum(x * x for x in self.point))


class ComparisonReport(BaseModel):
    """Ground-state comparison criteria evaluated at a limit ground state"""
    criterion01_lhs: float
    criterion01_rhs: float
    criterion01: bool
    less2: bool
    criterion02: bool
    criterion03: Optional[bool] = None  # only evaluated when u = v
    criterion04: Optional[bool] = None
    conclusion: Conclusion

    @model_validator(mode="after")
    def validate_conclusion(self) -> "ComparisonReport":
        enabled = [self.criterion01, self.criterion02, self.criterion03, self.criterion04]
        holds = any(c for c in enabled if c is not None)
        expected = Conclusion.EXISTS if holds else Conclusion.UNDETERMINED
        if self.conclusion != expected:
            raise ValueError("conclusion must be 'exists' exactly when a criterion holds")
        return self


class GammaPoint(BaseModel):
    """Translated-path sample Γ(y) = t_y·z(· - y)"""
    y: float
    t_y: float = Field(..., gt=0)
    energy: float
    barycenter: Optional[float] = None  # N=1 only


class ThresholdReport(BaseModel):
    """R₀ and the sufficient bound-state check"""
    r0: float = Field(..., ge=1)
    bound: float
    satisfied: bool
    max_ratio: float
    hypothesis: Optional[Hypothesis] = None


class DriftTrace(BaseModel):
    """Free descent history started away from the perturbation centre"""
    iterations: list[int] = Field(default_factory=list)
    energies: list[float] = Field(default_factory=list)
    barycenters: list[float] = Field(default_factory=list)


class SplittingReport(BaseModel):
    """Energy of two separated copies of a limit ground state"""
    separation: float
    energy: float
    c0: float
    ratio: float
