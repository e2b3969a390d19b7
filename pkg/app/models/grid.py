"""Grid and grid-function models"""
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# Surface measure of the unit sphere in R^N (N=1 counts both half-lines)
SURFACE_MEASURE: dict[int, float] = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


def _frozen_array(value) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True)
    array.setflags(write=False)
    return array


class RadialGrid(BaseModel):
    """Uniform truncated mesh of R^N reduced to the radial variable.

    ``symmetric`` grids cover [-R, R] (N=1 only) and carry every N=1 function.
    Non-symmetric grids cover [0, R]; for N=1 they hold even functions and the
    weights count both half-lines.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dimension: int = Field(..., description="Space dimension N (1-3)")
    radius: float = Field(..., gt=0, description="Truncation radius R")
    nodes: int = Field(..., ge=3, description="Node count M")
    symmetric: bool = Field(False, description="Full line [-R, R] (N=1 only)")
    r: np.ndarray
    weights: np.ndarray

    @field_validator("r", "weights", mode="before")
    @classmethod
    def freeze_arrays(cls, v):
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_mesh(self) -> "RadialGrid":
        """Check node ordering, weight positivity and the measure identity"""
        if self.dimension not in SURFACE_MEASURE:
            raise ValueError(f"unsupported dimension {self.dimension}")
        if self.symmetric and self.dimension != 1:
            raise ValueError("symmetric grids exist only for N=1")
        if self.r.shape != (self.nodes,) or self.weights.shape != (self.nodes,):
            raise ValueError("node and weight arrays must have length M")
        if not np.all(np.diff(self.r) > 0):
            raise ValueError("grid nodes must be strictly increasing")
        if not np.all(self.weights > 0):
            raise ValueError("quadrature weights must be positive")
        if self.symmetric:
            if not (np.array_equal(self.r, -self.r[::-1])
                    and np.array_equal(self.weights, self.weights[::-1])):
                raise ValueError("symmetric grid must be symmetric about 0")
        measure = self.measure
        if abs(self.weights.sum() - measure) > 1e-10 * measure:
            raise ValueError("quadrature weights do not reproduce the ball measure")
        return self

    def __eq__(self, other):
        if not isinstance(other, RadialGrid):
            return False
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self) -> tuple[int, float, int, bool]:
        """Identity of the mesh; two grids with equal keys are identical"""
        return (self.dimension, self.radius, self.nodes, self.symmetric)

    @property
    def spacing(self) -> float:
        span = 2.0 * self.radius if self.symmetric else self.radius
        return span / (self.nodes - 1)

    @property
    def surface(self) -> float:
        """Flux factor of the finite-volume Laplacian (1 on the full line)"""
        return 1.0 if self.symmetric else SURFACE_MEASURE[self.dimension]

    @property
    def measure(self) -> float:
        """Measure of the truncated ball (or interval) the grid represents"""
        if self.symmetric:
            return 2.0 * self.radius
        return SURFACE_MEASURE[self.dimension] / self.dimension * self.radius ** self.dimension

    @property
    def interior(self) -> np.ndarray:
        """Boolean mask of non-Dirichlet nodes"""
        mask = np.ones(self.nodes, dtype=bool)
        mask[-1] = False
        if self.symmetric:
            mask[0] = False
        return mask

    @property
    def center_index(self) -> int:
        """Index of the node at the origin"""
        if self.symmetric:
            if self.nodes % 2 == 0:
                raise ValueError("symmetric grid with an even node count has no centre node")
            return self.nodes // 2
        return 0

    def distance(self) -> np.ndarray:
        """Distance |x| of every node from the origin"""
        return np.abs(self.r)


class ScalarField(BaseModel):
    """Real grid function"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: RadialGrid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def freeze_values(cls, v):
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_values(self) -> "ScalarField":
        if self.values.shape != (self.grid.nodes,):
            raise ValueError(
                f"field has {self.values.size} values but the grid has {self.grid.nodes} nodes"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")
        return self

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return False
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.grid.key, self.values.tobytes()))

    @classmethod
    def zeros(cls, grid: RadialGrid) -> "ScalarField":
        return cls(grid=grid, values=np.zeros(grid.nodes))

    def with_values(self, values: np.ndarray) -> "ScalarField":
        """Same grid, new values"""
        return ScalarField(grid=self.grid, values=values)

    def sup_norm(self, mask: Optional[np.ndarray] = None) -> float:
        values = self.values if mask is None else self.values[mask]
        return float(np.max(np.abs(values))) if values.size else 0.0

    @property
    def origin_value(self) -> float:
        return float(self.values[self.grid.center_index])
