"""Run configuration parsed from JSON config files and run manifests"""
import csv
import json
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from scipy.interpolate import CubicSpline

from app.errors import ConfigError
from app.models.couplings import PROFILE_NAMES, Couplings, PeriodicModulation, PerturbationProfile
from app.models.enums import InitKind
from app.models.grid import RadialGrid

# keys a manifest adds on top of the config itself
MANIFEST_KEYS = ("command", "versions")


class GaussianSpec(BaseModel):
    """amplitude·exp(-((x - center)/width)²)"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["gaussian"] = "gaussian"
    amplitude: float
    width: float = Field(..., gt=0)
    center: float = 0.0

    def sample(self, grid: RadialGrid) -> np.ndarray:
        if self.center and not grid.symmetric:
            raise ConfigError("off-centre perturbations need a symmetric N=1 grid")
        return self.amplitude * np.exp(-(((grid.r - self.center) / self.width) ** 2))


class FileSpec(BaseModel):
    """CSV samples ``r,value``, cubic-interpolated, zero beyond the samples"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["file"] = "file"
    path: str

    def read(self, base_dir: Path) -> tuple[np.ndarray, np.ndarray]:
        path = Path(self.path)
        if not path.is_absolute():
            path = base_dir / path
        if not path.is_file():
            raise ConfigError(f"perturbation file not found: {path}")

        points, values = [], []
        with path.open(newline="", encoding="utf-8") as handle:
            for row_number, row in enumerate(csv.reader(handle)):
                if not row:
                    continue
                try:
                    point, value = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if row_number == 0:
                        continue  # header
                    raise ConfigError(f"{path}:{row_number + 1}: expected 'r,value'")
                points.append(point)
                values.append(value)
        if len(points) < 4:
            raise ConfigError(f"{path}: need at least 4 samples")
        return np.asarray(points), np.asarray(values)

    def sample(self, grid: RadialGrid, base_dir: Path) -> np.ndarray:
        points, values = self.read(base_dir)
        order = np.argsort(points)
        spline = CubicSpline(points[order], values[order], extrapolate=False)
        x = grid.r if grid.symmetric else np.abs(grid.r)
        return np.nan_to_num(spline(x), nan=0.0)


PerturbationSpec = Annotated[Union[GaussianSpec, FileSpec], Field(discriminator="kind")]


class RunConfig(BaseModel):
    """Flat run configuration shared by every subcommand"""
    model_config = ConfigDict(extra="forbid")

    dimension: int = Field(1, ge=1, le=3)
    radius: Optional[float] = Field(None, gt=0)
    nodes: Optional[int] = Field(None, ge=3)

    a0: float = 1.0
    b0: float = 1.0
    beta0: float = 0.0
    kappa0: float = 0.5
    p: float = 4.0
    perturbations: dict[str, PerturbationSpec] = Field(default_factory=dict)
    periodic: Optional[PeriodicModulation] = None

    tol: float = Field(1e-8, gt=0)
    max_iter: int = Field(50000, ge=1)

    kappa_list: list[float] = Field(default_factory=list)
    y_list: list[float] = Field(default_factory=list)
    eigen_count: int = Field(4, ge=2)
    d0: Optional[float] = Field(None, gt=0)
    pair_file: Optional[str] = None
    init: InitKind = InitKind.SECH
    init_offset: float = 0.0
    penalty_schedule: list[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0, 1000.0])

    _base_dir: Path = PrivateAttr(default_factory=Path.cwd)

    @field_validator("perturbations")
    @classmethod
    def validate_profile_names(cls, v: dict) -> dict:
        unknown = set(v) - set(PROFILE_NAMES)
        if unknown:
            raise ValueError(
                f"unknown perturbation profiles {sorted(unknown)}; expected a subset of {list(PROFILE_NAMES)}"
            )
        return v

    @field_validator("penalty_schedule")
    @classmethod
    def validate_penalties(cls, v: list[float]) -> list[float]:
        if not v or any(weight <= 0 for weight in v):
            raise ValueError("penalty_schedule must be a non-empty list of positive weights")
        return v

    @model_validator(mode="after")
    def validate_centres(self) -> "RunConfig":
        if self.dimension > 1:
            for name, spec in self.perturbations.items():
                if isinstance(spec, GaussianSpec) and spec.center != 0:
                    raise ValueError(f"perturbation {name}: radial grids need center 0")
        return self

    @property
    def base_dir(self) -> Path:
        return self._base_dir

    def with_base_dir(self, base_dir: Path) -> "RunConfig":
        self._base_dir = Path(base_dir)
        return self

    def couplings(self) -> Couplings:
        return Couplings(
            a0=self.a0,
            b0=self.b0,
            beta0=self.beta0,
            kappa0=self.kappa0,
            p=self.p,
            periodic=self.periodic,
        )

    def grid(self) -> RadialGrid:
        from app.solver.grid import DEFAULT_NODES, DEFAULT_RADIUS, make_grid

        radius = self.radius if self.radius is not None else DEFAULT_RADIUS[self.dimension]
        nodes = self.nodes if self.nodes is not None else DEFAULT_NODES[self.dimension]
        return make_grid(self.dimension, radius, nodes)

    def perturbation(self, grid: RadialGrid) -> PerturbationProfile:
        fields = {}
        for name, spec in self.perturbations.items():
            if isinstance(spec, FileSpec):
                fields[name] = spec.sample(grid, self.base_dir)
            else:
                fields[name] = spec.sample(grid)
        return PerturbationProfile.from_fields(grid, **fields)

    def resolved(self) -> dict[str, Any]:
        """JSON-ready config with grid defaults filled in"""
        data = self.model_dump(mode="json")
        grid = self.grid()
        data["radius"] = grid.radius
        data["nodes"] = grid.nodes
        for spec in data["perturbations"].values():
            if spec["kind"] == "file":
                spec["path"] = str(self.resolve_path(spec["path"]))
        if self.pair_file is not None:
            data["pair_file"] = str(self.resolve_path(self.pair_file))
        return data

    def resolve_path(self, value: str) -> Path:
        path = Path(value)
        return path if path.is_absolute() else (self.base_dir / path).resolve()


def load_config(path: Union[str, Path]) -> RunConfig:
    """Parse a config file; manifests are accepted and their extra keys dropped"""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    for key in MANIFEST_KEYS:
        data.pop(key, None)
    return RunConfig.model_validate(data).with_base_dir(path.parent)
