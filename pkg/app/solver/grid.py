"""Radially reduced finite-volume discretization of R^N.

Nodes are uniform. Each node owns the dual cell between the neighbouring face
midpoints (clipped at 0 and R), so the quadrature weight of node i is the
measure of its shell, ω_N/N·(r_{i+½}^N - r_{i-½}^N). The Laplacian is the
matching flux difference: -Δf = W⁻¹Sf with S symmetric tridiagonal and face
coefficients ω_N r_{i+½}^{N-1}/h. A ghost value of 0 sits one cell beyond R.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import sparse
from scipy.interpolate import CubicSpline

from app.errors import ConfigError
from app.models.grid import SURFACE_MEASURE, RadialGrid, ScalarField


logger = logging.getLogger("app.solver.grid")

DEFAULT_RADIUS = {1: 20.0, 2: 15.0, 3: 15.0}
DEFAULT_NODES = {1: 4001, 2: 1501, 3: 1501}


def _layout(dimension: int, radius: float, nodes: int, symmetric: bool) -> tuple[np.ndarray, np.ndarray]:
    """Node coordinates and dual-cell weights"""
    if symmetric:
        r = np.linspace(-radius, radius, nodes)
        r = 0.5 * (r - r[::-1])  # exact mirror symmetry
        h = 2.0 * radius / (nodes - 1)
        weights = np.full(nodes, h)
        weights[0] = weights[-1] = 0.5 * h
        return r, weights

    h = radius / (nodes - 1)
    r = h * np.arange(nodes)
    r[-1] = radius
    faces = np.clip(h * (np.arange(nodes + 1) - 0.5), 0.0, radius)
    omega = SURFACE_MEASURE[dimension]
    weights = omega / dimension * np.diff(faces ** dimension)
    return r, weights


def make_grid(dimension: int, radius: float, nodes: int, symmetric: bool | None = None) -> RadialGrid:
    """Build a uniform grid; N=1 defaults to the symmetric full line [-R, R]"""
    if dimension not in SURFACE_MEASURE:
        raise ConfigError(f"unsupported dimension {dimension}")
    if not radius > 0:
        raise ConfigError(f"radius must be positive, got {radius}")
    if nodes < 3:
        raise ConfigError(f"a grid needs at least 3 nodes, got {nodes}")
    if symmetric is None:
        symmetric = dimension == 1
    if symmetric and dimension != 1:
        raise ConfigError("symmetric grids exist only for N=1")

    r, weights = _layout(dimension, float(radius), int(nodes), bool(symmetric))
    return RadialGrid(
        dimension=dimension,
        radius=float(radius),
        nodes=int(nodes),
        symmetric=bool(symmetric),
        r=r,
        weights=weights,
    )


def default_grid(dimension: int) -> RadialGrid:
    return make_grid(dimension, DEFAULT_RADIUS[dimension], DEFAULT_NODES[dimension])


@lru_cache(maxsize=64)
def _stiffness_for_key(key: tuple[int, float, int, bool]) -> tuple[np.ndarray, np.ndarray]:
    dimension, radius, nodes, symmetric = key
    if symmetric:
        h = 2.0 * radius / (nodes - 1)
        faces = np.full(nodes, 1.0 / h)  # faces i+½ for i = 0..M-1, last one is the ghost
        lower = np.concatenate(([1.0 / h], faces[:-1]))
    else:
        h = radius / (nodes - 1)
        omega = SURFACE_MEASURE[dimension]
        midpoints = h * (np.arange(nodes) + 0.5)
        faces = omega * midpoints ** (dimension - 1) / h
        lower = np.concatenate(([0.0], faces[:-1]))
    diagonal = lower + faces
    upper = -faces[:-1]
    diagonal.setflags(write=False)
    upper.setflags(write=False)
    logger.debug("Assembled stiffness for grid %s", key)
    return diagonal, upper


def stiffness_bands(grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and upper diagonal of the symmetric stiffness matrix S"""
    return _stiffness_for_key(grid.key)


def stiffness_matrix(grid: RadialGrid) -> sparse.csr_matrix:
    diagonal, upper = stiffness_bands(grid)
    return sparse.diags([upper, diagonal, upper], [-1, 0, 1], format="csr")


def stiffness_apply(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """S·f without forming the matrix"""
    diagonal, upper = stiffness_bands(grid)
    out = diagonal * values
    out[:-1] += upper * values[1:]
    out[1:] += upper * values[:-1]
    return out


def interior_slice(grid: RadialGrid) -> slice:
    """Contiguous index range of the non-Dirichlet nodes"""
    return slice(1, grid.nodes - 1) if grid.symmetric else slice(0, grid.nodes - 1)


def interior_banded(grid: RadialGrid, extra_diagonal: np.ndarray) -> np.ndarray:
    """Banded (1,1) storage of (S + diag(extra)) restricted to interior nodes"""
    diagonal, upper = stiffness_bands(grid)
    inner = interior_slice(grid)
    d = diagonal[inner] + extra_diagonal[inner]
    e = upper[inner][:-1]
    ab = np.zeros((3, d.size))
    ab[0, 1:] = e
    ab[1] = d
    ab[2, :-1] = e
    return ab


def apply_laplacian(f: ScalarField) -> ScalarField:
    """Discrete Δf = -W⁻¹Sf (Dirichlet value 0 beyond R)"""
    grid = f.grid
    return f.with_values(-stiffness_apply(grid, f.values) / grid.weights)


def quadrature(grid: RadialGrid, values: np.ndarray) -> float:
    return float(np.dot(grid.weights, values))


def integrate(f: ScalarField) -> float:
    """Σ q_i f_i"""
    return quadrature(f.grid, f.values)


def dirichlet_form(grid: RadialGrid, values: np.ndarray, other: np.ndarray | None = None) -> float:
    """∫∇f·∇g as fᵀSg"""
    other = values if other is None else other
    return float(np.dot(values, stiffness_apply(grid, other)))


def h1_norm_sq(f: ScalarField) -> float:
    """‖f‖² = ∫|∇f|² + f²"""
    return dirichlet_form(f.grid, f.values) + quadrature(f.grid, f.values ** 2)


def fold_even(f: ScalarField) -> ScalarField:
    """Restrict a symmetric full-line field to the half-line even grid"""
    grid = f.grid
    if not grid.symmetric:
        raise ConfigError("fold_even needs a symmetric N=1 grid")
    if grid.nodes % 2 == 0:
        raise ConfigError("fold_even needs an odd node count")
    half = make_grid(1, grid.radius, (grid.nodes + 1) // 2, symmetric=False)
    return ScalarField(grid=half, values=f.values[grid.center_index:])


def unfold_even(f: ScalarField) -> ScalarField:
    """Even extension of a half-line N=1 field to the symmetric grid"""
    grid = f.grid
    if grid.symmetric or grid.dimension != 1:
        raise ConfigError("unfold_even needs a half-line N=1 grid")
    full = make_grid(1, grid.radius, 2 * grid.nodes - 1, symmetric=True)
    return ScalarField(grid=full, values=np.concatenate((f.values[:0:-1], f.values)))


def extend_grid(grid: RadialGrid, margin: float) -> RadialGrid:
    """Same spacing, radius enlarged by at least ``margin``"""
    if margin < 0:
        raise ConfigError("margin must be non-negative")
    h = grid.spacing
    extra = int(math.ceil(margin / h - 1e-9))
    if extra == 0:
        return grid
    added = 2 * extra if grid.symmetric else extra
    return make_grid(grid.dimension, grid.radius + extra * h, grid.nodes + added, grid.symmetric)


def _interpolant(f: ScalarField) -> CubicSpline:
    grid = f.grid
    if grid.symmetric:
        return CubicSpline(grid.r, f.values, extrapolate=False)
    # radial profiles are even in r, so f'(0) = 0
    return CubicSpline(grid.r, f.values, bc_type=((1, 0.0), "not-a-knot"), extrapolate=False)


def evaluate(f: ScalarField, points: np.ndarray) -> np.ndarray:
    """Cubic interpolation of f at arbitrary points, zero outside the grid"""
    points = np.asarray(points, dtype=float)
    if not f.grid.symmetric:
        points = np.abs(points)
    values = _interpolant(f)(points)
    return np.nan_to_num(values, nan=0.0)


def resample(f: ScalarField, grid: RadialGrid, shift: float = 0.0) -> ScalarField:
    """Sample f(x - shift) on ``grid``"""
    if grid.dimension != f.grid.dimension:
        raise ConfigError("cannot resample across dimensions")
    if shift and not (grid.symmetric and f.grid.symmetric):
        raise ConfigError("translations need symmetric N=1 grids")
    return ScalarField(grid=grid, values=evaluate(f, grid.r - shift))


def dilate(f: ScalarField, factor: float) -> ScalarField:
    """Sample f(factor·r) on the same grid"""
    if not factor > 0:
        raise ConfigError("dilation factor must be positive")
    return f.with_values(evaluate(f, factor * f.grid.r))


def translated_overlap(f: ScalarField, g: ScalarField, shift: float, order: int = 64) -> float:
    """∫ f(x) g(x + shift·e₁) dx for radial f, g (any N)"""
    grid = f.grid
    if g.grid != grid:
        raise ConfigError("overlap fields must share a grid")
    if grid.symmetric:
        return quadrature(grid, f.values * evaluate(g, grid.r + shift))

    r = grid.r[:, None]
    if grid.dimension == 1:
        # mean over the two directions ±1
        cosines = np.array([-1.0, 1.0])
        weights = np.array([0.5, 0.5])
    elif grid.dimension == 2:
        nodes, gauss = leggauss(order)
        cosines = np.cos(0.5 * np.pi * (nodes + 1.0))
        weights = 0.5 * gauss
    else:
        cosines, gauss = leggauss(order)
        weights = 0.5 * gauss
    distance = np.sqrt(np.maximum(r ** 2 + shift ** 2 + 2.0 * shift * r * cosines, 0.0))
    angular_mean = evaluate(g, distance.ravel()).reshape(distance.shape) @ weights
    return quadrature(grid, f.values * angular_mean)
