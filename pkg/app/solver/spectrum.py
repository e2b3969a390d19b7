"""Linearized spectrum at synchronized solutions and the nondegeneracy verdict"""
import logging
import math
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal, solve_banded
from scipy.sparse.linalg import eigsh

from app.errors import ConfigError, NumericalError
from app.models.couplings import Couplings
from app.models.enums import Branch, Parity, Verdict
from app.models.grid import RadialGrid, ScalarField
from app.models.reports import ScalarProblem, SolitonSolution, SpectrumReport, SynchronizedSolution
from app.solver.grid import fold_even, interior_slice, make_grid, resample, stiffness_bands


logger = logging.getLogger("app.solver.spectrum")

KERNEL_THRESHOLD = 0.01
_TINY_PIVOT = 1e-300


class PencilSolver:
    """Smallest eigenvalues of A·ψ = λ·B·ψ, A symmetric tridiagonal, B positive diagonal.

    Eigenvalues come from bisection on the Sturm count: the number of
    eigenvalues below σ equals the number of negative pivots of the LDLᵀ
    factorization of A - σB. Eigenvectors come from inverse iteration.
    """

    def __init__(self, diagonal: np.ndarray, off_diagonal: np.ndarray, mass: np.ndarray):
        if not np.any(mass > 0):
            raise NumericalError("weight degenerate: w² vanishes identically")
        self.diagonal = np.asarray(diagonal, dtype=float)
        self.off_diagonal = np.asarray(off_diagonal, dtype=float)
        self.mass = np.asarray(mass, dtype=float)
        self._diag_list = self.diagonal.tolist()
        self._mass_list = self.mass.tolist()
        self._off_sq = (self.off_diagonal ** 2).tolist()

    def count_below(self, sigma: float) -> int:
        """Number of eigenvalues strictly below σ"""
        diag, mass, off_sq = self._diag_list, self._mass_list, self._off_sq
        negatives = 0
        pivot = diag[0] - sigma * mass[0]
        for i in range(1, len(diag)):
            if pivot == 0.0:
                pivot = -_TINY_PIVOT
            if pivot < 0.0:
                negatives += 1
            pivot = diag[i] - sigma * mass[i] - off_sq[i - 1] / pivot
        if pivot < 0.0 or pivot == 0.0:
            negatives += 1
        return negatives

    def eigenvalue(self, index: int, rtol: float = 1e-13) -> float:
        """index-th eigenvalue (0-based)"""
        lo, hi = 0.0, 1.0
        while self.count_below(hi) <= index:
            lo, hi = hi, 2.0 * hi
            if hi > 1e16:
                raise NumericalError("eigenvalue bracket not found")
        while hi - lo > rtol * hi:
            mid = 0.5 * (lo + hi)
            if self.count_below(mid) <= index:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def eigenvector(self, eigenvalue: float, iterations: int = 3) -> np.ndarray:
        shift = eigenvalue * (1.0 - 1e-10)
        ab = np.zeros((3, self.diagonal.size))
        ab[0, 1:] = self.off_diagonal
        ab[1] = self.diagonal - shift * self.mass
        ab[2, :-1] = self.off_diagonal
        vector = np.ones_like(self.diagonal)
        for _ in range(iterations):
            vector = solve_banded((1, 1), ab, self.mass * vector)
            vector /= math.sqrt(float(np.dot(vector, self.mass * vector)))
        return vector

    def rayleigh_quotient(self, vector: np.ndarray) -> float:
        a_vector = self.diagonal * vector
        a_vector[:-1] += self.off_diagonal * vector[1:]
        a_vector[1:] += self.off_diagonal * vector[:-1]
        return float(np.dot(vector, a_vector) / np.dot(vector, self.mass * vector))


def _working_field(field: ScalarField, parity: Parity) -> ScalarField:
    """Fold symmetric N=1 fields onto the even half-line when parity is EVEN"""
    if field.grid.symmetric and parity == Parity.EVEN:
        return fold_even(field)
    return field


def _weighted_pencil(profile: ScalarField, mass_scale: float = 1.0, shift: float = 1.0) -> PencilSolver:
    """(S + shift·W)ψ = λ·mass_scale·W·w²ψ on interior nodes"""
    grid = profile.grid
    inner = interior_slice(grid)
    diagonal, upper = stiffness_bands(grid)
    q = grid.weights[inner]
    return PencilSolver(
        diagonal[inner] + shift * q,
        upper[inner][:-1],
        mass_scale * q * profile.values[inner] ** 2,
    )


def weighted_eigenpairs(
    w: SolitonSolution,
    grid: Optional[RadialGrid] = None,
    count: int = 4,
    parity: Parity = Parity.EVEN,
) -> tuple[list[float], list[ScalarField]]:
    """Smallest eigenvalues of -Δψ + ψ = λw²ψ with eigenvectors"""
    if count < 2:
        raise ConfigError("count must be at least 2")
    profile = w.profile
    if grid is not None and grid != profile.grid:
        profile = resample(profile, grid)
    profile = _working_field(profile, parity)
    solver = _weighted_pencil(profile)

    work_grid = profile.grid
    inner = interior_slice(work_grid)
    eigenvalues: list[float] = []
    vectors: list[ScalarField] = []
    for index in range(count):
        value = solver.eigenvalue(index)
        interior_vector = solver.eigenvector(value)
        full = np.zeros(work_grid.nodes)
        full[inner] = interior_vector
        eigenvalues.append(value)
        vectors.append(ScalarField(grid=work_grid, values=full))
    logger.info("Weighted eigenvalues (N=%d, %s): %s", work_grid.dimension, parity.value,
                ", ".join(f"{x:.6f}" for x in eigenvalues))
    return eigenvalues, vectors


def weighted_eigenvalues(
    w: SolitonSolution,
    grid: Optional[RadialGrid] = None,
    count: int = 4,
    parity: Parity = Parity.EVEN,
) -> list[float]:
    return weighted_eigenpairs(w, grid, count, parity)[0]


def weighted_rayleigh_quotient(w: SolitonSolution, vector: ScalarField) -> float:
    """(ψᵀ(S+W)ψ)/(ψᵀWw²ψ) for a vector on w's (possibly folded) grid"""
    profile = w.profile
    if profile.grid != vector.grid:
        profile = fold_even(profile)
    inner = interior_slice(vector.grid)
    return _weighted_pencil(profile).rayleigh_quotient(vector.values[inner])


def _require_linearizable(sync: SynchronizedSolution, c: Couplings) -> float:
    if sync.branch not in (Branch.Z1, Branch.Z2):
        raise ConfigError(f"branch {sync.branch.value} is not covered by the decoupling")
    if c.p != 4:
        raise ConfigError("linearization requires p=4")
    if c.mu is None:
        raise ConfigError("linearization requires a₀=b₀")
    return c.mu


def scaled_grid(grid: RadialGrid, factor: float) -> RadialGrid:
    """Grid with the same node count and radius factor·R"""
    return make_grid(grid.dimension, factor * grid.radius, grid.nodes, grid.symmetric)


def descriptor_coefficients(c: Couplings) -> tuple[float, float]:
    """(coefficient, shift) of the difference-mode problem"""
    mu = c.mu if c.mu is not None else c.a0
    coefficient = (3.0 * mu - c.beta0) / (mu + c.beta0)
    shift = 2.0 * c.kappa0 / (1.0 - c.kappa0)
    return coefficient, shift


def descriptors_from_profile(profile: ScalarField, c: Couplings) -> tuple[ScalarProblem, ScalarProblem]:
    """Sum-mode (3w²) and difference-mode potentials for a unit soliton profile"""
    coefficient, shift = descriptor_coefficients(c)
    w_sq = profile.values ** 2
    problem_a = ScalarProblem(label="A", coefficient=3.0, shift=0.0, potential=profile.with_values(3.0 * w_sq))
    problem_b = ScalarProblem(
        label="B",
        coefficient=coefficient,
        shift=shift,
        potential=profile.with_values(coefficient * w_sq - shift),
    )
    return problem_a, problem_b


def decouple(sync: SynchronizedSolution, c: Couplings) -> tuple[ScalarProblem, ScalarProblem]:
    """Orthonormal sum/difference split of the linearization at z₁/z₂, in y = a₃x"""
    _require_linearizable(sync, c)
    y_grid = scaled_grid(sync.pair.grid, sync.a3)
    profile = ScalarField(grid=y_grid, values=sync.profile_values)
    return descriptors_from_profile(profile, c)


def descriptor_spectrum(problem: ScalarProblem, parity: Parity = Parity.EVEN) -> np.ndarray:
    """Eigenvalues of -Δ + 1 - V, symmetrized with the quadrature weights"""
    potential = _working_field(problem.potential, parity)
    grid = potential.grid
    inner = interior_slice(grid)
    diagonal, upper = stiffness_bands(grid)
    q = grid.weights[inner]
    d = diagonal[inner] / q + 1.0 - potential.values[inner]
    e = upper[inner][:-1] / np.sqrt(q[:-1] * q[1:])
    return eigh_tridiagonal(d, e, eigvals_only=True)


def kernel_singular_value(problem: ScalarProblem, parity: Parity = Parity.EVEN) -> float:
    """Smallest singular value of the symmetrized -Δ + 1 - V"""
    return float(np.min(np.abs(descriptor_spectrum(problem, parity))))


def k_indicator(c: Couplings, w0: float) -> float:
    coefficient, shift = descriptor_coefficients(c)
    return coefficient * w0 ** 2 - shift


def peak_threshold(c: Couplings) -> float:
    """Largest w(0) with K ≤ 0 for -μ < β₀ < 3μ"""
    coefficient, shift = descriptor_coefficients(c)
    return math.sqrt(shift / coefficient)


def nondegeneracy_check(
    c: Couplings,
    w0: float,
    soliton: Optional[SolitonSolution] = None,
    count: int = 4,
) -> SpectrumReport:
    """K-indicator verdict, cross-validated by the discrete kernels when a soliton is given"""
    if c.p != 4:
        raise ConfigError("nondegeneracy check requires p=4")
    if c.mu is None:
        raise ConfigError("nondegeneracy check requires a₀=b₀")
    mu = c.mu
    if c.beta0 <= -mu:
        raise ConfigError(f"β₀={c.beta0} must exceed -μ={-mu}")

    indicator = k_indicator(c, w0)
    verdict = (
        Verdict.NONDEGENERATE
        if c.beta0 >= 3.0 * mu or indicator <= 0
        else Verdict.INCONCLUSIVE
    )

    eigenvalues: list[float] = []
    singular_values: dict[str, float] = {}
    kernel_dimension: Optional[int] = None
    consistent: Optional[bool] = None
    if soliton is not None:
        eigenvalues = weighted_eigenvalues(soliton, count=count)
        for problem in descriptors_from_profile(soliton.profile, c):
            singular_values[problem.label] = kernel_singular_value(problem)
        kernel_dimension = sum(1 for s in singular_values.values() if s < KERNEL_THRESHOLD)
        consistent = not (verdict == Verdict.NONDEGENERATE and kernel_dimension)
        if not consistent:
            logger.warning(
                "Formula verdict is nondegenerate but the discrete kernel has dimension %d",
                kernel_dimension,
            )

    logger.info("Nondegeneracy: β₀=%g κ₀=%g K=%.6g → %s", c.beta0, c.kappa0, indicator, verdict.value)
    return SpectrumReport(
        eigenvalues=eigenvalues,
        k_indicator=indicator,
        verdict=verdict,
        beta0=c.beta0,
        mu=mu,
        kernel_dimension=kernel_dimension,
        singular_values=singular_values,
        consistent=consistent,
    )


def scaled_eigenvalues(
    sync: SynchronizedSolution,
    c: Couplings,
    count: int = 4,
    parity: Parity = Parity.EVEN,
) -> list[float]:
    """Weighted eigenvalues before the y-rescaling:
    -Δψ + (1-κ₀)ψ = λ(1-κ₀)w²(a₃x)ψ on the synchronized solution's own grid.
    """
    _require_linearizable(sync, c)
    profile = _working_field(sync.pair.u.with_values(sync.profile_values), parity)
    factor = 1.0 - c.kappa0
    solver = _weighted_pencil(profile, mass_scale=factor, shift=factor)
    return [solver.eigenvalue(index) for index in range(count)]


def coupled_linearization_spectrum(
    sync: SynchronizedSolution,
    c: Couplings,
    count: int = 6,
    parity: Parity = Parity.EVEN,
) -> list[float]:
    """Eigenvalues nearest 0 of the undecoupled Hessian of Φ₀ at z (W-symmetrized)"""
    _require_linearizable(sync, c)
    mu = c.mu
    u = _working_field(sync.pair.u, parity)
    v = _working_field(sync.pair.v, parity)
    grid = u.grid
    inner = interior_slice(grid)
    diagonal, upper = stiffness_bands(grid)
    q = grid.weights[inner]
    uu, vv = u.values[inner], v.values[inner]

    scale = 1.0 / np.sqrt(q)
    laplacian = sparse.diags(
        [upper[inner][:-1], diagonal[inner], upper[inner][:-1]], [-1, 0, 1], format="csr"
    )
    laplacian = sparse.diags(scale) @ laplacian @ sparse.diags(scale)
    block_uu = laplacian + sparse.diags(1.0 - 3.0 * mu * uu ** 2 - c.beta0 * vv ** 2)
    block_vv = laplacian + sparse.diags(1.0 - 3.0 * mu * vv ** 2 - c.beta0 * uu ** 2)
    block_uv = sparse.diags(-(c.kappa0 + 2.0 * c.beta0 * uu * vv))
    hessian = sparse.bmat([[block_uu, block_uv], [block_uv, block_vv]], format="csc")

    eigenvalues = eigsh(hessian, k=count, sigma=-1e-3, which="LM", return_eigenvectors=False)
    return sorted(float(x) for x in eigenvalues)
