"""Ground states by Nehari-projected descent and the explicit synchronized family"""
import logging
import math
from typing import Optional, Protocol, Sequence

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from app.errors import ConfigError, NumericalError
from app.models.couplings import Couplings, FieldPair, PerturbationProfile
from app.models.enums import Branch
from app.models.grid import RadialGrid, ScalarField
from app.models.reports import (
    ContinuationRecord,
    DescentTrace,
    GroundStateReport,
    SolitonSolution,
    SynchronizedSolution,
)
from app.solver.energy import EnergyLandscape
from app.solver.grid import evaluate, h1_norm_sq, interior_banded, interior_slice
from app.validation import CouplingValidator


logger = logging.getLogger("app.solver.ground_state")

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 50000
MAX_KAPPA_GAP = 0.1

class Penalty(Protocol):
    """Extra term added to Φ during descent"""

    def value(self, u: np.ndarray, v: np.ndarray) -> float: ...

    def gradient(self, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...

_BRANCH_SIGNS = {
    Branch.Z1: (1.0, 1.0),
    Branch.Z2: (-1.0, -1.0),
    Branch.Z3: (1.0, -1.0),
    Branch.Z4: (-1.0, 1.0),
}


def _zero_boundary(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values[~grid.interior] = 0.0
    return values


def sech_pair(
    grid: RadialGrid,
    center: float = 0.0,
    amplitude: float = 1.0,
    offset: float = 0.0,
) -> FieldPair:
    """(A·sech(x - c), A·sech(x - c - offset)); centres must be 0 on radial grids"""
    if (center or offset) and not grid.symmetric:
        raise ConfigError("off-centre initial data needs a symmetric N=1 grid")
    u = amplitude / np.cosh(grid.r - center)
    v = amplitude / np.cosh(grid.r - center - offset)
    return FieldPair.from_arrays(grid, _zero_boundary(grid, u), _zero_boundary(grid, v))


def random_pair(grid: RadialGrid, seed: int, bumps: int = 3) -> FieldPair:
    """Positive sums of Gaussian bumps drawn from a seeded generator"""
    rng = np.random.default_rng(seed)
    components = []
    for _ in range(2):
        values = np.zeros(grid.nodes)
        for _ in range(bumps):
            height = rng.uniform(0.5, 1.5)
            width = rng.uniform(0.7, 1.5)
            centre = rng.uniform(-1.0, 1.0) if grid.symmetric else 0.0
            values += height * np.exp(-((grid.r - centre) / width) ** 2)
        components.append(_zero_boundary(grid, values))
    return FieldPair.from_arrays(grid, *components)


class NehariDescent:
    """Sobolev-preconditioned descent on the Nehari manifold.

    Each step moves along d = (S+W)⁻¹W·g, the H¹ representative of the strong
    gradient g, and rescales back onto 𝒩 with the closed-form projection.
    The step τ is halved until the objective does not increase.
    """

    def __init__(
        self,
        landscape: EnergyLandscape,
        penalty: Optional[Penalty] = None,
        initial_step: float = 1.0,
        max_step: float = 1.5,
        max_halvings: int = 40,
    ):
        self.landscape = landscape
        self.penalty = penalty
        self.max_step = max_step
        self.max_halvings = max_halvings
        self.tau = initial_step

        grid = landscape.grid
        self._inner = interior_slice(grid)
        banded = interior_banded(grid, grid.weights)
        self._factor = cholesky_banded(banded[:2])

        self.u: Optional[np.ndarray] = None
        self.v: Optional[np.ndarray] = None
        self.iterations = 0
        self.trace = DescentTrace()

    def _objective(self, u: np.ndarray, v: np.ndarray) -> tuple[float, float]:
        energy = self.landscape.energy(u, v)
        if self.penalty is None:
            return energy, energy
        return energy + self.penalty.value(u, v), energy

    def _evaluate_gradient(self) -> None:
        grad_u, grad_v = self.landscape.gradient(self.u, self.v)
        if self.penalty is not None:
            pen_u, pen_v = self.penalty.gradient(self.u, self.v)
            grad_u = grad_u + pen_u
            grad_v = grad_v + pen_v
        self.grad_u, self.grad_v = grad_u, grad_v
        self.gradient_norm = self.landscape.gradient_norm(grad_u, grad_v)

    def _precondition(self, gradient: np.ndarray) -> np.ndarray:
        direction = np.zeros_like(gradient)
        rhs = self.landscape.weights[self._inner] * gradient[self._inner]
        direction[self._inner] = cho_solve_banded((self._factor, False), rhs)
        return direction

    def _record(self, step: float) -> None:
        self.trace.energies.append(self.energy)
        self.trace.gradient_norms.append(self.gradient_norm)
        self.trace.steps.append(step)
        self.trace.norm_sq.append(self.norm_sq)

    def start(self, u: np.ndarray, v: np.ndarray) -> None:
        grid = self.landscape.grid
        _, self.u, self.v = self.landscape.project(_zero_boundary(grid, u), _zero_boundary(grid, v))
        self.objective, self.energy = self._objective(self.u, self.v)
        self.norm_sq = self.landscape.parts(self.u, self.v)[0]
        self._evaluate_gradient()
        self._record(0.0)

    def step(self) -> float:
        """One accepted step; returns τ"""
        direction_u = self._precondition(self.grad_u)
        direction_v = self._precondition(self.grad_v)
        slack = 1e-12 * max(1.0, abs(self.objective))
        tau = min(self.max_step, 1.5 * self.tau)
        for _ in range(self.max_halvings):
            try:
                _, u, v = self.landscape.project(self.u - tau * direction_u, self.v - tau * direction_v)
            except NumericalError:
                tau *= 0.5
                continue
            objective, energy = self._objective(u, v)
            if objective <= self.objective + slack:
                break
            tau *= 0.5
        else:
            raise NumericalError(
                f"line search failed at iteration {self.iterations} "
                f"(gradient norm {self.gradient_norm:.3e})"
            )

        self.u, self.v = u, v
        self.objective, self.energy = objective, energy
        self.norm_sq = self.landscape.parts(u, v)[0]
        self.tau = tau
        self.iterations += 1
        self._evaluate_gradient()
        self._record(tau)
        return tau

    def run(self, tol: float, max_iter: int) -> bool:
        """Step until the gradient sup-norm drops below tol; False if max_iter is hit"""
        while self.gradient_norm >= tol:
            if self.iterations >= max_iter:
                return False
            self.step()
            if self.iterations % 1000 == 0:
                logger.debug(
                    "Iteration %d: energy %.12f, gradient %.3e, τ=%.3g",
                    self.iterations, self.energy, self.gradient_norm, self.tau,
                )
        return True

    def pair(self) -> FieldPair:
        return FieldPair.from_arrays(self.landscape.grid, self.u, self.v)

    def report(self, tol: float, converged: bool) -> GroundStateReport:
        quadratic, homogeneous = self.landscape.parts(self.u, self.v)
        return GroundStateReport(
            pair=self.pair(),
            energy=self.energy,
            gradient_norm=self.gradient_norm,
            nehari_residual=abs(quadratic - homogeneous),
            norm_sq=quadratic,
            iterations=self.iterations,
            converged=converged,
            tol=tol,
            trace=self.trace,
        )


def residual_norm(z: FieldPair, c: Couplings, pert: Optional[PerturbationProfile] = None) -> float:
    """Sup-norm of Φ'(z) over interior nodes"""
    landscape = EnergyLandscape(z.grid, c, pert)
    return landscape.gradient_norm(*landscape.gradient(z.u.values, z.v.values))


def _start_descent(descent: NehariDescent, init: FieldPair) -> None:
    try:
        descent.start(init.u.values, init.v.values)
    except NumericalError as exc:
        raise NumericalError(f"projection degenerate: {exc}") from exc


def solve_ground_state(
    init: FieldPair,
    c: Couplings,
    pert: Optional[PerturbationProfile] = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> GroundStateReport:
    """Minimize Φ on 𝒩 from ``init``"""
    if not tol > 0:
        raise ConfigError(f"tol must be positive, got {tol}")
    landscape = EnergyLandscape(init.grid, c, pert)
    descent = NehariDescent(landscape)
    _start_descent(descent, init)

    if not descent.run(tol, max_iter):
        raise NumericalError(
            f"max_iter exceeded: {max_iter} iterations, gradient norm {descent.gradient_norm:.3e}"
        )
    logger.info(
        "Ground state converged in %d iterations: energy %.10f, gradient %.2e",
        descent.iterations, descent.energy, descent.gradient_norm,
    )
    return descent.report(tol, converged=True)


def synchronized_amplitudes(
    c: Couplings,
    branch: Branch = Branch.Z1,
    exact_antisymmetric: bool = False,
) -> tuple[float, float, float]:
    """(a₁, a₂, a₃) of the synchronized ansatz for ``branch``.

    z₃/z₄ use the same moduli as z₁/z₂. With ``exact_antisymmetric`` they use
    (1+κ₀) instead of (1-κ₀), which makes them exact solutions for κ₀ > 0.
    """
    CouplingValidator.require(lambda: CouplingValidator.validate_synchronized(c))
    mu = c.mu
    kappa = c.kappa0
    if exact_antisymmetric and branch in (Branch.Z3, Branch.Z4):
        kappa = -kappa
    modulus = math.sqrt((1.0 - kappa) / (mu + c.beta0))
    sign_u, sign_v = _BRANCH_SIGNS[branch]
    return sign_u * modulus, sign_v * modulus, math.sqrt(1.0 - kappa)


def build_synchronized(
    branch: Branch,
    c: Couplings,
    w: SolitonSolution,
    grid: Optional[RadialGrid] = None,
    exact_antisymmetric: bool = False,
) -> SynchronizedSolution:
    """z = (a₁w(a₃x), a₂w(a₃x))"""
    a1, a2, a3 = synchronized_amplitudes(c, branch, exact_antisymmetric)
    grid = grid or w.grid
    if grid.dimension != w.grid.dimension:
        raise ConfigError("soliton and target grid dimensions differ")
    if grid.dimension == 1:
        profile = math.sqrt(2.0) / np.cosh(a3 * grid.r)
    else:
        profile = evaluate(w.profile, a3 * grid.r)
    pair = FieldPair.from_arrays(grid, a1 * profile, a2 * profile)
    logger.debug("Built synchronized %s: a1=%.6f a2=%.6f a3=%.6f", branch.value, a1, a2, a3)
    return SynchronizedSolution(branch=branch, a1=a1, a2=a2, a3=a3, pair=pair)


def synchronized_energy(c: Couplings, soliton_norm_sq: float = 16.0 / 3.0, dimension: int = 1) -> float:
    """Φ₀(z₁) = ½·a₁²·a₃^{2-N}·‖w‖²; the N=1 default gives (8/3)(1-κ₀)^{3/2}/(μ+β₀)"""
    a1, _, a3 = synchronized_amplitudes(c)
    return 0.5 * a1 ** 2 * a3 ** (2 - dimension) * soliton_norm_sq


def soliton_norm_sq(w: SolitonSolution) -> float:
    return h1_norm_sq(w.profile)


def kappa_free_state(c: Couplings, w: SolitonSolution) -> FieldPair:
    """κ₀=0 state (√((β₀-b₀)/(β₀²-a₀b₀))·w, √((β₀-a₀)/(β₀²-a₀b₀))·w)"""
    if c.kappa0 != 0 or c.p != 4 or c.periodic is not None:
        raise ConfigError("κ₀-free state requires κ₀=0, p=4 and constant a₀, b₀")
    lo, hi = sorted((c.a0, c.b0))
    if c.beta0 < 0 or lo <= c.beta0 <= hi:
        raise ConfigError("κ₀-free state requires 0 ≤ β₀ outside [min(a₀,b₀), max(a₀,b₀)]")
    denominator = c.beta0 ** 2 - c.a0 * c.b0
    scale_u = math.sqrt((c.beta0 - c.b0) / denominator)
    scale_v = math.sqrt((c.beta0 - c.a0) / denominator)
    values = w.profile.values
    return FieldPair.from_arrays(w.grid, scale_u * values, scale_v * values)


def _kappa_path(previous: Optional[float], target: float, max_gap: float) -> list[float]:
    """Intermediate κ₀ values so that consecutive solves differ by at most max_gap"""
    if previous is None:
        return [target]
    substeps = max(1, math.ceil((target - previous) / max_gap - 1e-12))
    path = [previous + (target - previous) * k / substeps for k in range(1, substeps)]
    return path + [target]


def continuation_kappa(
    c: Couplings,
    pert: Optional[PerturbationProfile],
    kappa_list: Sequence[float],
    grid: RadialGrid,
    init: Optional[FieldPair] = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_gap: float = MAX_KAPPA_GAP,
) -> list[ContinuationRecord]:
    """Warm-started solves along increasing κ₀"""
    kappas = [float(k) for k in kappa_list]
    if not kappas:
        raise ConfigError("κ-list must not be empty")
    if any(not 0 < k < 1 for k in kappas):
        raise ConfigError("κ-list entries must lie in (0, 1)")
    if any(b <= a for a, b in zip(kappas, kappas[1:])):
        raise ConfigError("κ-list must be strictly increasing")

    current = init or sech_pair(grid)
    previous: Optional[float] = None
    records: list[ContinuationRecord] = []
    for index, kappa in enumerate(kappas):
        try:
            for step_kappa in _kappa_path(previous, kappa, max_gap):
                report = solve_ground_state(current, c.with_kappa(step_kappa), pert, tol, max_iter)
                current = report.pair
        except (NumericalError, ConfigError) as exc:
            raise type(exc)(f"κ₀[{index}]={kappa}: {exc}") from exc
        previous = kappa
        records.append(ContinuationRecord(
            kappa0=kappa,
            energy=report.energy,
            peak_u=report.peak_u,
            peak_v=report.peak_v,
            iterations=report.iterations,
            converged=report.converged,
        ))
        logger.info("κ₀=%.4f: c₀=%.10f after %d iterations", kappa, report.energy, report.iterations)
    return records
