"""Positive radial solution of -Δw + w = w³"""
import logging
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import solve_banded

from app.errors import ConfigError, NumericalError
from app.models.enums import SolitonMethod
from app.models.grid import RadialGrid, ScalarField
from app.models.reports import SolitonSolution
from app.solver.grid import (
    fold_even,
    interior_banded,
    interior_slice,
    make_grid,
    stiffness_apply,
    unfold_even,
)


logger = logging.getLogger("app.solver.scalar_soliton")

SHOOTING_BRACKET = (0.1, 10.0)
WIDENED_BRACKET = (0.01, 100.0)
SERIES_RADIUS = 1e-6
TAIL_LEVEL = 1e-4
NEWTON_MAX_ITER = 30


def scalar_residual(profile: ScalarField) -> float:
    """‖-Δw + w - w³‖∞ over interior nodes"""
    grid = profile.grid
    w = profile.values
    residual = stiffness_apply(grid, w) / grid.weights + w - w ** 3
    return float(np.max(np.abs(residual[grid.interior])))


def closed_form_soliton(grid: RadialGrid) -> SolitonSolution:
    """w(x) = √2·sech(x), the N=1 solution"""
    if grid.dimension != 1:
        raise ConfigError("closed-form soliton exists only for N=1")
    profile = ScalarField(grid=grid, values=math.sqrt(2.0) / np.cosh(grid.r))
    return SolitonSolution(
        profile=profile,
        peak=math.sqrt(2.0),
        residual=scalar_residual(profile),
        method=SolitonMethod.CLOSED_FORM,
    )


class ShootingSolver:
    """Bisection on the initial height w(0) of the radial ODE
    w'' + (N-1)/r·w' = w - w³, w'(0) = 0.

    Heights that make w cross zero overshoot; heights whose w turns back up
    while positive undershoot.
    """

    def __init__(self, dimension: int, radius: float, rtol: float = 1e-11, atol: float = 1e-13):
        self.dimension = dimension
        self.radius = radius
        self.rtol = rtol
        self.atol = atol

    def _rhs(self, r: float, y: np.ndarray) -> list[float]:
        w, dw = y
        return [dw, w - w ** 3 - (self.dimension - 1) / r * dw]

    def _start(self, height: float) -> tuple[float, list[float]]:
        """Series start w = α + (α-α³)r²/(2N) off the r=0 singularity"""
        r0 = SERIES_RADIUS
        curvature = (height - height ** 3) / self.dimension
        return r0, [height + 0.5 * curvature * r0 ** 2, curvature * r0]

    def integrate(self, height: float, stop: float | None = None, dense: bool = False):
        r0, y0 = self._start(height)

        def crosses_zero(r, y):
            return y[0]
        crosses_zero.terminal = True
        crosses_zero.direction = -1

        def turns_up(r, y):
            return y[1]
        turns_up.terminal = True
        turns_up.direction = 1

        return solve_ivp(
            self._rhs,
            (r0, stop or self.radius),
            y0,
            method="DOP853",
            rtol=self.rtol,
            atol=self.atol,
            events=(crosses_zero, turns_up),
            dense_output=dense,
        )

    def overshoots(self, height: float) -> bool:
        if height < 1.0:
            return False  # w''(0) > 0: the profile rises immediately
        solution = self.integrate(height)
        if solution.t_events[0].size:
            return True
        if solution.t_events[1].size:
            return False
        # No event before R: the growing mode e^{r} decides the sign of w + w'
        w, dw = solution.y[:, -1]
        return w + dw < 0

    def find_height(self, bracket: tuple[float, float] = SHOOTING_BRACKET, xtol: float = 1e-13) -> float:
        lo, hi = bracket
        if self.overshoots(lo) or not self.overshoots(hi):
            logger.info("Shooting bracket %s failed, widening to %s", bracket, WIDENED_BRACKET)
            lo, hi = WIDENED_BRACKET
            if self.overshoots(lo) or not self.overshoots(hi):
                raise NumericalError("shooting bracket not found")

        while hi - lo > xtol * hi:
            mid = 0.5 * (lo + hi)
            if self.overshoots(mid):
                hi = mid
            else:
                lo = mid
        height = 0.5 * (lo + hi)
        logger.debug("Shooting converged to w(0)=%.12f (N=%d)", height, self.dimension)
        return height

    def profile(self, height: float, r: np.ndarray) -> np.ndarray:
        """ODE profile up to the first event, spliced with the decaying tail"""
        solution = self.integrate(height, dense=True)
        small = np.nonzero(solution.y[0] < TAIL_LEVEL * height)[0]
        splice = solution.t[small[0]] if small.size else solution.t[-1]
        for events in solution.t_events:
            if events.size:
                # back off from the point where the growing mode took over
                splice = min(splice, 0.8 * events[0])
        splice = max(SERIES_RADIUS, splice)
        values = np.empty_like(r)
        inside = r <= splice
        values[inside] = solution.sol(np.maximum(r[inside], SERIES_RADIUS))[0]
        edge = solution.sol(splice)[0]
        outside = ~inside
        decay = (self.dimension - 1) / 2.0
        values[outside] = edge * (splice / r[outside]) ** decay * np.exp(-(r[outside] - splice))
        return values


def _newton_polish(grid: RadialGrid, w: np.ndarray, tol: float) -> np.ndarray:
    """Newton on S·w + W(w - w³) = 0 over interior nodes (Dirichlet node fixed at 0)"""
    inner = interior_slice(grid)
    q = grid.weights
    w = w.copy()
    w[~grid.interior] = 0.0
    best = math.inf
    stalled = 0
    for iteration in range(NEWTON_MAX_ITER):
        residual = stiffness_apply(grid, w) + q * (w - w ** 3)
        norm = float(np.max(np.abs(residual[inner] / q[inner])))
        logger.debug("Newton iteration %d: residual %.3e", iteration, norm)
        if norm < 0.1 * tol:
            return w
        if norm >= best:
            stalled += 1
            if stalled >= 3:
                break
        else:
            best, stalled = norm, 0
        jacobian = interior_banded(grid, q * (1.0 - 3.0 * w ** 2))
        w[inner] -= solve_banded((1, 1), jacobian, residual[inner])
    residual = stiffness_apply(grid, w) + q * (w - w ** 3)
    if np.max(np.abs(residual[inner] / q[inner])) < tol:
        return w
    raise NumericalError("no convergence")


def _require_soliton_shape(profile: ScalarField) -> None:
    """Positive on interior nodes and decreasing in r"""
    grid = profile.grid
    values = profile.values
    outward = values[grid.center_index:]
    significant = outward > 1e-8 * outward[0]
    if not np.all(values[grid.interior] > 0) or not np.all(np.diff(outward)[significant[1:]] < 0):
        raise NumericalError("no convergence: discrete profile is not positive and decreasing")


def _solve_by_shooting(grid: RadialGrid, tol: float) -> SolitonSolution:
    work_grid = grid
    if grid.symmetric:
        if grid.nodes % 2 == 0:
            raise ConfigError("N=1 symmetric grids need an odd node count")
        work_grid = make_grid(1, grid.radius, (grid.nodes + 1) // 2, symmetric=False)

    shooter = ShootingSolver(grid.dimension, grid.radius)
    height = shooter.find_height()
    guess = shooter.profile(height, work_grid.r)
    values = _newton_polish(work_grid, guess, tol)
    profile = ScalarField(grid=work_grid, values=values)
    if grid.symmetric:
        profile = unfold_even(profile)
    _require_soliton_shape(profile)

    residual = scalar_residual(profile)
    logger.info(
        "Scalar soliton N=%d: w(0)=%.10f, discrete residual %.2e",
        grid.dimension, height, residual,
    )
    return SolitonSolution(profile=profile, peak=height, residual=residual, method=SolitonMethod.SHOOTING)


def _solve_by_gradient_flow(grid: RadialGrid, tol: float) -> SolitonSolution:
    # Scalar problem = decoupled system with v ≡ 0
    from app.models.couplings import Couplings, FieldPair
    from app.solver.ground_state import sech_pair, solve_ground_state

    couplings = Couplings(a0=1.0, b0=1.0, beta0=0.0, kappa0=0.0, p=4.0)
    init = sech_pair(grid)
    init = FieldPair(u=init.u, v=ScalarField.zeros(grid))
    report = solve_ground_state(init, couplings, tol=tol)
    profile = report.pair.u
    _require_soliton_shape(profile)
    return SolitonSolution(
        profile=profile,
        peak=profile.origin_value,
        residual=scalar_residual(profile),
        method=SolitonMethod.GRADIENT_FLOW,
    )


def solve_scalar(
    grid: RadialGrid,
    tol: float = 1e-8,
    method: SolitonMethod = SolitonMethod.SHOOTING,
) -> SolitonSolution:
    """Compute w on ``grid`` with discrete residual below ``tol``"""
    if not tol > 0:
        raise ConfigError(f"tol must be positive, got {tol}")
    if method == SolitonMethod.SHOOTING:
        return _solve_by_shooting(grid, tol)
    if method == SolitonMethod.GRADIENT_FLOW:
        return _solve_by_gradient_flow(grid, tol)
    if method == SolitonMethod.CLOSED_FORM:
        return closed_form_soliton(grid)
    raise ConfigError(f"unknown soliton method {method}")


def fold_soliton(solution: SolitonSolution) -> SolitonSolution:
    """Even-parity (half-line) version of an N=1 soliton on a symmetric grid"""
    if not solution.grid.symmetric:
        return solution
    return solution.model_copy(update={"profile": fold_even(solution.profile)})
