"""Comparison criteria, barycenter, translated paths and bound-state thresholds"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from app.errors import ConfigError, NumericalError
from app.models.couplings import Couplings, FieldPair, PerturbationProfile, PROFILE_NAMES
from app.models.enums import Conclusion, Hypothesis
from app.models.grid import RadialGrid, ScalarField
from app.models.reports import (
    Barycenter,
    ComparisonReport,
    DriftTrace,
    GammaPoint,
    GroundStateReport,
    SplittingReport,
    ThresholdReport,
)
from app.solver.energy import EnergyLandscape
from app.solver.grid import extend_grid, resample, translated_overlap
from app.solver.ground_state import DEFAULT_TOL, NehariDescent, sech_pair


logger = logging.getLogger("app.solver.analysis")

LIMIT_RESIDUAL_TOL = 1e-4
PENALTY_SCHEDULE = (1.0, 10.0, 100.0, 1000.0)
SAME_PROFILE_RTOL = 1e-6


# --- barycenter -------------------------------------------------------------

def _local_average(grid: RadialGrid, values: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Average of |f| over [x - radius, x + radius] for the piecewise-linear interpolant.

    Cells cut by the window ends get fractional weights.
    """
    if not radius > 0:
        raise ConfigError("averaging radius must be positive")
    steps = radius / grid.spacing
    whole = int(math.floor(steps + 1e-9))
    frac = steps - whole
    if frac < 1e-9:
        frac = 0.0
    centre = whole + 1
    kernel = np.zeros(2 * whole + 3)
    if whole:
        kernel[centre - whole:centre + whole + 1] = 1.0
        kernel[centre - whole] = kernel[centre + whole] = 0.5
    for side in (-1, 1):
        kernel[centre + side * whole] += frac - 0.5 * frac ** 2
        kernel[centre + side * (whole + 1)] += 0.5 * frac ** 2
    return np.convolve(np.abs(values), kernel, mode="same") / (2.0 * (whole + frac))


def _truncated_mass(grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """(μ(f) - ½ max μ(f))⁺"""
    average = _local_average(grid, values)
    return np.maximum(average - 0.5 * np.max(average), 0.0)


def barycenter_of_arrays(grid: RadialGrid, u: np.ndarray, v: np.ndarray) -> float:
    mass = _truncated_mass(grid, u) + _truncated_mass(grid, v)
    weighted = grid.weights * mass
    return float(np.dot(weighted, grid.r) / np.sum(weighted))


def barycenter(z: FieldPair) -> Barycenter:
    """ξ(u, v); radial grids carry radial pairs, whose barycenter is the origin"""
    if z.is_zero:
        raise ConfigError("barycenter is undefined for the zero pair")
    grid = z.grid
    if not grid.symmetric:
        return Barycenter(point=[0.0] * grid.dimension)
    return Barycenter(point=[barycenter_of_arrays(grid, z.u.values, z.v.values)])


def translate_pair(z: FieldPair, shift: float, grid: Optional[RadialGrid] = None) -> FieldPair:
    """z(· - shift) sampled on ``grid`` (default: z's grid)"""
    grid = grid or z.grid
    return FieldPair(u=resample(z.u, grid, shift), v=resample(z.v, grid, shift))


# --- comparison criteria ----------------------------------------------------

def _holds_with_strict(values: np.ndarray, weights: np.ndarray) -> bool:
    """values ≥ 0 everywhere and > 0 at a node of positive weight"""
    return bool(np.all(values >= 0) and np.any((values > 0) & (weights > 0)))


def comparison_check(
    w0: FieldPair,
    c: Couplings,
    pert: PerturbationProfile,
) -> ComparisonReport:
    """Sufficient conditions for c < c₀, evaluated at a limit ground state w₀"""
    grid = w0.grid
    limit = EnergyLandscape(grid, c, None)
    full = EnergyLandscape(grid, c, pert)
    u, v = w0.u.values, w0.v.values
    residual = limit.gradient_norm(*limit.gradient(u, v))
    if residual >= LIMIT_RESIDUAL_TOL:
        raise ConfigError(
            f"w₀ does not solve the limit problem (residual {residual:.3e} ≥ {LIMIT_RESIDUAL_TOL})"
        )

    p = c.p
    q = grid.weights
    quadratic0, homogeneous0 = limit.parts(u, v)
    _, homogeneous = full.parts(u, v)
    quadratic = quadratic0 - 2.0 * float(np.dot(q, pert.kappa * u * v))

    lhs = (quadratic / quadratic0) ** (0.5 * p)
    rhs = homogeneous / homogeneous0
    criterion01 = lhs < rhs
    less2 = quadratic ** (0.5 * p) / homogeneous < quadratic0 ** (0.5 * p) / homogeneous0

    signs = np.stack([getattr(pert, name) for name in PROFILE_NAMES])
    criterion02 = bool(np.all(signs >= 0) and np.any((signs > 0) & (q > 0)))

    criterion03 = criterion04 = None
    if np.allclose(u, v, rtol=SAME_PROFILE_RTOL, atol=SAME_PROFILE_RTOL * np.max(np.abs(u))):
        combined = pert.a + pert.b + 2.0 * pert.beta
        criterion03 = _holds_with_strict(combined * np.abs(u) ** (p - 2.0) + p * pert.kappa, q)
        criterion04 = bool(
            np.all(pert.kappa >= 0)
            and np.all(combined >= 0)
            and np.any(((pert.kappa > 0) | (combined > 0)) & (q > 0))
        )

    holds = criterion01 or criterion02 or bool(criterion03) or bool(criterion04)
    report = ComparisonReport(
        criterion01_lhs=lhs,
        criterion01_rhs=rhs,
        criterion01=criterion01,
        less2=less2,
        criterion02=criterion02,
        criterion03=criterion03,
        criterion04=criterion04,
        conclusion=Conclusion.EXISTS if holds else Conclusion.UNDETERMINED,
    )
    logger.info("Comparison criteria: %s", report.conclusion.value)
    return report


# --- translated path Γ(y) ---------------------------------------------------

def _check_shifts(grid: RadialGrid, shifts: Sequence[float]) -> list[float]:
    shifts = [float(y) for y in shifts]
    if not shifts:
        raise ConfigError("y-list must not be empty")
    for y in shifts:
        if not math.isfinite(y) or abs(y) > 2.0 * grid.radius:
            raise ConfigError(f"translation exceeding grid support: |y|={abs(y)} > 2R")
    return shifts


def _field(pert: PerturbationProfile, name: str) -> ScalarField:
    return ScalarField(grid=pert.grid, values=getattr(pert, name))


def _extend_perturbation(pert: PerturbationProfile, grid: RadialGrid) -> PerturbationProfile:
    fields = {name: resample(_field(pert, name), grid).values for name in PROFILE_NAMES}
    return PerturbationProfile(grid=grid, decaying=pert.decaying, **fields)


def _gamma_full_line(
    w0: FieldPair,
    c: Couplings,
    pert: PerturbationProfile,
    shifts: list[float],
    threads: int,
) -> list[GammaPoint]:
    extended = extend_grid(w0.grid, max(abs(y) for y in shifts))
    landscape = EnergyLandscape(extended, c, _extend_perturbation(pert, extended))

    def sample(y: float) -> GammaPoint:
        moved = translate_pair(w0, y, extended)
        t, u, v = landscape.project(moved.u.values, moved.v.values)
        return GammaPoint(
            y=y,
            t_y=t,
            energy=landscape.energy(u, v),
            barycenter=barycenter_of_arrays(extended, u, v),
        )

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(sample, shifts))


def _gamma_radial(
    w0: FieldPair,
    c: Couplings,
    pert: PerturbationProfile,
    shifts: list[float],
    threads: int,
) -> list[GammaPoint]:
    grid = w0.grid
    limit = EnergyLandscape(grid, c, None)
    u, v = w0.u.values, w0.v.values
    quadratic0, homogeneous0 = limit.parts(u, v)
    p = c.p
    uv = w0.u.with_values(u * v)
    power_u = w0.u.with_values(np.abs(u) ** p)
    power_v = w0.u.with_values(np.abs(v) ** p)
    cross = w0.u.with_values(np.abs(u * v) ** (0.5 * p))

    def sample(y: float) -> GammaPoint:
        quadratic = quadratic0 - 2.0 * translated_overlap(uv, _field(pert, "kappa"), y)
        homogeneous = (
            homogeneous0
            + translated_overlap(power_u, _field(pert, "a"), y)
            + translated_overlap(power_v, _field(pert, "b"), y)
            + 2.0 * translated_overlap(cross, _field(pert, "beta"), y)
        )
        if not homogeneous > 0 or not quadratic > 0:
            raise NumericalError(f"degenerate direction at y={y}")
        t = (quadratic / homogeneous) ** (1.0 / (p - 2.0))
        return GammaPoint(y=y, t_y=t, energy=(0.5 - 1.0 / p) * t * t * quadratic)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(sample, shifts))


def gamma_profile(
    w0: FieldPair,
    c: Couplings,
    pert: PerturbationProfile,
    y_list: Sequence[float],
    threads: int = 1,
) -> list[GammaPoint]:
    """Φ(Γ(y)) with Γ(y) = t_y·w₀(· - y) projected onto 𝒩; output in input order"""
    if pert.grid != w0.grid:
        raise ConfigError("grid mismatch between field pair and perturbation")
    shifts = _check_shifts(w0.grid, y_list)
    if w0.grid.symmetric:
        points = _gamma_full_line(w0, c, pert, shifts, threads)
    else:
        points = _gamma_radial(w0, c, pert, shifts, threads)
    logger.info("Γ-profile evaluated at %d shifts", len(points))
    return points


# --- thresholds -------------------------------------------------------------

def existence_hypothesis(c: Couplings, w0: float) -> Hypothesis:
    """Which limit-system hypothesis of the bound-state result holds"""
    if c.beta0 >= 3:
        return Hypothesis.BETA_LARGE
    if c.beta0 <= -1:
        return Hypothesis.NONE
    bound = math.sqrt(2.0 * c.kappa0 * (1.0 + c.beta0) / ((3.0 - c.beta0) * (1.0 - c.kappa0)))
    if w0 > bound:
        return Hypothesis.NONE
    if c.beta0 >= 1:
        return Hypothesis.PEAK_BOUND
    # the remaining case also needs small parameters, which is not checked
    return Hypothesis.PEAK_BOUND_SMALL_PARAMETERS


def r0_threshold(
    c: Couplings,
    pert: PerturbationProfile,
    c0: Optional[float] = None,
    d0: Optional[float] = None,
    w0: Optional[float] = None,
) -> ThresholdReport:
    """R₀ = (1+|κ|∞/(1-κ₀))²/(1-max{|a|∞/a₀, |b|∞/b₀, |β|∞/β₀}) against c̃₀/c₀"""
    if c.p != 4 or c.periodic is not None:
        raise ConfigError("R₀ is defined for p=4 with constant a₀, b₀")

    def ratio(sup: float, base: float) -> float:
        if sup == 0:
            return 0.0
        return math.inf if base == 0 else sup / abs(base)

    max_ratio = max(
        ratio(pert.sup_abs("a"), c.a0),
        ratio(pert.sup_abs("b"), c.b0),
        ratio(pert.sup_abs("beta"), c.beta0),
    )
    if max_ratio >= 1:
        raise ConfigError(f"perturbation too large: max ratio {max_ratio:.6g} ≥ 1")
    r0 = (1.0 + pert.sup_abs("kappa") / (1.0 - c.kappa0)) ** 2 / (1.0 - max_ratio)

    bound = 2.0
    if d0 is not None:
        if c0 is None or not c0 > 0:
            raise ConfigError("a d₀ estimate needs the limit level c₀")
        bound = min(d0 / c0, 2.0)

    return ThresholdReport(
        r0=r0,
        bound=bound,
        satisfied=r0 < bound,
        max_ratio=max_ratio,
        hypothesis=existence_hypothesis(c, w0) if w0 is not None else None,
    )


# --- barycenter-constrained search -------------------------------------------

class BarycenterPenalty:
    """λ·|ξ(z)|² with a gradient along the translation generator ∂ₓz"""

    def __init__(self, grid: RadialGrid, weight: float, delta: float = 1e-4):
        self.grid = grid
        self.weight = weight
        self.delta = delta

    def value(self, u: np.ndarray, v: np.ndarray) -> float:
        if not self.grid.symmetric:
            return 0.0
        return self.weight * barycenter_of_arrays(self.grid, u, v) ** 2

    def gradient(self, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if not self.grid.symmetric:
            return np.zeros_like(u), np.zeros_like(v)
        h = self.grid.spacing
        du, dv = np.gradient(u, h), np.gradient(v, h)
        step = self.delta
        slope = (
            self.value(u + step * du, v + step * dv) - self.value(u - step * du, v - step * dv)
        ) / (2.0 * step)
        generator_sq = float(np.dot(self.grid.weights, du * du + dv * dv))
        scale = slope / generator_sq
        return scale * du, scale * dv


def constrained_search(
    c: Couplings,
    pert: PerturbationProfile,
    tol: float = DEFAULT_TOL,
    init: Optional[FieldPair] = None,
    penalty_schedule: Sequence[float] = PENALTY_SCHEDULE,
    max_iter: int = 20000,
) -> GroundStateReport:
    """Minimize Φ on 𝒩 with a ramped penalty on |ξ|²; an upper estimate of c̃"""
    if not pert.is_non_positive():
        raise ConfigError("constrained search expects non-positive perturbations")
    grid = pert.grid
    landscape = EnergyLandscape(grid, c, pert)
    current = init or sech_pair(grid)

    descent: Optional[NehariDescent] = None
    converged = False
    for weight in penalty_schedule:
        descent = NehariDescent(landscape, penalty=BarycenterPenalty(grid, weight))
        descent.start(current.u.values, current.v.values)
        converged = descent.run(tol, max_iter)
        current = descent.pair()
        logger.info(
            "Penalty λ=%g: energy %.10f, |ξ|=%.3e, %s after %d iterations",
            weight, descent.energy, abs(barycenter_of_arrays(grid, descent.u, descent.v))
            if grid.symmetric else 0.0,
            "converged" if converged else "not converged", descent.iterations,
        )
    if not converged:
        logger.warning("Constrained search ended without reaching tol=%g", tol)
    return descent.report(tol, converged)


def drift_trace(
    c: Couplings,
    pert: PerturbationProfile,
    offset: float = 2.0,
    iterations: int = 2000,
    record_every: int = 50,
) -> DriftTrace:
    """Free descent started at ``offset``; records energy and ξ"""
    grid = pert.grid
    if not grid.symmetric:
        raise ConfigError("drift trace needs a symmetric N=1 grid")
    landscape = EnergyLandscape(grid, c, pert)
    descent = NehariDescent(landscape)
    init = sech_pair(grid, center=offset)
    descent.start(init.u.values, init.v.values)

    trace = DriftTrace()

    def record() -> None:
        trace.iterations.append(descent.iterations)
        trace.energies.append(descent.energy)
        trace.barycenters.append(barycenter_of_arrays(grid, descent.u, descent.v))

    record()
    while descent.iterations < iterations:
        try:
            descent.step()
        except NumericalError:
            logger.info("Drift trace stalled at iteration %d", descent.iterations)
            break
        if descent.iterations % record_every == 0:
            record()
    if trace.iterations[-1] != descent.iterations:
        record()
    return trace


def split_energy(w0: FieldPair, c: Couplings, separation: float) -> SplittingReport:
    """Φ₀ of two copies of w₀ at distance ``separation``, projected onto 𝒩₀"""
    grid = w0.grid
    if not grid.symmetric:
        raise ConfigError("energy splitting needs a symmetric N=1 grid")
    if not separation > 0:
        raise ConfigError("separation must be positive")
    c0 = EnergyLandscape(grid, c, None).mountain_pass_level(w0.u.values, w0.v.values)

    extended = extend_grid(grid, 0.5 * separation)
    left = translate_pair(w0, -0.5 * separation, extended)
    right = translate_pair(w0, 0.5 * separation, extended)
    landscape = EnergyLandscape(extended, c, None)
    energy = landscape.mountain_pass_level(
        left.u.values + right.u.values, left.v.values + right.v.values
    )
    return SplittingReport(separation=separation, energy=energy, c0=c0, ratio=energy / c0)
