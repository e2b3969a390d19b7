"""Experiment runner - resolves a config and dispatches subcommands"""
import logging
from pathlib import Path
from typing import Callable, Optional

from app.errors import ConfigError
from app.models.config import RunConfig
from app.models.couplings import Couplings, FieldPair, PerturbationProfile
from app.models.enums import Command, InitKind
from app.models.grid import RadialGrid
from app.models.reports import GroundStateReport, SolitonSolution
from app.solver.analysis import (
    barycenter,
    comparison_check,
    constrained_search,
    gamma_profile,
    r0_threshold,
)
from app.solver.ground_state import continuation_kappa, random_pair, sech_pair, solve_ground_state
from app.solver.scalar_soliton import solve_scalar
from app.solver.spectrum import nondegeneracy_check
from app.state.result_writer import ResultWriter


logger = logging.getLogger("app.state.runner")

# fixed CSV schemas, one per subcommand
COLUMNS: dict[Command, tuple[str, ...]] = {
    Command.SCALAR: ("r", "w"),
    Command.GROUND: (
        "energy", "gradient_norm", "nehari_residual", "peak_u", "peak_v", "iterations", "converged",
    ),
    Command.SWEEP_KAPPA: ("kappa0", "energy", "peak_u", "peak_v", "iterations", "converged"),
    Command.SPECTRUM: (
        "index", "eigenvalue", "k_indicator", "verdict", "kernel_dimension", "consistent",
    ),
    Command.BARYCENTER: ("component", "value"),
    Command.GAMMA: ("y", "t_y", "energy", "barycenter"),
    Command.THRESHOLD: ("r0", "bound", "satisfied", "hypothesis"),
    Command.COMPARE: (
        "criterion01_lhs", "criterion01_rhs", "less2",
        "criterion01", "criterion02", "criterion03", "criterion04", "conclusion",
    ),
    Command.BOUND: ("energy", "c0", "margin", "barycenter_norm", "iterations", "converged"),
}


class ExperimentRunner:
    """Builds grid, couplings and perturbation once, then runs one subcommand"""

    def __init__(
        self,
        config: RunConfig,
        writer: ResultWriter,
        seed: Optional[int] = None,
        threads: int = 1,
    ):
        self.config = config
        self.writer = writer
        self.seed = seed
        self.threads = max(1, threads)

        self.grid: RadialGrid = config.grid()
        self.couplings: Couplings = config.couplings()
        self.perturbation: PerturbationProfile = config.perturbation(self.grid)
        self._soliton: Optional[SolitonSolution] = None
        self._limit: Optional[GroundStateReport] = None

        self._handlers: dict[Command, Callable[[], list[tuple]]] = {
            Command.SCALAR: self._scalar,
            Command.GROUND: self._ground,
            Command.SWEEP_KAPPA: self._sweep_kappa,
            Command.SPECTRUM: self._spectrum,
            Command.BARYCENTER: self._barycenter,
            Command.GAMMA: self._gamma,
            Command.THRESHOLD: self._threshold,
            Command.COMPARE: self._compare,
            Command.BOUND: self._bound,
        }

    def run(self, command: Command) -> Path:
        """Run ``command``; returns the CSV path. The manifest is written alongside."""
        command = Command(command)
        logger.info(
            "Running %s on N=%d, R=%g, M=%d", command.value,
            self.grid.dimension, self.grid.radius, self.grid.nodes,
        )
        rows = self._handlers[command]()
        path = self.writer.write_table(command.value, COLUMNS[command], rows)
        self.writer.write_manifest(command.value, self.config)
        return path

    # --- shared pieces ---------------------------------------------------

    def initial_pair(self) -> FieldPair:
        if self.config.init == InitKind.RANDOM:
            if self.seed is None:
                raise ConfigError("random init needs an explicit --seed")
            return random_pair(self.grid, self.seed)
        return sech_pair(self.grid, offset=self.config.init_offset)

    def soliton(self) -> SolitonSolution:
        if self._soliton is None:
            self._soliton = solve_scalar(self.grid)
        return self._soliton

    def limit_ground_state(self) -> GroundStateReport:
        """Ground state of the unperturbed system, the w₀ of the comparison tools"""
        if self._limit is None:
            self._limit = solve_ground_state(
                self.initial_pair(), self.couplings, None, self.config.tol, self.config.max_iter
            )
        return self._limit

    # --- subcommands -----------------------------------------------------

    def _scalar(self) -> list[tuple]:
        solution = solve_scalar(self.grid, self.config.tol)
        logger.info("w(0)=%.10f, residual %.2e", solution.peak, solution.residual)
        return list(zip(self.grid.r, solution.profile.values))

    def _ground(self) -> list[tuple]:
        report = solve_ground_state(
            self.initial_pair(), self.couplings, self.perturbation,
            self.config.tol, self.config.max_iter,
        )
        self.writer.write_pair("ground_profile", report.pair)
        return [(
            report.energy, report.gradient_norm, report.nehari_residual,
            report.peak_u, report.peak_v, report.iterations, report.converged,
        )]

    def _sweep_kappa(self) -> list[tuple]:
        records = continuation_kappa(
            self.couplings, self.perturbation, self.config.kappa_list, self.grid,
            init=self.initial_pair(), tol=self.config.tol, max_iter=self.config.max_iter,
        )
        return [
            (r.kappa0, r.energy, r.peak_u, r.peak_v, r.iterations, r.converged)
            for r in records
        ]

    def _spectrum(self) -> list[tuple]:
        soliton = self.soliton()
        report = nondegeneracy_check(
            self.couplings, soliton.peak, soliton, count=self.config.eigen_count
        )
        return [
            (index + 1, value, report.k_indicator, report.verdict, report.kernel_dimension,
             report.consistent)
            for index, value in enumerate(report.eigenvalues)
        ]

    def _barycenter(self) -> list[tuple]:
        if self.config.pair_file is None:
            raise ConfigError("barycenter needs pair_file")
        pair = ResultWriter.read_pair(self.config.resolve_path(self.config.pair_file), self.grid)
        point = barycenter(pair)
        rows = [(f"xi_{i + 1}", value) for i, value in enumerate(point.point)]
        return rows + [("norm", point.norm)]

    def _gamma(self) -> list[tuple]:
        w0 = self.limit_ground_state()
        logger.info("Limit level c₀=%.10f", w0.energy)
        points = gamma_profile(
            w0.pair, self.couplings, self.perturbation, self.config.y_list, threads=self.threads
        )
        return [(g.y, g.t_y, g.energy, g.barycenter) for g in points]

    def _threshold(self) -> list[tuple]:
        c0 = self.limit_ground_state().energy if self.config.d0 is not None else None
        report = r0_threshold(
            self.couplings, self.perturbation, c0=c0, d0=self.config.d0, w0=self.soliton().peak
        )
        return [(report.r0, report.bound, report.satisfied, report.hypothesis)]

    def _compare(self) -> list[tuple]:
        report = comparison_check(self.limit_ground_state().pair, self.couplings, self.perturbation)
        return [(
            report.criterion01_lhs, report.criterion01_rhs, report.less2,
            report.criterion01, report.criterion02, report.criterion03, report.criterion04,
            report.conclusion,
        )]

    def _bound(self) -> list[tuple]:
        c0 = self.limit_ground_state().energy
        report = constrained_search(
            self.couplings, self.perturbation, self.config.tol,
            init=self.initial_pair(),
            penalty_schedule=self.config.penalty_schedule,
            max_iter=self.config.max_iter,
        )
        point = barycenter(report.pair)
        return [(report.energy, c0, report.energy - c0, point.norm, report.iterations, report.converged)]
