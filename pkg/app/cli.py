"""
Command-line front end.

    coupled-nls <command> --config run.json [--out DIR] [--seed N] [--threads N]

Each command writes ``<command>.csv`` and ``manifest.json`` into the output
directory. Exit codes: 0 success, 1 invalid config, 2 numerical failure.
"""
import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from app.errors import ConfigError, NumericalError
from app.logging_utils import configure_root_logger
from app.models.config import load_config
from app.models.enums import Command
from app.state.experiment_runner import COLUMNS, ExperimentRunner
from app.state.result_writer import ResultWriter


logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

DESCRIPTIONS = {
    Command.SCALAR: "solve -Δw + w = w³ for the radial soliton",
    Command.GROUND: "minimize the energy on the Nehari manifold (also writes ground_profile.csv)",
    Command.SWEEP_KAPPA: "warm-started ground states along kappa_list",
    Command.SPECTRUM: "weighted eigenvalues and the nondegeneracy verdict",
    Command.BARYCENTER: "barycenter of the pair stored in pair_file",
    Command.GAMMA: "energy along the translated path over y_list",
    Command.THRESHOLD: "R₀ against the bound-state threshold",
    Command.COMPARE: "sufficient criteria for a ground state of the perturbed system",
    Command.BOUND: "barycenter-constrained search (upper estimate of the linking level)",
}


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def _threads(value: str) -> int:
    threads = int(value)
    if threads < 1:
        raise argparse.ArgumentTypeError("threads must be at least 1")
    return threads


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run config (a run manifest also works)")
    common.add_argument(
        "--out",
        default=os.getenv("NLS_OUT_DIR", "results"),
        help="Output directory (default: $NLS_OUT_DIR or ./results)",
    )
    common.add_argument("--seed", type=_seed, default=None, help="Seed for init=random")
    common.add_argument("--threads", type=_threads, default=1, help="Worker threads for sweeps")
    common.add_argument(
        "--log-level",
        default=None,
        help="Override NLS_LOG_LEVEL (DEBUG, INFO, WARNING, ...)",
    )

    parser = argparse.ArgumentParser(
        prog="coupled-nls",
        description="Coupled nonlinear Schrödinger toolkit",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for command in Command:
        subparsers.add_parser(
            command.value,
            parents=[common],
            help=DESCRIPTIONS[command],
            description=DESCRIPTIONS[command],
            epilog=f"CSV columns: {','.join(COLUMNS[command])}",
        )
    return parser


def run(command: Command, config_path: str, out_dir: str, seed: Optional[int] = None, threads: int = 1) -> int:
    """Run one command; returns the exit code"""
    try:
        config = load_config(config_path)
        runner = ExperimentRunner(config, ResultWriter(out_dir), seed=seed, threads=threads)
    except (ValueError, OSError) as exc:
        # ConfigError and pydantic's ValidationError are both ValueErrors
        return _fail(EXIT_CONFIG, "Invalid configuration", exc)

    try:
        path = runner.run(command)
    except ValidationError as exc:
        # a solver result that breaks its model invariants
        return _fail(EXIT_NUMERICAL, "Numerical failure", NumericalError(str(exc)))
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, "Numerical failure", exc)
    except (ConfigError, OSError) as exc:
        return _fail(EXIT_CONFIG, "Invalid configuration", exc)

    logger.info("%s finished: %s", command.value, path)
    return EXIT_OK


def _fail(code: int, label: str, exc: Exception) -> int:
    logger.error("%s: %s", label, exc)
    print(f"error: {exc}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_root_logger(service_name="coupled-nls", level=args.log_level)
    return run(Command(args.command), args.config, args.out, seed=args.seed, threads=args.threads)


if __name__ == "__main__":
    sys.exit(main())
