"""
Result writer for persisting run tables and manifests to disk.

Tables are UTF-8 CSV with 17-significant-digit floats so that identical
runs produce byte-identical files. Every run also leaves a JSON manifest
that can be fed back as a config.
"""
import csv
import json
import logging
import platform
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
import pydantic
import scipy

import app
from app.errors import ConfigError
from app.models.config import RunConfig
from app.models.couplings import FieldPair
from app.models.grid import RadialGrid


logger = logging.getLogger("app.state.writer")

MANIFEST_NAME = "manifest.json"


def format_cell(value: Any) -> str:
    """CSV text for one value"""
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def versions() -> dict[str, str]:
    return {
        "coupled-nls": app.__version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pydantic": pydantic.VERSION,
    }


class ResultWriter:
    """
    Writes the output files of a run.

    Files for one run share ``base_dir``:
    - ``<command>.csv`` with the command's fixed columns
    - ``manifest.json`` with the resolved config, command and versions
    """

    def __init__(self, base_dir: str = "results"):
        """
        Initialize result writer.

        Args:
            base_dir: Directory receiving the run's files
        """
        self.base_dir = Path(base_dir)

    def _prepare(self) -> None:
        self.base_dir.mkdir(parents=True, exist_ok=True)

    def write_table(
        self,
        name: str,
        columns: Sequence[str],
        rows: Iterable[Sequence[Any]],
    ) -> Path:
        """
        Write one CSV table.

        Args:
            name: File stem, usually the command name
            columns: Header row
            rows: Data rows, each as long as ``columns``

        Returns:
            Path of the written file
        """
        self._prepare()
        path = self.base_dir / f"{name}.csv"
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                if len(row) != len(columns):
                    raise ValueError(f"row of length {len(row)} for {len(columns)} columns")
                writer.writerow([format_cell(value) for value in row])
        logger.info("Wrote %s", path)
        return path

    def write_pair(self, name: str, pair: FieldPair) -> Path:
        """Write a field pair as ``x,u,v`` rows"""
        grid = pair.grid
        rows = zip(grid.r, pair.u.values, pair.v.values)
        return self.write_table(name, ("x", "u", "v"), rows)

    def write_manifest(self, command: str, config: RunConfig) -> Path:
        """Resolved config plus ``command`` and ``versions``; valid as a config file"""
        self._prepare()
        manifest = config.resolved()
        manifest["command"] = command
        manifest["versions"] = versions()
        path = self.base_dir / MANIFEST_NAME
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    @staticmethod
    def read_pair(path: Path, grid: RadialGrid) -> FieldPair:
        """Load an ``x,u,v`` table written by ``write_pair`` onto ``grid``"""
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"pair file not found: {path}")
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != ["x", "u", "v"]:
                raise ConfigError(f"{path}: expected header x,u,v")
            try:
                data = np.array([[float(cell) for cell in row] for row in reader if row])
            except ValueError as exc:
                raise ConfigError(f"{path}: {exc}") from exc

        if data.shape != (grid.nodes, 3) or not np.allclose(data[:, 0], grid.r, atol=1e-9 * grid.radius):
            raise ConfigError(f"{path}: grid mismatch between pair file and config grid")
        return FieldPair.from_arrays(grid, data[:, 1], data[:, 2])
