"""Logging setup shared by the CLI and long-running experiment scripts."""
from __future__ import annotations

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Iterable, Optional

_DEFAULT_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
_NOISY_LOGGERS: Iterable[str] = ("concurrent.futures",)


def _parse_log_level(value: str | None, fallback: int) -> int:
    """Convert a level name such as ``"debug"`` to a logging level."""

    if not value:
        return fallback

    level = getattr(logging, value.upper(), None)
    return level if isinstance(level, int) else fallback


def configure_root_logger(
    *,
    service_name: str,
    env_prefix: str = "NLS_",
    level: Optional[str] = None,
    default_level: str = "INFO",
    default_log_dir: str = "",
    max_bytes: Optional[int] = None,
    backup_count: Optional[int] = None,
) -> Optional[Path]:
    """Configure a root logger that streams to stdout and optionally to a file.

    Parameters
    ----------
    service_name:
        Identifier used for the on-disk log file name.
    env_prefix:
        Prefix used when reading ``{prefix}LOG_LEVEL`` and ``{prefix}LOG_DIR``.
        The unprefixed ``LOG_LEVEL`` / ``LOG_DIR`` are used as fallbacks.
    level:
        Explicit level (e.g. from ``--log-level``); wins over the environment.
    default_level:
        Level applied when neither ``level`` nor an environment variable is set.
    default_log_dir:
        Directory for the log file when no ``LOG_DIR`` is set. The empty string
        disables file logging.
    max_bytes / backup_count:
        Rotation settings for the file handler (defaults 1 MiB and 5 backups).

    Returns
    -------
    pathlib.Path | None
        The log file path when file logging is active; otherwise ``None``.
    """

    resolved_level = _parse_log_level(
        level or os.getenv(f"{env_prefix}LOG_LEVEL") or os.getenv("LOG_LEVEL"),
        _parse_log_level(default_level, logging.INFO),
    )

    log_dir_setting = os.getenv(f"{env_prefix}LOG_DIR")
    if log_dir_setting is None:
        log_dir_setting = os.getenv("LOG_DIR", default_log_dir)

    stream_handler = logging.StreamHandler(sys.stdout)
    stream_handler.setFormatter(logging.Formatter(_DEFAULT_FORMAT))
    handlers: list[logging.Handler] = [stream_handler]

    log_path: Optional[Path] = None
    if log_dir_setting:
        log_dir = Path(log_dir_setting).expanduser()
        log_dir.mkdir(parents=True, exist_ok=True)
        log_path = log_dir / f"{service_name}.log"

        file_handler = RotatingFileHandler(
            log_path,
            maxBytes=max_bytes or int(os.getenv(f"{env_prefix}LOG_MAX_BYTES", 1_048_576)),
            backupCount=backup_count or int(os.getenv(f"{env_prefix}LOG_BACKUP_COUNT", 5)),
            encoding="utf-8",
        )
        file_handler.setFormatter(logging.Formatter(_DEFAULT_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(handlers=handlers, level=resolved_level, force=True)

    for noisy in _NOISY_LOGGERS:
        logging.getLogger(noisy).setLevel(logging.WARNING)

    return log_path
