"""
Logging for the solvers, diagnostics and CLI.

Console output is colorized and always goes to stderr so that JSON printed by
the CLI on stdout stays machine readable. A rotating file handler is attached
when a log file is given.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

import colorlog

CONSOLE_FORMAT = "%(log_color)s%(asctime)s %(levelname)-8s%(reset)s %(name)s: %(message)s"
FILE_FORMAT = "%(asctime)s %(levelname)s %(name)s %(funcName)s:%(lineno)d %(message)s"
DATE_FORMAT = "%H:%M:%S"
LEVEL_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red,bg_white",
}


class SolverLogger(logging.LoggerAdapter):
    """
    Adapter over a stdlib logger with helpers for iterative solves and
    certificates. The standard debug/info/warning/error/exception calls pass
    straight through.
    """

    def solve_progress(self, stage: str, iteration: int, residual: float):
        """One iteration of an iterative solve, at DEBUG."""
        self.debug(f"[{stage}] iter {iteration:4d}  residual {residual:.3e}")

    def stage_report(self, stage: str, method: str, iterations: int, residual: float):
        """Outcome of a solver stage."""
        self.info(f"[{stage}] {method}: {iterations} iterations, residual {residual:.3e}")

    def certificate(self, name: str, measured: float, threshold: float, passed: bool):
        """
        Inequality or identity check. Failures are logged as warnings; the
        caller decides whether a failure is fatal.
        """
        log = self.info if passed else self.warning
        log(f"certificate {name}: {measured:.3e} vs bound {threshold:.3e} -> {'PASS' if passed else 'FAIL'}")


def _console_handler() -> logging.Handler:
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(CONSOLE_FORMAT, datefmt=DATE_FORMAT, log_colors=LEVEL_COLORS))
    return handler


def _file_handler(log_file: str, max_bytes: int, backup_count: int) -> logging.Handler:
    Path(log_file).parent.mkdir(parents=True, exist_ok=True)
    handler = RotatingFileHandler(log_file, maxBytes=max_bytes, backupCount=backup_count)
    handler.setFormatter(logging.Formatter(FILE_FORMAT))
    return handler


def get_logger(name: str, log_level: str = "INFO", log_file: Optional[str] = None,
               max_bytes: int = 10 * 1024 * 1024, backup_count: int = 5) -> SolverLogger:
    """
    Logger for a module.

    Handlers are attached once per name; later calls only update the level.

    Args:
        name: Logger name (usually __name__)
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        log_file: Optional path of a rotating log file
    """
    base = logging.getLogger(name)
    base.setLevel(getattr(logging, log_level.upper()))
    base.propagate = False
    if not base.handlers:
        base.addHandler(_console_handler())
        if log_file:
            base.addHandler(_file_handler(log_file, max_bytes, backup_count))
    return SolverLogger(base, {})
