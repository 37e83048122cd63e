"""
Logging Utilities Module

This module provides specialized logging functions to standardize
logging across solver runs, Monte-Carlo trials and the command line.
"""

import logging
import os
import sys
from datetime import datetime
from typing import Any, Dict, Optional

import psutil

from rcrm_ia.config import settings

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Set up logger (guarded to avoid duplicate handlers on re-import or worker spawn)
logger = logging.getLogger("rcrm_ia")
logger.setLevel(getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO))
logger.propagate = False

if not logger.handlers:
    ch = logging.StreamHandler(sys.stderr)
    ch.setLevel(logging.DEBUG)
    ch.setFormatter(logging.Formatter(_FORMAT, datefmt='%H:%M:%S'))
    logger.addHandler(ch)

    if settings.LOG_DIR:
        os.makedirs(settings.LOG_DIR, exist_ok=True)
        fh = logging.FileHandler(os.path.join(settings.LOG_DIR, 'rcrm_ia.log'))
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(logging.Formatter(_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
        logger.addHandler(fh)


def set_verbosity(verbose: bool) -> None:
    """Switch the package logger between INFO and DEBUG."""
    logger.setLevel(logging.DEBUG if verbose else
                    getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO))


def log_run_lifecycle(event: str, details: Optional[Dict] = None) -> None:
    """Log experiment lifecycle events (start, finish, abort).

    Args:
        event: The lifecycle event.
        details: Additional details about the event.
    """
    logger.info("[RUN] %s at %s", event, datetime.now().isoformat(timespec="seconds"))
    if details:
        logger.info("[RUN] details: %s", details)


def log_run_health() -> None:
    """Log resource usage of the current process."""
    process = psutil.Process()
    logger.info("[RUN] Memory usage: %.2f MB", process.memory_info().rss / 1024 / 1024)
    logger.info("[RUN] Thread count: %d", process.num_threads())
    logger.info("[RUN] CPU time: %.2f s", sum(process.cpu_times()[:2]))


def log_trial(trial: int, algorithm: str, success: bool, elapsed: float,
              details: Optional[Dict[str, Any]] = None) -> None:
    """Log the outcome of one algorithm run inside a Monte-Carlo trial.

    Args:
        trial: Trial index.
        algorithm: Algorithm tag (including budget variant).
        success: Whether the run produced filters.
        elapsed: Wall time in seconds.
        details: Optional extra fields.
    """
    status = "ok" if success else "FAILED"
    msg = "[TRIAL %d] %s %s in %.2fs"
    args = [trial, algorithm, status, elapsed]
    if details:
        msg += " - %s"
        args.append(details)
    if success:
        logger.info(msg, *args)
    else:
        logger.warning(msg, *args)


def log_solver_report(name: str, report: Any) -> None:
    """Log a subproblem solve report at DEBUG (WARNING when not optimal).

    Args:
        name: Subproblem name, e.g. ``A_V`` or ``A_U[2]``.
        report: A ``SolveReport``.
    """
    level = logging.DEBUG if report.status.value == "optimal" else logging.WARNING
    logger.log(
        level,
        "[SOLVE] %s status=%s objective=%.6g feas=%.2e iters=%d",
        name, report.status.value, report.objective,
        report.primal_feasibility, report.iterations,
    )


def log_error(msg: str, exc: Optional[Exception] = None,
              context: Optional[Dict] = None) -> None:
    """Log an error with optional exception and context.

    Args:
        msg: Error message
        exc: Optional exception that caused the error
        context: Additional context about the error
    """
    log_msg = f"Error: {msg}"
    if context:
        log_msg += f" | context: {context}"

    if exc is not None and logger.isEnabledFor(logging.DEBUG):
        logger.error(log_msg, exc_info=exc)
    else:
        logger.error(log_msg)


def log_file_operation(operation: str, file_path: str, success: bool,
                       details: Optional[Dict[str, Any]] = None) -> None:
    """Log file operations with details.

    Args:
        operation: Type of file operation (e.g., 'read', 'write')
        file_path: Path to the file being operated on
        success: Whether the operation was successful
        details: Additional details about the operation
    """
    status = "succeeded" if success else "failed"
    log_msg = f"[FILE] Operation '{operation}' {status} for file: {file_path}"
    if details:
        log_msg = f"{log_msg} - Details: {details}"

    if success:
        logger.info(log_msg)
    else:
        logger.error(log_msg)
