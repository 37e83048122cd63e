"""
Utility functions and helpers.

This package contains:
- logging_utils.py: Logging configuration and helper functions
- seeding.py: Splittable per-trial seed derivation
"""

from .logging_utils import (
    logger,
    set_verbosity,
    log_run_lifecycle,
    log_run_health,
    log_trial,
    log_solver_report,
    log_error,
    log_file_operation,
)

from .seeding import compute_sha256, derive_trial_seed, make_rng

__all__ = [
    'logger',
    'set_verbosity',
    'log_run_lifecycle',
    'log_run_health',
    'log_trial',
    'log_solver_report',
    'log_error',
    'log_file_operation',
    'compute_sha256',
    'derive_trial_seed',
    'make_rng',
]
