"""
Pydantic models for configuration and result serialization.

This package contains schemas organized by domain:
- system.py: system and cellular configurations
- solver.py: solver options and solve reports
- experiment.py: experiment files and result rows
"""

from .system import (
    ChannelKind,
    SystemConfig,
    CellularConfig,
    AnySystemConfig,
    load_system_config,
)

from .solver import (
    SolveStatus,
    SolverOptions,
    SolveReport,
    worst_status,
)

from .experiment import (
    SCHEMA_VERSION,
    RESULT_COLUMNS,
    AlgorithmVariant,
    ExperimentSpec,
    ResultRow,
)

__all__ = [
    # System
    'ChannelKind',
    'SystemConfig',
    'CellularConfig',
    'AnySystemConfig',
    'load_system_config',

    # Solver
    'SolveStatus',
    'SolverOptions',
    'SolveReport',
    'worst_status',

    # Experiment
    'SCHEMA_VERSION',
    'RESULT_COLUMNS',
    'AlgorithmVariant',
    'ExperimentSpec',
    'ResultRow',
]
