"""Interference alignment by alternating nuclear-norm minimization.

Subpackages:
- numerics: linear-algebra primitives with explicit tolerances
- schemas: pydantic models for systems, solver options and experiments
- model: channel generation and serialization
- core: signal/interference algebra and rate metrics
- cvxsolve: the convex precoder / zero-forcer subproblems
- algorithms: the alternating heuristic and its baselines
- harness: experiment files, Monte-Carlo runner and CLI
"""

from rcrm_ia.config import settings

__version__ = settings.VERSION

__all__ = ["__version__", "settings"]
